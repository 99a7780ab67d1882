"""Quadratic characters, discriminants, factorization and p-adic valuations."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import TYPE_CHECKING

from sympy import factorint, isprime, jacobi_symbol, multiplicity

from twistsha.domain.errors import InvalidDiscriminantError, InvalidInputError
from twistsha.domain.models import Discriminant, DiscriminantKind, Factorization

if TYPE_CHECKING:
    from collections.abc import Iterator


def is_squarefree(n: int) -> bool:
    return all(exponent == 1 for exponent in factorint(abs(n)).values())


@lru_cache(maxsize=4096)
def classify_discriminant(d: int) -> Discriminant:
    """Classifies D as fundamental, non-fundamental or invalid."""
    if d == 0:
        raise InvalidInputError("discriminant must be nonzero")
    residue = d % 4
    if residue == 1:
        fundamental = is_squarefree(d)
    elif residue == 0:
        m = d // 4
        fundamental = m % 4 in (2, 3) and is_squarefree(m)
    else:
        return Discriminant(value=d, kind=DiscriminantKind.INVALID)
    kind = DiscriminantKind.FUNDAMENTAL if fundamental else DiscriminantKind.NON_FUNDAMENTAL
    return Discriminant(value=d, kind=kind)


def require_discriminant(d: int) -> Discriminant:
    """Classifies D and rejects anything that is not 0 or 1 mod 4."""
    disc = classify_discriminant(d)
    if not disc.is_valid:
        raise InvalidDiscriminantError(f"{d} is not a quadratic discriminant")
    return disc


def _kronecker_two(d: int) -> int:
    if d % 2 == 0:
        return 0
    return 1 if d % 8 in (1, 7) else -1


def kronecker(d: int, n: int) -> int:
    """Kronecker symbol (D/n), the quadratic character chi_D evaluated at n."""
    require_discriminant(d)
    if n == 0:
        return 1 if abs(d) == 1 else 0

    result = 1
    if n < 0:
        n = -n
        if d < 0:
            result = -result
    while n % 2 == 0:
        n //= 2
        result *= _kronecker_two(d)
        if result == 0:
            return 0
    if n == 1:
        return result
    return result * int(jacobi_symbol(d % n, n))


def padic_valuation(p: int, x: int | Fraction) -> int:
    """v_p(x) = v_p(numerator) - v_p(denominator)."""
    if not isprime(p):
        raise InvalidInputError(f"{p} is not prime")
    x = Fraction(x)
    if x == 0:
        raise InvalidInputError("the valuation of zero is undefined")
    return int(multiplicity(p, abs(x.numerator))) - int(multiplicity(p, x.denominator))


def factorize(n: int) -> Factorization:
    """Signed prime factorization; deterministic for |n| < 2^64."""
    if n == 0:
        raise InvalidInputError("cannot factor zero")
    factors = {int(prime): int(exponent) for prime, exponent in factorint(abs(n)).items()}
    return Factorization(sign=1 if n > 0 else -1, factors=factors)


def render_factored(n: int) -> str:
    """Renders `n=factorization`, e.g. `-6480=-2^4·3^4·5`; zero renders as `0`."""
    if n == 0:
        return "0"
    return f"{n}={factorize(n).render()}"


def fundamental_discriminants(limit: int, divisible_by: int = 1) -> Iterator[int]:
    """Positive fundamental discriminants up to limit, optionally divisible by a prime."""
    for d in range(divisible_by, limit + 1, divisible_by):
        if d % 4 in (0, 1) and classify_discriminant(d).is_fundamental and d > 1:
            yield d
