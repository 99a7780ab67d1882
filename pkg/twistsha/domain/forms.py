"""Named modular-form expansions and the plus-space lift of Delta."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import TYPE_CHECKING

import structlog
from sympy import divisor_sigma, divisors, mobius

from twistsha.domain.arith import classify_discriminant, kronecker
from twistsha.domain.errors import ConsistencyError, InvalidInputError
from twistsha.domain.models import FormId, PlusCoefficient
from twistsha.domain.qseries import QSeries, dilate, lincomb, q_derivative

if TYPE_CHECKING:
    from collections.abc import Callable

logger = structlog.get_logger()

# Encodes the reading G4'(4z) = (G4')(4z) of the lift formula; cache files
# written under any other version are discarded.
FORMULA_VERSION = "kz-deriv-then-dilate-v1"


def sigma3(n: int) -> int:
    """Sum of the cubes of the positive divisors of n."""
    if n < 1:
        raise InvalidInputError(f"sigma3 needs a positive integer, got {n}")
    return int(divisor_sigma(n, 3))


def g4_series(prec: int) -> QSeries:
    """G4 = 1/240 + sum sigma3(n) q^n."""
    return QSeries([Fraction(1, 240), *(sigma3(n) for n in range(1, prec + 1))], prec)


def theta_series(prec: int) -> QSeries:
    """theta = 1 + 2 sum q^(n^2)."""
    coeffs = [0] * (prec + 1)
    coeffs[0] = 1
    n = 1
    while n * n <= prec:
        coeffs[n * n] = 2
        n += 1
    return QSeries(coeffs, prec)


def euler_product(prec: int) -> QSeries:
    """prod (1 - q^n) by the pentagonal number theorem."""
    coeffs = [0] * (prec + 1)
    coeffs[0] = 1
    m = 1
    while m * (3 * m - 1) // 2 <= prec:
        sign = -1 if m % 2 else 1
        for exponent in (m * (3 * m - 1) // 2, m * (3 * m + 1) // 2):
            if exponent <= prec:
                coeffs[exponent] = sign
        m += 1
    return QSeries(coeffs, prec)


def euler_cube(prec: int) -> QSeries:
    """prod (1 - q^n)^3 = sum (-1)^m (2m + 1) q^(m(m+1)/2)."""
    coeffs = [0] * (prec + 1)
    m = 0
    while m * (m + 1) // 2 <= prec:
        coeffs[m * (m + 1) // 2] = (-1) ** m * (2 * m + 1)
        m += 1
    return QSeries(coeffs, prec)


def _times_q(series: QSeries) -> QSeries:
    return QSeries([0, *series.coeffs], series.prec + 1)


def _require_prec(prec: int, minimum: int) -> None:
    if prec < minimum:
        raise InvalidInputError(f"precision must be at least {minimum}, got {prec}")


@lru_cache(maxsize=16)
def delta_series(prec: int) -> QSeries:
    """Delta = q prod (1 - q^n)^24, with coefficients tau(n)."""
    _require_prec(prec, 1)
    cube = euler_cube(prec - 1)
    power = cube
    for _ in range(7):
        power = power * cube
    delta = _times_q(power)
    delta.to_integers()
    logger.debug("Delta expansion computed", prec=prec)
    return delta


@lru_cache(maxsize=16)
def x0_11_series(prec: int) -> QSeries:
    """Weight-2 newform of level 11: q prod (1 - q^n)^2 (1 - q^(11n))^2."""
    _require_prec(prec, 1)
    eta = euler_product(prec - 1)
    eta_11 = euler_product((prec - 1) // 11)
    eta_11 = dilate(eta_11 * eta_11, 11).truncate(prec - 1)
    newform = _times_q(eta * eta * eta_11)
    newform.to_integers()
    return newform


@lru_cache(maxsize=16)
def kohnen_lift(prec: int) -> QSeries:
    """Plus-space form g of weight 13/2 mapping to Delta.

    In terms of D = q d/dq, g = 120 G4(4z) D(theta) - 60 (D G4)(4z) theta; the
    factor 2*pi*i of each z-derivative cancels against the prefactor 60/(2*pi*i).
    """
    _require_prec(prec, 1)
    g4 = g4_series(prec // 4)
    theta = theta_series(prec)
    g4_at_4z = dilate(g4, 4).truncate(prec)
    dg4_at_4z = dilate(q_derivative(g4), 4).truncate(prec)
    lift = lincomb(g4_at_4z * q_derivative(theta), 120, dg4_at_4z * theta, -60)
    lift.to_integers()
    logger.info("Kohnen lift computed", prec=prec, version=FORMULA_VERSION)
    return lift


GENERATORS: dict[FormId, Callable[[int], QSeries]] = {
    FormId.DELTA: delta_series,
    FormId.G4: g4_series,
    FormId.THETA: theta_series,
    FormId.X0_11: x0_11_series,
    FormId.KOHNEN_LIFT: kohnen_lift,
}


def generate(form: FormId, prec: int) -> QSeries:
    """Expansion of a named form through q^prec."""
    return GENERATORS[form](prec)


def integer_coeff(series: QSeries, n: int) -> int:
    value = series.coeff(n)
    if value.denominator != 1:
        raise ConsistencyError(f"coefficient of q^{n} is non-integral: {value}")
    return value.numerator


def plus_coeff(n: int, lift: QSeries | None = None) -> PlusCoefficient:
    """c_n of the plus-space lift, read from `lift` when it is precise enough."""
    if n < 1:
        raise InvalidInputError(f"coefficient index must be positive, got {n}")
    if lift is None or lift.prec < n:
        lift = kohnen_lift(n)
    value = integer_coeff(lift, n)
    if n % 4 in (2, 3) and value != 0:
        raise ConsistencyError(f"c_{n} = {value} violates plus-space support")
    return PlusCoefficient(index=n, value=value)


def tau(n: int, series: QSeries | None = None) -> int:
    """Ramanujan's tau(n)."""
    if series is None or series.prec < n:
        series = delta_series(max(n, 1))
    return integer_coeff(series, n)


def x0_11_coefficient(n: int, series: QSeries | None = None) -> int:
    if series is None or series.prec < n:
        series = x0_11_series(max(n, 1))
    return integer_coeff(series, n)


def shimura_coefficient(c_d: int, d: int, n: int, tau_series: QSeries, k: int = 12) -> int:
    """c(D n^2) from c(D) and tau through the Hecke action on the plus space.

    c(D n^2) = c(D) * sum_{e | n} mu(e) chi_D(e) e^(k/2 - 1) tau(n/e), valid for
    fundamental D with (-1)^(k/2) D > 0.
    """
    if not classify_discriminant(d).is_fundamental or (-1) ** (k // 2) * d <= 0:
        raise InvalidInputError(f"{d} is not an admissible fundamental discriminant")
    if n < 1:
        raise InvalidInputError(f"n must be positive, got {n}")
    total = 0
    for e in divisors(n):
        mu = int(mobius(e))
        if mu:
            total += mu * kronecker(d, e) * e ** (k // 2 - 1) * tau(n // e, tau_series)
    return c_d * total
