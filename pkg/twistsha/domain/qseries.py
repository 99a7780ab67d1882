"""Truncated power series in q with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import TYPE_CHECKING

from twistsha.domain.errors import ConsistencyError, PrecisionError

if TYPE_CHECKING:
    from collections.abc import Iterable, Iterator

Rational = Fraction | int


class QSeries:
    """Series sum a_i q^i whose coefficients are known through q^prec.

    Instances are immutable. Every binary operation truncates to the smaller
    precision of its operands, so a result never claims more than its inputs
    determine.
    """

    __slots__ = ("_coeffs", "_prec")

    def __init__(self, coeffs: Iterable[Rational], prec: int | None = None) -> None:
        values = tuple(Fraction(c) for c in coeffs)
        if prec is None:
            prec = len(values) - 1
        if prec < 0:
            raise ValueError("precision must be non-negative")
        if len(values) > prec + 1:
            values = values[: prec + 1]
        elif len(values) < prec + 1:
            values += (Fraction(0),) * (prec + 1 - len(values))
        self._coeffs = values
        self._prec = prec

    @classmethod
    def zero(cls, prec: int) -> QSeries:
        return cls((), prec)

    @classmethod
    def one(cls, prec: int) -> QSeries:
        return cls((1,), prec)

    @classmethod
    def monomial(cls, exponent: int, prec: int, scale: Rational = 1) -> QSeries:
        """Returns scale * q^exponent known through q^prec."""
        if exponent < 0:
            raise ValueError("exponent must be non-negative")
        if exponent > prec:
            return cls.zero(prec)
        return cls([0] * exponent + [scale], prec)

    @property
    def prec(self) -> int:
        return self._prec

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._coeffs

    def __len__(self) -> int:
        return self._prec + 1

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self._coeffs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return self._prec == other._prec and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash((self._prec, self._coeffs))

    def __repr__(self) -> str:
        head = ", ".join(str(c) for c in self._coeffs[:6])
        tail = ", ..." if self._prec >= 6 else ""
        return f"QSeries(prec={self._prec}, coeffs=[{head}{tail}])"

    def __add__(self, other: QSeries) -> QSeries:
        return lincomb(self, 1, other, 1)

    def __sub__(self, other: QSeries) -> QSeries:
        return lincomb(self, 1, other, -1)

    def __neg__(self) -> QSeries:
        return QSeries((-c for c in self._coeffs), self._prec)

    def __mul__(self, other: QSeries | Rational) -> QSeries:
        if isinstance(other, QSeries):
            return mul(self, other)
        return QSeries((c * other for c in self._coeffs), self._prec)

    def __rmul__(self, other: Rational) -> QSeries:
        return QSeries((other * c for c in self._coeffs), self._prec)

    def coeff(self, i: int) -> Fraction:
        return coeff(self, i)

    def truncate(self, prec: int) -> QSeries:
        """Forgets every coefficient above q^prec."""
        if prec > self._prec:
            raise PrecisionError(
                f"cannot truncate a series known to q^{self._prec} at q^{prec}"
            )
        return QSeries(self._coeffs[: prec + 1], prec)

    def nonzero_count(self) -> int:
        return sum(1 for c in self._coeffs if c)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self._coeffs)

    def to_integers(self) -> list[int]:
        """Returns the coefficients as ints, failing loudly on any fraction."""
        for i, c in enumerate(self._coeffs):
            if c.denominator != 1:
                raise ConsistencyError(f"coefficient of q^{i} is non-integral: {c}")
        return [c.numerator for c in self._coeffs]


def lincomb(a: QSeries, ca: Rational, b: QSeries, cb: Rational) -> QSeries:
    """Returns ca*a + cb*b through the shared precision."""
    prec = min(a.prec, b.prec)
    ca, cb = Fraction(ca), Fraction(cb)
    return QSeries(
        (ca * x + cb * y for x, y in zip(a.coeffs[: prec + 1], b.coeffs, strict=False)),
        prec,
    )


def _scaled_numerators(series: QSeries, prec: int) -> tuple[int, list[int]]:
    """Clears denominators: returns (den, nums) with a_i = nums[i] / den."""
    head = series.coeffs[: prec + 1]
    den = lcm(*(c.denominator for c in head))
    return den, [c.numerator * (den // c.denominator) for c in head]


def mul(a: QSeries, b: QSeries) -> QSeries:
    """Cauchy product truncated at the shared precision.

    The product runs over integers after clearing denominators and iterates
    over the nonzero terms of the sparser factor, which keeps theta-type
    products linear in the precision times the number of nonzero terms.
    """
    prec = min(a.prec, b.prec)
    den_a, nums_a = _scaled_numerators(a, prec)
    den_b, nums_b = _scaled_numerators(b, prec)

    sparse, dense = nums_a, nums_b
    if sum(1 for x in nums_b if x) < sum(1 for x in nums_a if x):
        sparse, dense = nums_b, nums_a

    out = [0] * (prec + 1)
    for i, c in enumerate(sparse):
        if not c:
            continue
        out[i:] = [o + c * d for o, d in zip(out[i:], dense, strict=False)]

    den = den_a * den_b
    return QSeries((Fraction(x, den) for x in out), prec)


def q_derivative(a: QSeries) -> QSeries:
    """Applies D = q d/dq, which multiplies the coefficient of q^i by i."""
    return QSeries((i * c for i, c in enumerate(a.coeffs)), a.prec)


def dilate(a: QSeries, m: int) -> QSeries:
    """Substitutes q -> q^m.

    The result is known through q^(m*prec + m - 1): the first coefficient the
    input does not determine sits at q^(m*(prec + 1)).
    """
    if m < 1:
        raise ValueError("dilation factor must be a positive integer")
    prec = m * a.prec + (m - 1)
    out = [Fraction(0)] * (prec + 1)
    out[::m] = a.coeffs
    return QSeries(out, prec)


def coeff(a: QSeries, i: int) -> Fraction:
    """Returns the coefficient of q^i, refusing to guess beyond the precision."""
    if i < 0:
        raise PrecisionError(f"negative exponent {i}")
    if i > a.prec:
        raise PrecisionError(f"q^{i} is beyond the precision q^{a.prec}")
    return a.coeffs[i]
