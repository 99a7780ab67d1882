"""Tests for modular-form expansions and the plus-space lift."""

from fractions import Fraction
from math import gcd

import pytest
from sympy import primerange

from twistsha.domain.arith import fundamental_discriminants
from twistsha.domain.errors import ConsistencyError, InvalidInputError
from twistsha.domain.forms import (
    delta_series,
    euler_cube,
    euler_product,
    g4_series,
    generate,
    kohnen_lift,
    plus_coeff,
    shimura_coefficient,
    sigma3,
    tau,
    theta_series,
    x0_11_coefficient,
    x0_11_series,
)
from twistsha.domain.models import FormId
from twistsha.domain.qseries import QSeries

ELEVEN_TABLE = {
    2: 0,
    3: -6480,
    4: -43680,
    5: 0,
    6: 0,
    7: 110880,
    8: -153120,
    40: -25903680,
    41: 0,
    42: 0,
    43: -6850800,
    44: -20919416,
    45: 0,
    46: 0,
    47: 52000080,
}

SIXTY_SEVEN_TABLE = {
    2: 0,
    3: -2686320,
    4: -4016160,
    5: 0,
    6: 0,
    7: -32215680,
    8: 24612000,
    36: -36145440,
    37: 0,
    38: 0,
    39: -981246240,
    40: 3359129280,
    41: 0,
    42: 0,
    43: -2622438960,
}


@pytest.fixture(scope="module")
def lift_3000():
    """Plus-space lift through q^3000."""
    return kohnen_lift(3000)


@pytest.fixture(scope="module")
def delta_3000():
    """Delta through q^3000."""
    return delta_series(3000)


def test_sigma3():
    """Tests divisor cube sums."""
    assert [sigma3(n) for n in range(1, 5)] == [1, 9, 28, 73]
    with pytest.raises(InvalidInputError):
        sigma3(0)


def test_small_expansions():
    """Tests the first coefficients of the named forms."""
    assert delta_series(5).to_integers() == [0, 1, -24, 252, -1472, 4830]
    assert theta_series(4).to_integers() == [1, 2, 0, 0, 2]
    assert g4_series(2).coeffs == (Fraction(1, 240), 1, 9)
    assert x0_11_series(11).to_integers() == [0, 1, -2, -1, 2, 1, 2, -2, 0, -2, -2, 1]
    assert kohnen_lift(12).to_integers() == [0, 1, 0, 0, -56, 120, 0, 0, -240, 9, 0, 0, 1440]


def test_generate_dispatches_on_form():
    """Tests generation by form tag."""
    assert generate(FormId.KOHNEN_LIFT, 1).to_integers() == [0, 1]
    assert generate(FormId.THETA, 9).coeff(9) == 2
    assert not generate(FormId.G4, 3).is_integral()


def test_minimum_precision():
    """Tests that cusp forms need at least q^1."""
    with pytest.raises(InvalidInputError):
        delta_series(0)


def test_euler_product_cubed_is_jacobi_expansion():
    """Tests prod (1 - q^n)^3 against the triangular-number expansion."""
    eta = euler_product(200)
    assert eta * eta * eta == euler_cube(200)


def test_tau_values():
    """Tests Ramanujan's tau at the primes used in the certificates."""
    assert tau(11) == 534612
    assert tau(13) == -577738
    assert tau(11) % 11 == 1


def test_eleven_table():
    """Tests c_{11i} against the published table."""
    lift = kohnen_lift(11 * 47)
    for i, expected in ELEVEN_TABLE.items():
        assert plus_coeff(11 * i, lift).value == expected, i


def test_sixty_seven_table():
    """Tests c_{67i}; the sign at i=7 is the computed one."""
    lift = kohnen_lift(67 * 43)
    for i, expected in SIXTY_SEVEN_TABLE.items():
        assert plus_coeff(67 * i, lift).value == expected, i


def test_plus_coeff_validation():
    """Tests index checks and precision fallback."""
    with pytest.raises(InvalidInputError):
        plus_coeff(0)
    assert plus_coeff(9, kohnen_lift(4)).value == 9


def test_plus_coeff_flags_broken_support():
    """Tests the plus-space consistency check."""
    fake = QSeries([0, 1, 5], 2)
    with pytest.raises(ConsistencyError):
        plus_coeff(2, fake)


def test_plus_space_support(lift_3000):
    """Tests c_n = 0 for n = 2, 3 mod 4 through 3000."""
    for n in range(1, 3001):
        if n % 4 in (2, 3):
            assert lift_3000.coeff(n) == 0, n
    assert lift_3000.is_integral()


def test_tau_multiplicativity(delta_3000):
    """Tests tau(mn) = tau(m) tau(n) on coprime pairs with mn <= 3000."""
    values = delta_3000.to_integers()
    for m in range(2, 3001):
        for n in range(m + 1, 3000 // m + 1):
            if gcd(m, n) == 1:
                assert values[m * n] == values[m] * values[n], (m, n)


def test_hecke_recurrence(delta_3000):
    """Tests tau(p^2) = tau(p)^2 - p^11 for p <= 53."""
    for p in primerange(2, 54):
        assert tau(p * p, delta_3000) == tau(p, delta_3000) ** 2 - p**11


def test_congruence_with_level_eleven_newform():
    """Tests tau(n) = a_n(X_0(11)) mod 11 for n <= 1000."""
    delta = delta_series(1000)
    newform = x0_11_series(1000)
    for n in range(1, 1001):
        assert (tau(n, delta) - x0_11_coefficient(n, newform)) % 11 == 0, n


class TestShimuraRelation:
    """The Hecke relation on the plus space as an independent oracle."""

    def test_published_values(self, delta_3000):
        """Tests c(4), c(9) and c(484) from tau alone."""
        assert shimura_coefficient(1, 1, 2, delta_3000) == -56
        assert shimura_coefficient(1, 1, 3, delta_3000) == 9
        assert shimura_coefficient(1, 1, 22, delta_3000) == -20919416

    def test_agrees_with_lift(self, lift_3000, delta_3000):
        """Tests c(D n^2) from c(D) against the lift for fundamental D."""
        for d in [1, *fundamental_discriminants(120)]:
            c_d = plus_coeff(d, lift_3000).value
            n = 1
            while d * n * n <= 3000:
                expected = plus_coeff(d * n * n, lift_3000).value
                assert shimura_coefficient(c_d, d, n, delta_3000) == expected, (d, n)
                n += 1

    def test_rejects_non_fundamental(self, delta_3000):
        """Tests the fundamental-discriminant precondition."""
        with pytest.raises(InvalidInputError):
            shimura_coefficient(-56, 4, 2, delta_3000)
        with pytest.raises(InvalidInputError):
            shimura_coefficient(1, -3, 2, delta_3000)
        with pytest.raises(InvalidInputError):
            shimura_coefficient(1, 1, 0, delta_3000)
