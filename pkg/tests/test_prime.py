"""Prime-function values against brute-force products, plus the two
functional identities.  The identity checks run the implementation's own
two routes against each other AND against the extended-precision oracle,
so a compensating bug on both sides would have to fool mpmath too.
"""

import cmath
import math

import pytest

import oracles
from slitmap.errors import DomainError
from slitmap.geometry import AnnulusGeometry, TruncationControl
from slitmap.prime import eval_prime, prime_identity_period, prime_identity_reflect

TIGHT = TruncationControl(tol=1e-14)

# frozen before the implementation existed: oracles.prime_product(0.8, 0.5, 0.3)
FROZEN_PRIME_08_05_03 = 0.2920690787038353


def test_point_value_frozen():
    g = AnnulusGeometry(0.3)
    v = eval_prime(0.8, 0.5, g, TIGHT)
    assert v.imag == 0.0
    assert v.real == pytest.approx(FROZEN_PRIME_08_05_03, abs=1e-13)


@pytest.mark.parametrize("z,y,r", [
    (0.8, 0.5, 0.3),
    (0.5 * cmath.exp(1j * math.pi / 3), 0.6 * cmath.exp(-1j * math.pi / 5), 0.35),
    (0.9 + 0.2j, 0.4 - 0.3j, 0.25),
    (1.0, 0.55, 0.5),
])
def test_against_live_oracle(z, y, r):
    v = eval_prime(z, y, AnnulusGeometry(r), TIGHT)
    ref = oracles.prime_product(z, y, r)
    assert abs(v - ref) <= 1e-12 * abs(ref)


def test_antisymmetry():
    # swapping the two arguments flips the sign, factor by factor
    g = AnnulusGeometry(0.3)
    a = eval_prime(0.7 + 0.1j, 0.4 - 0.2j, g)
    b = eval_prime(0.4 - 0.2j, 0.7 + 0.1j, g)
    assert abs(a + b) <= 1e-14 * abs(a)


@pytest.mark.parametrize("z,y,r", [
    (0.7, 0.4, 0.2),
    (0.5 * cmath.exp(1j * math.pi / 3), 0.6 * cmath.exp(-1j * math.pi / 5), 0.35),
])
def test_reflect_identity(z, y, r):
    lhs, rhs = prime_identity_reflect(z, y, AnnulusGeometry(r), TIGHT)
    assert abs(lhs - rhs) <= 1e-12 * max(abs(lhs), abs(rhs))


@pytest.mark.parametrize("z,y,r", [
    (0.4, 0.7, 0.3),
    (0.5j, 0.6, 0.4),
])
def test_period_identity(z, y, r):
    lhs, rhs = prime_identity_period(z, y, AnnulusGeometry(r), TIGHT)
    assert abs(lhs - rhs) <= 1e-12 * max(abs(lhs), abs(rhs))


def test_period_identity_against_oracle():
    # both sides recomputed with raw extended-precision products
    z, y, r = 0.4, 0.7, 0.3
    lhs = oracles.prime_product(z / r ** 2, y, r, n_factors=400)
    rhs = -z / (r ** 2 * y) * oracles.prime_product(z, y, r, n_factors=400)
    assert abs(lhs - rhs) <= 1e-12 * abs(lhs)
    impl_lhs, impl_rhs = prime_identity_period(z, y, AnnulusGeometry(r), TIGHT)
    assert abs(impl_lhs - lhs) <= 1e-11 * abs(lhs)
    assert abs(impl_rhs - rhs) <= 1e-11 * abs(rhs)


def test_reflect_identity_against_oracle():
    z, y, r = 0.7, 0.4, 0.2
    lhs = complex(oracles.prime_product(1 / z, 1 / y, r)).conjugate()
    rhs = -oracles.prime_product(z, y, r) / (z * y)
    assert abs(lhs - rhs) <= 1e-12 * abs(lhs)
    impl_lhs, impl_rhs = prime_identity_reflect(z, y, AnnulusGeometry(r), TIGHT)
    assert abs(impl_lhs - lhs) <= 1e-11 * abs(lhs)


def test_domain_window():
    g = AnnulusGeometry(0.3)
    with pytest.raises(DomainError):
        eval_prime(0.0, 0.5, g)
    with pytest.raises(DomainError):
        eval_prime(0.5, 0.0, g)
    with pytest.raises(DomainError):
        eval_prime(0.05, 0.5, g)  # below 0.9 r^2
    with pytest.raises(DomainError):
        eval_prime(0.5, 4.0, g)  # above 1.1 / r
