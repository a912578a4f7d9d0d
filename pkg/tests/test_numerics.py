import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from theta_lab import numerics
from theta_lab.errors import PoleError
from theta_lab.numerics import compensated_sum, gamma, zeta, zeta_shifted_laurent

from oracles import zeta_euler_maclaurin


@pytest.mark.parametrize("s, expected", [
    (1, 1.0),
    (0.5, math.sqrt(math.pi)),
    (1.5, math.sqrt(math.pi) / 2),
])
def test_gamma_classical_values(s, expected):
    assert gamma(s) == pytest.approx(expected, rel=1e-13)


@pytest.mark.parametrize("s", [0, -1, -7, -1 + 1e-15])
def test_gamma_poles(s):
    with pytest.raises(PoleError):
        gamma(s)


def test_gamma_box_against_mpmath():
    import mpmath
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(400):
        s = complex(rng.uniform(-50, 50), rng.uniform(-50, 50))
        if abs(s) > 50 or (abs(s.imag) < 0.3 and s.real < 0):
            continue
        ref = complex(mpmath.gamma(mpmath.mpc(s.real, s.imag)))
        worst = max(worst, abs(gamma(s) - ref) / abs(ref))
    assert worst <= 1e-12


def test_gamma_recurrence(rng):
    s = rng.uniform(0.25, 5, 100) + 1j * rng.uniform(-5, 5, 100)
    for v in s:
        assert abs(gamma(v + 1) - v * gamma(v)) <= 1e-12 * abs(gamma(v + 1))


def test_gamma_reflection(rng):
    s = rng.uniform(-4.5, 4.5, 100) + 1j * rng.uniform(-3, 3, 100)
    for v in s:
        assert abs(gamma(v) * gamma(1 - v) * np.sin(np.pi * v) / np.pi - 1) <= 1e-10


def test_euler_maclaurin_oracle_is_sharp():
    # the oracle itself must be good to 1e-14 before it can judge zeta
    assert abs(zeta_euler_maclaurin(2) - math.pi**2 / 6) < 1e-14
    assert abs(zeta_euler_maclaurin(4) - math.pi**4 / 90) < 1e-14


@pytest.mark.parametrize("s, expected", [
    (2, 1.644934066848226),
    (3, 1.202056903159594),
    (0, -0.5),
])
def test_zeta_values(s, expected):
    ref = zeta_euler_maclaurin(s)
    assert abs(ref - expected) < 1e-14
    assert abs(zeta(s) - ref) <= 1e-12 * abs(ref)


def test_zeta_against_euler_maclaurin(rng):
    s = rng.uniform(-1.9, 6, 200) + 1j * rng.uniform(-50, 50, 200)
    for v in s:
        ref = zeta_euler_maclaurin(v, N=60)
        assert abs(zeta(v) - ref) <= 1e-12 * abs(ref), v


def test_zeta_even_integers():
    assert abs(zeta(2) - math.pi**2 / 6) <= 1e-12 * math.pi**2 / 6
    assert abs(zeta(4) - math.pi**4 / 90) <= 1e-12 * math.pi**4 / 90


def test_zeta_pole():
    with pytest.raises(PoleError):
        zeta(1)
    with pytest.raises(PoleError):
        zeta(1 + 1e-13)


def test_zeta_pole_limit_extrapolates_to_one():
    h = np.array([10.0**-k for k in range(2, 7)])
    vals = np.array([(hh * zeta(1 + hh)).real for hh in h])
    # (s-1) zeta(s) = 1 + gamma h + O(h^2): quadratic fit in h
    limit = np.polyfit(h, vals, 2)[-1]
    assert abs(limit - 1) <= 1e-8


def test_shifted_laurent():
    data = zeta_shifted_laurent()
    assert data.pole_order == 1
    assert data.residue == 0.5
    h = 1e-6
    assert abs(h * zeta(1 + 2 * h) - 0.5) <= 1e-4


def test_compensated_sum_cancellation():
    assert compensated_sum([1e16, 1.0, -1e16]) == 1.0
    assert compensated_sum([]) == 0.0


def test_compensated_sum_many_tenths():
    exact = Fraction(0.1) * 10**6
    got = compensated_sum([0.1] * 10**6)
    assert abs(Fraction(got) - exact) <= Fraction(1, 10**9)
    assert abs(got - 1e5) <= 1e-9


def test_compensated_sum_complex():
    got = compensated_sum([1e16 + 1j, 1.0 - 1e16j, -1e16 + 1e16j])
    assert got == complex(1.0, 1.0)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(-1e12, 1e12, allow_nan=False), max_size=50))
def test_compensated_sum_is_correctly_rounded(xs):
    exact = sum((Fraction(x) for x in xs), Fraction(0))
    got = compensated_sum(xs)
    assert abs(Fraction(got) - exact) <= abs(exact) * Fraction(2 * np.finfo(float).eps) + Fraction(0)


def test_eta_is_entire_at_one():
    assert numerics.eta(1) == pytest.approx(math.log(2), rel=1e-14)
