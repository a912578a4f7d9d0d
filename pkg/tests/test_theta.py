import math

import numpy as np
import pytest

from theta_lab.errors import DomainError
from theta_lab.modular import moebius_apply
from theta_lab.theta import (_direct_terms, f_invariant, fit_fourier_constant,
                             fourier_model, reduce_theta_argument, theta_direct,
                             theta_full, theta_triple, x_average)

from oracles import theta_brute

THETA_I = 1.003734885487739091  # 1 + 2e^{-2pi} + 2e^{-8pi} + ..., mpmath oracle


def random_points(rng, n, ylo, yhi, xspan=1.0):
    return rng.uniform(-xspan, xspan, n) + 1j * rng.uniform(ylo, yhi, n)


def test_theta_at_i_matches_brute_force():
    assert abs(theta_brute(1j) - THETA_I) <= 2.3e-16
    assert abs(theta_direct(1j, 1e-15) - THETA_I) <= 1e-15


def test_theta_high_in_the_cusp(rng):
    for x in rng.uniform(-3, 3, 10):
        assert abs(theta_direct(x + 10j, 1e-15) - 1) <= 3e-27 + 1e-16


def test_truncation_rule():
    n = _direct_terms(1.0, 1e-15)
    bound = lambda m: 2 * math.exp(-2 * math.pi * m * m) / -math.expm1(-2 * math.pi * (2 * m + 1))
    assert bound(n) <= 1e-15 < bound(n - 1)


def test_theta_direct_domain():
    with pytest.raises(DomainError):
        theta_direct(0.04j)
    with pytest.raises(DomainError):
        theta_full(0.3 - 0.1j)


def test_periodicity(rng):
    z = random_points(rng, 100, 0.01, 3)
    assert np.max(np.abs(theta_full(z + 1) - theta_full(z)) / np.maximum(1, np.abs(theta_full(z)))) <= 1e-14


def test_full_agrees_with_direct_on_overlap(rng):
    from theta_lab.theta import _theta_reduced
    z = random_points(rng, 100, 0.05, 2)
    assert np.max(np.abs(_theta_reduced(z, 1e-15) - theta_direct(z, 1e-15))) <= 1e-12


def test_full_against_brute_force_near_real_axis(rng):
    z = random_points(rng, 10, 0.005, 0.05)
    for v in z:
        ref = theta_brute(v, cutoff=1e-25)
        assert abs(theta_full(v) - ref) <= 1e-12 * max(1, abs(ref))


def test_transformation_law(rng):
    z = random_points(rng, 50, 0.1, 10)
    th = theta_full(z)
    resid = np.abs(theta_full(-1 / (4 * z)) - np.sqrt(2 * z / 1j) * th)
    assert np.all(resid <= 1e-12 * np.abs(th))


def test_transformation_law_at_i():
    assert abs(theta_full(0.25j) - math.sqrt(2) * THETA_I) <= 1e-14
    assert abs(theta_brute(0.25j) - 1.4194954880837661) < 1e-15


def test_conjugation_symmetry(rng):
    z = random_points(rng, 50, 0.01, 2)
    assert np.allclose(theta_full(-z.conjugate()), np.conj(theta_full(z)), atol=1e-13, rtol=1e-13)


def test_jacobi_identity_on_reduced_triples(rng):
    for z in random_points(rng, 40, 0.001, 0.05):
        assert theta_triple(2 * z, reduced=True).jacobi_defect() <= 1e-10
        # the un-reduced triple is scaled by a common factor, so the identity survives
        assert theta_triple(2 * z).jacobi_defect() <= 1e-10


def test_reduction_trace_factor(rng):
    for w in random_points(rng, 40, 0.001, 0.1):
        tr = reduce_theta_argument(w)
        m = tr.matrix
        assert abs(moebius_apply(m, w) - tr.reduced_argument) <= 1e-9 * abs(tr.reduced_argument)
        assert abs(tr.reduced_argument) >= 1 - 1e-12 and abs(tr.reduced_argument.real) <= 0.5 + 1e-12
        expected = abs(m.c * w + m.d) ** -0.5
        assert abs(abs(tr.accumulated_factor) - expected) <= 1e-12 * expected
        assert tr.permutation_tag in {"id", "(34)", "(24)", "(23)", "(234)", "(243)"}


def test_f_invariant_at_i():
    assert abs(f_invariant(1j) - THETA_I**2) <= 1e-14
    assert abs(THETA_I**2 - 1.0074837203450847) < 1e-15


def test_f_gamma0_invariance(rng):
    from theta_lab.checks import random_gamma0
    z = random_points(rng, 20, 0.2, 3)
    fz = f_invariant(z)
    for _ in range(20):
        g = random_gamma0(rng)
        assert max(abs(v) for v in (g.a, g.b, g.c, g.d)) <= 50
        assert np.max(np.abs(f_invariant(moebius_apply(g, z)) - fz)) <= 1e-10


def test_f_fricke_invariance(rng):
    z = random_points(rng, 30, 0.05, 5)
    assert np.max(np.abs(f_invariant(-1 / (4 * z)) - f_invariant(z))) <= 1e-10


def test_x_average_large_y():
    assert abs(x_average(10.0) - 1.0) <= 1e-15


def test_x_average_matches_fourier_model_at_point_one():
    c = fit_fourier_constant()
    assert abs(x_average(0.1) - (1 + c * fourier_model(0.1))) <= 1e-10


def test_x_average_half_and_full_period_agree():
    for y in (0.01, 0.05, 0.3):
        assert abs(x_average(y) - x_average(y, half_period=False)) <= 1e-12 * x_average(y)


def test_x_average_at_least_one():
    for y in (0.003, 0.02, 0.1, 0.7, 3.0):
        assert x_average(y) >= 1.0


def test_x_average_gaussian_scaling():
    a1 = x_average(0.001, 1e-9) * math.sqrt(0.001)
    a2 = x_average(0.002, 1e-9) * math.sqrt(0.002)
    assert abs(a1 - a2) <= 0.02 * a1


def test_fit_fourier_constant():
    fit = fit_fourier_constant((0.05, 0.1, 0.2, 0.3, 0.5), full=True)
    # Parseval: |theta|^2 averages to 1 + sum (2)^2 e^{-4 pi n^2 y}
    assert abs(fit.c - 4.0) <= 1e-8
    assert abs(fit.c - 2.0) > 1.0
    assert fit.residual <= 1e-9


def test_fit_grid_validation():
    with pytest.raises(ValueError):
        fit_fourier_constant((0.1, 0.2))
    with pytest.raises(ValueError):
        fit_fourier_constant((0.01, 0.1, 0.2, 0.3, 0.4))
