import math

import numpy as np
import pytest

from theta_lab.modular import moebius_apply
from theta_lab.petersson import (fricke_pointwise_check, index_scaling_check,
                                 norm_direct, resolve_workers, tail_correction,
                                 tile_integral, tile_integrands, tiled_integral)
from theta_lab.quadrature import QuadratureSpec, gk_adaptive, gk_adaptive_2d
from theta_lab.theta import f_invariant, theta_full


@pytest.fixture(scope="module")
def norm100():
    return norm_direct(QuadratureSpec(Y=100))


def test_gk_adaptive_polynomial_and_gaussian():
    assert abs(gk_adaptive(lambda x: x**5, 0, 2, 1e-14).value - 64 / 6) < 1e-12
    val = gk_adaptive(lambda x: np.exp(-x * x), -8, 8, 1e-13).value
    assert abs(val - math.sqrt(math.pi)) < 1e-13


def test_gk_adaptive_2d_separable():
    res = gk_adaptive_2d(lambda x, y: np.cos(x) * np.exp(y), (0, 1), (0, 2), 1e-12)
    assert abs(res.value - math.sin(1) * (math.exp(2) - 1)) < 1e-12


def test_tile_forms_match_coset_action(rng):
    for label, t in tile_integrands().items():
        z = rng.uniform(-0.5, 0.5, 50) + 1j * rng.uniform(0.87, 40, 50)
        direct = f_invariant(moebius_apply(t.rep, z))
        assert np.max(np.abs(t.closed_form(z) - direct)) <= 1e-10, label


def test_tile_integrand_examples():
    forms = tile_integrands()
    assert abs(forms[(0, 1)].closed_form(1j) - 1.0074837203450847) < 1e-14
    assert abs(forms[(1, 2)].closed_form(2j) - f_invariant(0.5 + 0.5j)) < 1e-14
    assert forms[(2, 1)].closed_form(0.2 + 30j) <= 1e-6


def test_tile_integrands_nonnegative(rng):
    z = rng.uniform(-0.5, 0.5, 200) + 1j * rng.uniform(0.87, 100, 200)
    for t in tile_integrands().values():
        assert np.all(t.closed_form(z) >= 0)


def test_tile_integral_label_validation():
    with pytest.raises(ValueError):
        tile_integral((3, 1))


def test_tail_correction_value():
    assert tail_correction(100) == pytest.approx(0.6, abs=1e-15)


def test_cusp_zero_rescaling():
    from theta_lab.quadrature import gk_adaptive
    y = 8.0
    parts = sum(gk_adaptive(lambda x, k=k: f_invariant((x + k + 1j * y) / 4), -0.5, 0.5, 1e-13).value
                for k in range(4))
    whole = gk_adaptive(lambda x: f_invariant((x + 1j * y) / 4), 0.0, 4.0, 1e-13).value
    assert abs(parts - whole) <= 1e-10


def test_norm_report_structure(norm100):
    assert len(norm100.tile_values) == 6
    assert all(v >= 0 for v in norm100.tile_values)
    assert abs(norm100.total - (sum(norm100.tile_values) + norm100.tail_correction)) < 1e-13
    assert norm100.ratio_to_pi == norm100.total / math.pi


def test_y_doubling_consistency(norm100):
    spec = QuadratureSpec(Y=200)
    other = norm_direct(spec)
    assert abs(other.total - norm100.total) <= 2 * spec.tol_tile * 6 + 10 * math.exp(-math.pi * 100)


def test_y_stability(norm100):
    for Y in (50, 400):
        assert abs(norm_direct(QuadratureSpec(Y=Y)).total - norm100.total) <= 2e-3


def test_worker_count_does_not_change_result(norm100, monkeypatch):
    monkeypatch.setenv("THETA_LAB_THREADS", "3")
    assert resolve_workers(1) == 3
    threaded = norm_direct(QuadratureSpec(Y=100))
    assert abs(threaded.total - norm100.total) <= 6 * QuadratureSpec().tol_tile
    monkeypatch.delenv("THETA_LAB_THREADS")
    assert resolve_workers("auto") >= 1


@pytest.mark.parametrize("p, z", [(3, 1j), (5, 0.3 + 0.7j)])
def test_fricke_pointwise(p, z):
    assert fricke_pointwise_check(p, z) <= 1e-10 * f_invariant(z)


def test_fricke_pointwise_random(rng):
    for _ in range(50):
        p = int(rng.choice([3, 5, 7]))
        z = complex(rng.uniform(-1, 1), rng.uniform(0.05, 3))
        assert fricke_pointwise_check(p, z) <= 1e-10 * f_invariant(z)


def test_g_p_definition_unwound():
    p = 3
    z = 1j / p**2
    g = math.sqrt(z.imag) * abs(theta_full(p * p * z)) ** 2
    assert abs(g - f_invariant(1j) / p) < 1e-15


def test_index_scaling_degenerate(norm100):
    assert abs(index_scaling_check(level=4, reference=norm100.total) - 1) <= 1e-6


def test_index_scaling_p3(norm100):
    total, n = tiled_integral(36)
    assert n == 72
    assert abs(total / norm100.total - 12) <= 0.6


def test_tiled_integral_needs_level_multiple_of_4():
    with pytest.raises(ValueError):
        tiled_integral(9)
