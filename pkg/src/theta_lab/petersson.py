"""Direct quadrature of ||theta||^2 over Gamma_0(4) \\ H.

The quotient is tiled by the images ``r D`` of the level-1 domain
``D = {|x| <= 1/2, |z| >= 1}`` under the six coset representatives ``r``.
Each tile is integrated up to height ``Y`` in the variables
``(x, u = y^(-1/2))``, where the hyperbolic measure becomes
``2 F(r z) y^(-1/2) du dx``; the region above ``Y`` is added analytically.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .eisenstein import is_odd_prime
from .modular import UniModMatrix, coset_label, coset_reps, moebius_apply
from .numerics import compensated_sum
from .quadrature import QuadratureSpec, gk_adaptive_2d
from .theta import f_invariant, theta_full

__all__ = [
    "QuadratureSpec",
    "TileIntegrand",
    "NormReport",
    "tile_integrands",
    "tile_integral",
    "tail_correction",
    "norm_direct",
    "fricke_pointwise_check",
    "index_scaling_check",
    "tiled_integral",
    "resolve_workers",
]


@dataclass(frozen=True)
class TileIntegrand:
    """``closed_form(z)`` equals ``F(rep z)`` on the tile labelled ``label``."""

    label: tuple
    rep: UniModMatrix
    closed_form: object
    description: str


def _cusp_zero_form(k):
    return lambda z: f_invariant((np.asarray(z) + k) / 4.0)


def tile_integrands():
    """The six tile integrands for Gamma_0(4), keyed by P^1(Z/4) label.

    Tiles at the cusp 0 use ``F((z + k)/4)``, which equals ``F(-1/(z + k))``
    by the Fricke invariance of F and has large imaginary part.
    """
    table = coset_reps(4)
    out = {}
    for label, rep in zip(table.labels, table.reps):
        g, k = label
        if label == (0, 1):
            form, desc = f_invariant, "F(z)"
        elif g == 1:
            form, desc = _cusp_zero_form(k), f"F((z+{k})/4)"
        else:
            form = (lambda r: (lambda z: f_invariant(moebius_apply(r, z))))(rep)
            desc = f"F(({rep.a}z+{rep.b})/({rep.c}z+{rep.d}))"
        out[label] = TileIntegrand(label, rep, form, desc)
    return out


def _integrate_tile(form, Y, tol, max_cells):
    u_lo = Y ** -0.5

    def g(x, v):
        u_hi = (1.0 - x * x) ** -0.25
        span = u_hi - u_lo
        u = u_lo + v * span
        z = x + 1j / (u * u)
        return 2.0 * form(z) * u * span

    return gk_adaptive_2d(g, (-0.5, 0.5), (0.0, 1.0), tol, initial=(2, 2), max_cells=max_cells)


def tile_integral(label, spec: QuadratureSpec | None = None) -> float:
    """Integral of F(rep z) over the level-1 domain truncated at height ``spec.Y``."""
    spec = spec or QuadratureSpec()
    label = tuple(label)
    forms = tile_integrands()
    if label not in forms:
        raise ValueError(f"{label} is not a P^1(Z/4) label; expected one of {sorted(forms)}")
    return _integrate_tile(forms[label].closed_form, spec.Y, spec.tol_tile, spec.max_subdivisions).value


def tail_correction(Y: float) -> float:
    """Contribution of the cusp neighbourhoods above height Y: 6 / sqrt(Y).

    2/sqrt(Y) from the cusp at infinity and 4/sqrt(Y) from the four tiles at
    the cusp 0; the cusp 1/2 contributes only exponentially small terms.
    """
    if Y < 2:
        raise ValueError("Y must be at least 2")
    return 6.0 / math.sqrt(Y)


@dataclass(frozen=True)
class NormReport:
    tile_values: tuple
    tile_labels: tuple
    tail_correction: float
    total: float
    ratio_to_pi: float
    Y_used: float
    error_estimate: float


def resolve_workers(workers=None) -> int:
    """Worker count: THETA_LAB_THREADS wins over the argument; 'auto' means cpu count."""
    env = os.environ.get("THETA_LAB_THREADS")
    val = env if env not in (None, "") else workers
    if val in (None, "", 1, "1"):
        return 1
    if val == "auto":
        return os.cpu_count() or 1
    n = int(val)
    if n < 1:
        raise ValueError("thread count must be positive")
    return n


def norm_direct(spec: QuadratureSpec | None = None, workers=None) -> NormReport:
    """||theta||^2 as the sum of six truncated tile integrals plus the cusp tails."""
    spec = spec or QuadratureSpec()
    forms = tile_integrands()
    labels = list(forms)

    def run(label):
        return _integrate_tile(forms[label].closed_form, spec.Y, spec.tol_tile, spec.max_subdivisions)

    n = resolve_workers(workers)
    if n > 1:
        with ThreadPoolExecutor(max_workers=n) as pool:
            results = list(pool.map(run, labels))
    else:
        results = [run(lab) for lab in labels]
    values = tuple(r.value for r in results)
    tail = tail_correction(spec.Y)
    total = compensated_sum(list(values) + [tail])
    return NormReport(
        tile_values=values,
        tile_labels=tuple(labels),
        tail_correction=tail,
        total=total,
        ratio_to_pi=total / math.pi,
        Y_used=spec.Y,
        error_estimate=compensated_sum(r.error for r in results),
    )


def fricke_pointwise_check(p: int, z) -> float:
    """|G_p(-1/(4 p^2 z)) - F(z) / p| with G_p(w) = Im(w)^(1/2) |theta(p^2 w)|^2."""
    if not is_odd_prime(p):
        raise ValueError(f"p={p} is not an odd prime")
    z = complex(z)
    w = -1.0 / (4.0 * p * p * z)
    th = theta_full(p * p * w)
    g = math.sqrt(w.imag) * abs(th) ** 2
    return abs(g - f_invariant(z) / p)


def _cusp_tail_weight(rep: UniModMatrix) -> float:
    # F(rep z) = F(r4 z) for the Gamma_0(4) coset r4 of rep; tails per tile are
    # 2/sqrt(Y) at infinity, 1/sqrt(Y) for each cusp-0 tile and ~0 at 1/2.
    g, _ = coset_label(rep.c, rep.d, 4)
    return {0: 2.0, 1: 1.0, 2: 0.0}[g]


def tiled_integral(level: int, Y: float = 20.0, tol: float = 1e-6, max_cells: int = 20_000, workers=None):
    """Integral of F over Gamma_0(level) \\ H using the level's coset representatives.

    Every tile integrand is ``F(rep z)`` evaluated through the full theta
    evaluator; the level must be a multiple of 4 so that F is invariant.
    Returns ``(total, n_tiles)``.
    """
    if level % 4:
        raise ValueError("F is only invariant under Gamma_0(N) for 4 | N")
    table = coset_reps(level)
    tol_each = tol / len(table)

    def run(rep):
        form = lambda z, r=rep: f_invariant(moebius_apply(r, z))
        body = _integrate_tile(form, Y, tol_each, max_cells).value
        return body + _cusp_tail_weight(rep) / math.sqrt(Y)

    n = resolve_workers(workers)
    if n > 1:
        with ThreadPoolExecutor(max_workers=n) as pool:
            parts = list(pool.map(run, table.reps))
    else:
        parts = [run(r) for r in table.reps]
    return compensated_sum(parts), len(table)


def index_scaling_check(p: int = 3, spec: QuadratureSpec | None = None, *, Y: float = 20.0,
                        tol: float = 1e-6, level: int | None = None, reference: float | None = None) -> float:
    """Ratio of the integral of F over Gamma_0(4 p^2) \\ H to ||theta||^2.

    Should equal the index ratio p (p + 1). ``level`` overrides ``4 p^2``
    (``level=4`` gives the degenerate ratio 1); ``reference`` skips the
    recomputation of the norm.
    """
    if level is None:
        if p != 3:
            raise ValueError("index_scaling_check is sized for p = 3 only")
        level = 4 * p * p
    if reference is None:
        reference = norm_direct(spec).total
    total, _ = tiled_integral(level, Y=Y, tol=tol)
    return total / reference
