"""Evaluation of theta(z) = sum_n exp(2 pi i n^2 z) on the upper half-plane.

Above ``Im z = 0.05`` the q-series is summed directly. Below it, the
classical triple (theta_2, theta_3, theta_4) at ``w = 2z`` is carried to a
reduced argument by integer shifts and ``w -> -1/w``; theta(z) = theta_3(2z).
All functions broadcast over numpy arrays of points.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, FitDegenerate, ReductionFailure
from .modular import UniModMatrix
from .quadrature import gk_adaptive

__all__ = [
    "ThetaTriple",
    "ReductionTrace",
    "theta_direct",
    "theta_full",
    "theta_triple",
    "reduce_theta_argument",
    "f_invariant",
    "x_average",
    "fourier_model",
    "fit_fourier_constant",
    "FourierFit",
    "DIRECT_MIN_Y",
]

DIRECT_MIN_Y = 0.05
_MAX_STEPS = 1_000_000

# component order in all triples: 0 -> theta_2, 1 -> theta_3, 2 -> theta_4
_SHIFT_ODD = np.array([0, 2, 1])      # theta_3 <-> theta_4 under w -> w + odd
_INVERT = np.array([2, 1, 0])         # theta_2 <-> theta_4 under w -> -1/w
_PERM_TAGS = {
    (0, 1, 2): "id", (0, 2, 1): "(34)", (2, 1, 0): "(24)",
    (1, 0, 2): "(23)", (1, 2, 0): "(234)", (2, 0, 1): "(243)",
}


def _is_scalar(z):
    return np.ndim(z) == 0


def _direct_terms(y_min: float, tol: float) -> int:
    # least N with 2 e^{-2 pi N^2 y} / (1 - e^{-2 pi (2N+1) y}) <= tol
    n = 1
    while 2.0 * math.exp(-2.0 * math.pi * n * n * y_min) / (
        -math.expm1(-2.0 * math.pi * (2 * n + 1) * y_min)
    ) > tol:
        n += 1
    return n


def theta_direct(z, tol=1e-13):
    """Sum the q-series for theta directly; requires ``Im z >= 0.05``."""
    zz = np.asarray(z, dtype=complex)
    if zz.size and np.min(zz.imag) < DIRECT_MIN_Y:
        raise DomainError("theta_direct needs Im z >= 0.05; use theta_full")
    tol = max(tol, 1e-15)
    if zz.size == 0:
        return zz.copy()
    n_terms = _direct_terms(float(np.min(zz.imag)), tol)
    acc = np.zeros(zz.shape, dtype=complex)
    # smallest terms first
    for n in range(n_terms - 1, 0, -1):
        acc += np.exp((2j * math.pi * n * n) * zz)
    out = 1.0 + 2.0 * acc
    return complex(out) if _is_scalar(z) else out


def _series_triple(w, tol=1e-16):
    """(theta_2, theta_3, theta_4)(w) by direct q-series; ``Im w`` should be >= 0.8."""
    im_min = float(np.min(w.imag)) if w.size else 1.0
    n_terms = max(3, int(math.ceil(math.sqrt(-math.log(tol / 4) / (math.pi * im_min)))) + 1)
    t3 = np.zeros(w.shape, dtype=complex)
    t4 = np.zeros(w.shape, dtype=complex)
    t2 = np.zeros(w.shape, dtype=complex)
    for n in range(n_terms, 0, -1):
        e = np.exp((1j * math.pi * n * n) * w)
        t3 += e
        t4 += -e if n % 2 else e
        t2 += np.exp((1j * math.pi * (n - 0.5) ** 2) * w)
    return 2.0 * t2, 1.0 + 2.0 * t3, 1.0 + 2.0 * t4


def _reduce(w):
    """Vectorised reduction of ``w`` to ``|Re w| <= 1/2, |w| >= 1``.

    Returns ``(w_red, src, fac, mats)`` where, per point and per component j,
    ``theta_j(w) = fac[:, j] * theta_{src[:, j]}(w_red)`` and ``mats`` holds the
    integer matrix sending ``w`` to ``w_red``.
    """
    w = np.array(w, dtype=complex).ravel()
    n = w.size
    src = np.tile(np.arange(3), (n, 1))
    fac = np.ones((n, 3), dtype=complex)
    mats = np.tile(np.array([1, 0, 0, 1], dtype=np.int64), (n, 1))
    active = np.ones(n, dtype=bool)
    steps = 0
    while active.any():
        steps += 1
        if steps > _MAX_STEPS:
            raise ReductionFailure("theta reduction exceeded 1e6 steps")
        idx = np.flatnonzero(active)
        wa = w[idx]
        shift = np.floor(wa.real + 0.5)
        wa = wa - shift
        sh = shift.astype(np.int64)
        s_idx = src[idx]
        f_idx = fac[idx]
        is2 = s_idx == 0
        phase = np.exp(0.25j * math.pi * shift)
        f_idx = np.where(is2, f_idx * phase[:, None], f_idx)
        odd = (sh % 2) == 1
        s_idx = np.where(odd[:, None], _SHIFT_ODD[s_idx], s_idx)
        m = mats[idx]
        # T^{-shift} @ m
        m = np.stack([m[:, 0] - sh * m[:, 2], m[:, 1] - sh * m[:, 3], m[:, 2], m[:, 3]], axis=1)
        inv = (wa.real * wa.real + wa.imag * wa.imag) < 1.0
        if inv.any():
            wi = wa[inv]
            f_idx[inv] *= np.sqrt(1j / wi)[:, None]
            s_idx[inv] = _INVERT[s_idx[inv]]
            wa[inv] = -1.0 / wi
            mi = m[inv]
            m[inv] = np.stack([-mi[:, 2], -mi[:, 3], mi[:, 0], mi[:, 1]], axis=1)
        w[idx] = wa
        src[idx] = s_idx
        fac[idx] = f_idx
        mats[idx] = m
        done = ~inv
        active[idx[done]] = False
    return w, src, fac, mats


@dataclass(frozen=True)
class ThetaTriple:
    t2: complex
    t3: complex
    t4: complex

    def jacobi_defect(self) -> float:
        """Defect of theta_3^4 = theta_2^4 + theta_4^4 relative to the largest fourth power."""
        scale = max(abs(self.t2), abs(self.t3), abs(self.t4)) ** 4
        return abs(self.t3**4 - self.t2**4 - self.t4**4) / max(scale, 1e-300)


@dataclass(frozen=True)
class ReductionTrace:
    matrix: UniModMatrix
    accumulated_factor: complex
    permutation_tag: str
    reduced_argument: complex


def reduce_theta_argument(w) -> ReductionTrace:
    """Reduction data for a single point ``w`` (theta_3 component)."""
    w = complex(w)
    if w.imag <= 0:
        raise DomainError("w must lie in the upper half-plane")
    wr, src, fac, mats = _reduce(np.array([w]))
    perm = tuple(int(v) for v in src[0])
    return ReductionTrace(
        matrix=UniModMatrix(*(int(v) for v in mats[0])),
        accumulated_factor=complex(fac[0, 1]),
        permutation_tag=_PERM_TAGS[perm],
        reduced_argument=complex(wr[0]),
    )


def theta_triple(w, *, reduced=False):
    """The classical triple at ``w`` (or, with ``reduced``, at its reduced image)."""
    w = complex(w)
    wr, src, fac, _ = _reduce(np.array([w]))
    red = _series_triple(wr)
    if reduced:
        return ThetaTriple(*(complex(v[0]) for v in red))
    vals = [complex(fac[0, j] * red[src[0, j]][0]) for j in range(3)]
    return ThetaTriple(*vals)


def _theta_reduced(z, tol):
    w = 2.0 * z
    wr, src, fac, _ = _reduce(w)
    t2, t3, t4 = _series_triple(wr, tol=min(tol, 1e-16))
    red = np.stack([t2, t3, t4], axis=1)
    return fac[:, 1] * red[np.arange(wr.size), src[:, 1]]


def theta_full(z, tol=1e-13):
    """theta(z) anywhere on the upper half-plane."""
    zz = np.asarray(z, dtype=complex)
    if zz.size and np.min(zz.imag) <= 0:
        raise DomainError("theta_full needs Im z > 0")
    flat = zz.ravel()
    out = np.empty(flat.shape, dtype=complex)
    hi = flat.imag >= DIRECT_MIN_Y
    if hi.any():
        out[hi] = theta_direct(flat[hi], tol)
    if (~hi).any():
        out[~hi] = _theta_reduced(flat[~hi], tol)
    out = out.reshape(zz.shape)
    return complex(out) if _is_scalar(z) else out


def f_invariant(z, tol=1e-13):
    """F(z) = y^(1/2) |theta(z)|^2, invariant under Gamma_0(4) and z -> -1/(4z)."""
    zz = np.asarray(z, dtype=complex)
    th = theta_full(zz, tol)
    out = np.sqrt(zz.imag) * (th.real**2 + th.imag**2)
    return float(out) if _is_scalar(z) else out


def x_average(y, tol=1e-11, *, half_period=True, max_panels=400_000):
    """Integral of |theta(x + iy)|^2 over one period in x, by adaptive quadrature.

    With ``half_period`` the conjugation symmetry theta(-x + iy) =
    conj(theta(x + iy)) is used to integrate over ``[0, 1/2]`` only.
    """
    y = float(y)
    if y <= 0:
        raise DomainError("x_average needs y > 0")

    def integrand(x):
        th = theta_full(x + 1j * y, tol=1e-15)
        return th.real**2 + th.imag**2

    # enough panels to see the fastest significant oscillation
    n_max2 = 6.0 / y
    panels = max(8, int(math.ceil(n_max2 / 8.0)))
    if half_period:
        res = gk_adaptive(integrand, 0.0, 0.5, tol / 2.0, initial_panels=panels,
                          max_panels=max_panels)
        return 2.0 * res.value
    res = gk_adaptive(integrand, 0.0, 1.0, tol, initial_panels=2 * panels,
                      max_panels=max_panels)
    return res.value


def fourier_model(y):
    """Sum over n >= 1 of exp(-4 pi n^2 y)."""
    y = float(y)
    total = 0.0
    n = 1
    while True:
        t = math.exp(-4.0 * math.pi * n * n * y)
        total += t
        if t < 1e-20 * max(total, 1e-300):
            return total
        n += 1


@dataclass(frozen=True)
class FourierFit:
    c: float
    residual: float
    grid: tuple
    averages: tuple


def fit_fourier_constant(y_grid=(0.05, 0.1, 0.2, 0.3, 0.5), tol=1e-12, *, full=False):
    """Least-squares c in x_average(y) = 1 + c * sum_{n>=1} exp(-4 pi n^2 y).

    The residual reported is the largest absolute misfit over the grid.
    """
    grid = tuple(float(v) for v in y_grid)
    if len(grid) < 5 or min(grid) < 0.05 or max(grid) > 0.5:
        raise ValueError("grid needs at least 5 points inside [0.05, 0.5]")
    a = np.array([x_average(v, tol) for v in grid]) - 1.0
    m = np.array([fourier_model(v) for v in grid])
    norm = float(m @ m)
    if norm < 1e-200:
        raise FitDegenerate("model column vanishes on the grid")
    c = float(m @ a) / norm
    resid = float(np.max(np.abs(a - c * m)))
    if full:
        return FourierFit(c, resid, grid, tuple((a + 1.0).tolist()))
    return c
