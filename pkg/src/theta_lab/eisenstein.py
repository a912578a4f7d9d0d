"""Eisenstein series, the Rankin integral I_p(s) and residues at s = 1.

``I_p(s)`` is the integral over the strip [0, 1] x (0, inf) of
``y^(s + 1/2) (|theta(z)|^2 - |theta(p^2 z)|^2) dx dy / y^2``. It is computed
two ways: from the product formula (with the Fourier constant ``c`` left as
a parameter) and by quadrature of the measured x-averages.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate

from . import numerics
from .errors import ConvergenceError, NonFiniteSample, ToleranceNotMet
from .modular import index_gamma0, _prime_factors
from .quadrature import QuadratureSpec, gk_adaptive
from .theta import x_average

__all__ = [
    "EisensteinParams",
    "ClosedFormParams",
    "ResidueEstimate",
    "eisenstein_truncated",
    "eisenstein_tail_estimate",
    "eisenstein_residue_formula",
    "eisenstein_residue_numeric",
    "ip_closed",
    "ip_closed_full",
    "ip_direct",
    "IpDirectResult",
    "residue_at_1",
    "norm_from_residue",
    "norm_from_residue_value",
    "is_odd_prime",
]


def is_odd_prime(p) -> bool:
    return isinstance(p, (int, np.integer)) and p > 2 and _prime_factors(int(p)) == [int(p)]


@dataclass(frozen=True)
class EisensteinParams:
    level: int
    s: complex
    truncation: int = 2000

    def __post_init__(self):
        if self.level < 1:
            raise ValueError("level must be positive")
        if self.truncation < 10:
            raise ValueError("truncation must be at least 10")


@dataclass(frozen=True)
class ClosedFormParams:
    s: complex
    p: int
    c: float = 4.0

    def __post_init__(self):
        if not is_odd_prime(self.p):
            raise ValueError(f"p={self.p} is not an odd prime")
        if not self.c > 0:
            raise ValueError("Fourier constant c must be positive")


@dataclass(frozen=True)
class ResidueEstimate:
    value: float
    method: str
    error_bound: float


def _min_eig(z: complex) -> float:
    # Q(c, d) = |cz + d|^2 = c^2 |z|^2 + 2 c d x + d^2
    x, y = z.real, z.imag
    a, b = x * x + y * y, x
    tr, det = a + 1.0, y * y
    return 0.5 * (tr - math.sqrt(max(tr * tr - 4.0 * det, 0.0)))


def _tail_bound(z: complex, sigma: float, C: int) -> float:
    # 8m pairs have max(|c|,|d|) = m, each term <= y^s / (lam m^2)^s; halve for +-.
    lam = _min_eig(z)
    return 4.0 * (z.imag / lam) ** sigma * C ** (2.0 - 2.0 * sigma) / (2.0 * sigma - 2.0)


def _lattice_sums(z: complex, N: int, s_values, C: int, chunk_rows=256):
    """Truncated E_N(z, s) for several s at once (c > 0 rows, d in [-C, C])."""
    s_arr = np.asarray(s_values, dtype=complex)
    x, y = z.real, z.imag
    d = np.arange(-C, C + 1, dtype=np.int64)
    log_y = math.log(y)
    row_sums = [[] for _ in s_arr]
    cs = np.arange(N, C + 1, N, dtype=np.int64)
    for start in range(0, cs.size, chunk_rows):
        c = cs[start:start + chunk_rows][:, None]
        mask = np.gcd(c, d[None, :]) == 1
        q = (c * x + d[None, :]) ** 2 + (c * y) ** 2
        lq = np.log(q[mask])
        for i, s in enumerate(s_arr):
            terms = np.exp(s * (log_y - lq)) if s.imag else np.exp(s.real * (log_y - lq))
            row_sums[i].append(complex(np.sum(terms)))
    out = []
    for i, s in enumerate(s_arr):
        head = cmath.exp(s * log_y)
        out.append(complex(numerics.compensated_sum([head] + row_sums[i])))
    return out


def eisenstein_truncated(z, params: EisensteinParams):
    """Box-truncated E_N(z, s) and a rigorous bound on the omitted terms.

    Sums ``y^s / |cz + d|^(2s)`` over coprime ``(c, d)`` with ``N | c`` and
    ``|c|, |d| <= truncation``, halved for the identification (c, d) ~ (-c, -d).
    """
    z = complex(z)
    s = complex(params.s)
    if s.real <= 1.0 + 1e-9:
        raise ConvergenceError("the lattice sum needs Re s > 1")
    val = _lattice_sums(z, params.level, [s], params.truncation)[0]
    return val, _tail_bound(z, s.real, params.truncation)


def _box_exterior_integral(z: complex, s: float) -> float:
    # integral over R^2 minus [-1, 1]^2 of Q(u, v)^-s, in polar coordinates
    x, y = z.real, z.imag

    def g(th):
        cu, sv = math.cos(th), math.sin(th)
        q = cu * cu * (x * x + y * y) + 2.0 * cu * sv * x + sv * sv
        rb = 1.0 / max(abs(cu), abs(sv))
        return q ** (-s) * rb ** (2.0 - 2.0 * s)

    total = 0.0
    for k in range(8):
        total += integrate.quad(g, k * math.pi / 4, (k + 1) * math.pi / 4, epsabs=1e-13, epsrel=1e-12)[0]
    return total / (2.0 * s - 2.0)


def eisenstein_tail_estimate(z, N: int, s: float, C: int) -> float:
    """Asymptotic size of the terms omitted by the box truncation.

    Coprime pairs with ``N | c`` have density ``6 / (pi^2 [SL2Z : Gamma_0(N)])``.
    """
    z = complex(z)
    density = 6.0 / (math.pi**2 * index_gamma0(N))
    return 0.5 * density * z.imag**s * C ** (2.0 - 2.0 * s) * _box_exterior_integral(z, s)


def eisenstein_residue_formula(N: int) -> float:
    """Residue of E_N(z, s) at s = 1: 3 / (pi [SL2Z : Gamma_0(N)])."""
    return 3.0 / (math.pi * index_gamma0(N))


def eisenstein_residue_numeric(z, N: int, C_max: int = 4000) -> ResidueEstimate:
    """Extrapolate (s - 1) E_N(z, s) to s = 1 from s = 1.5 and s = 1.25.

    The lattice sums are corrected by the asymptotic box tail, and the
    ``(c, d) = (0, +-1)`` term ``y^s`` is dropped first since it is analytic
    at s = 1. What remains behaves like ``res * exp(-k (s - 1))`` near the
    pole, so the extrapolation is linear in ``log((s - 1) E)``. A third
    sample at s = 2 feeds a quadratic fit whose disagreement with the
    two-point value sets the error bound.
    """
    z = complex(z)
    if z.imag < 1.0:
        raise ValueError("test point should have Im z >= 1")
    if C_max < 4000:
        raise ValueError("C_max must be at least 4000")
    s_vals = (1.25, 1.5, 2.0)
    sums = _lattice_sums(z, N, s_vals, C_max)
    tails = [eisenstein_tail_estimate(z, N, s, C_max) for s in s_vals]
    r = np.array([(s - 1.0) * (v.real - z.imag**s + t) for s, v, t in zip(s_vals, sums, tails)])
    if np.any(r <= 0):
        raise ConvergenceError("(s - 1) E(z, s) is not positive on the sample points")
    logs = np.log(r)
    value = math.exp(2.0 * logs[0] - logs[1])
    quad_fit = math.exp(np.polyfit([0.25, 0.5, 1.0], logs, 2)[-1])
    # the tail estimate ignores coprimality fluctuations; charge it 10%
    tail_unc = value * 0.1 * (2.0 * 0.25 * tails[0] / r[0] + 0.5 * tails[1] / r[1])
    return ResidueEstimate(value, "richardson", 2.0 * abs(value - quad_fit) + tail_unc)


def ip_closed_full(s, c=4.0) -> complex:
    """c (4 pi)^(1/2 - s) Gamma(s - 1/2) zeta(2s - 1): the product formula without the Euler factor."""
    s = complex(s)
    return (c * cmath.exp((0.5 - s) * math.log(4.0 * math.pi))
            * numerics.gamma(s - 0.5) * numerics.zeta(2.0 * s - 1.0))


def ip_closed(params: ClosedFormParams) -> complex:
    """I_p(s) from the product formula, analytically continued in s."""
    s = complex(params.s)
    euler = 1.0 - cmath.exp((1.0 - 2.0 * s) * math.log(params.p))
    return ip_closed_full(s, params.c) * euler


@dataclass(frozen=True)
class IpDirectResult:
    value: float
    error: float
    body: float
    head: float
    tail: float
    y_range: tuple


@lru_cache(maxsize=100_000)
def _xavg_cached(y: float, tol: float) -> float:
    return x_average(y, tol)


def ip_direct(params: ClosedFormParams, quad: QuadratureSpec | None = None, *, full=False):
    """I_p(s) by quadrature, with the x-integrals done numerically.

    Integrates ``y^(s - 3/2) D(y)`` with ``D(y) = A(y) - A(p^2 y)`` and ``A``
    the measured x-average of ``|theta|^2``. Below ``y_min = 0.05 / p^2`` the
    integrand is replaced by its measured scaling ``D(y) ~ kappa / sqrt(y)``;
    above ``y_max = 2`` by its measured exponential decay.
    """
    quad = quad or QuadratureSpec()
    s = complex(params.s)
    if s.imag != 0 or not 1.5 <= s.real <= 4.0:
        raise ValueError("ip_direct is validated for real s in [1.5, 4]")
    s = s.real
    p2 = params.p ** 2
    x_tol = min(1e-10, quad.tol_ip * 1e-2)

    def D(y):
        return _xavg_cached(float(y), x_tol) - _xavg_cached(float(y) * p2, x_tol)

    y_min, y_max = 0.05 / p2, 2.0

    def integrand(t):
        ys = np.exp(t)
        return np.array([yy ** (s - 0.5) * D(yy) for yy in ys])

    body = gk_adaptive(integrand, math.log(y_min), math.log(y_max), 0.5 * quad.tol_ip,
                       initial_panels=8, max_panels=quad.max_subdivisions)
    kappa = D(y_min) * math.sqrt(y_min)
    kappa_half = D(0.5 * y_min) * math.sqrt(0.5 * y_min)
    head = kappa * y_min ** (s - 1.0) / (s - 1.0)
    head_err = abs(kappa - kappa_half) * y_min ** (s - 1.0) / (s - 1.0)
    d_hi, d_lo = D(y_max), D(y_max - 0.5)
    if d_hi > 0 and d_lo > d_hi:
        rate = math.log(d_lo / d_hi) / 0.5
        tail = d_hi * y_max ** (s - 1.5) / rate
    else:
        tail = 0.0
    tail_err = abs(tail) + 1e-15
    err = body.error + head_err + tail_err
    value = body.value + head + tail
    if err > quad.tol_ip:
        raise ToleranceNotMet(f"ip_direct error {err:.3g} exceeds {quad.tol_ip:.3g}",
                              estimate=value, error=err)
    if full:
        return IpDirectResult(value, err, body.value, head, tail, (y_min, y_max))
    return value


def residue_at_1(f, radius: float = 0.25, n_points: int = 64) -> ResidueEstimate:
    """Residue at s = 1 of ``f`` as the mean of ``f(s) (s - 1)`` on a circle.

    ``f`` must accept complex arguments. The error bound compares the full
    average with the average over every other node.
    """
    if not 0.1 <= radius <= 0.4:
        raise ValueError("radius must lie in [0.1, 0.4]")
    if n_points < 16:
        raise ValueError("need at least 16 points on the circle")
    k = np.arange(n_points)
    offsets = radius * np.exp(2j * math.pi * (k + 0.5) / n_points)
    vals = []
    for h in offsets:
        v = complex(f(1.0 + complex(h))) * complex(h)
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            raise NonFiniteSample(f"f returned a non-finite value at s = {1.0 + h}")
        vals.append(v)
    mean = complex(numerics.compensated_sum(vals)) / n_points
    mean_half = complex(numerics.compensated_sum(vals[::2])) / (n_points // 2 + n_points % 2)
    err = float(max(abs(mean - mean_half), abs(mean.imag), 4.0 * np.finfo(float).eps * abs(mean), 1e-300))
    return ResidueEstimate(mean.real, "circle", err)


def norm_from_residue_value(residue: float, p: int) -> float:
    """The norm forced by res_{s=1} I_p(s) = (1 - 1/p) ||theta||^2 / (2 pi)."""
    return 2.0 * math.pi * residue / (1.0 - 1.0 / p)


def norm_from_residue(p: int, c: float, radius: float = 0.25, n_points: int = 64) -> float:
    """||theta||^2 implied by the residue of the product formula at s = 1."""
    res = residue_at_1(lambda s: ip_closed(ClosedFormParams(s, p, c)), radius, n_points)
    return norm_from_residue_value(res.value, p)
