"""Scalar special functions and summation helpers.

Gamma uses a fixed-coefficient Lanczos approximation, zeta uses the
Borwein acceleration of the alternating (eta) series. Both accept complex
arguments and return Python ``complex`` values; real inputs give a result
whose imaginary part is zero.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable

from .errors import PoleError

__all__ = [
    "LaurentData",
    "gamma",
    "loggamma",
    "zeta",
    "eta",
    "zeta_shifted_laurent",
    "compensated_sum",
]

# Lanczos g = 7, n = 9 coefficients.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


@dataclass(frozen=True)
class LaurentData:
    """Leading Laurent data of a function with an isolated pole."""

    pole_order: int
    residue: float
    constant_term: float


def compensated_sum(terms: Iterable[complex]) -> complex | float:
    """Sum ``terms`` with correctly rounded real and imaginary parts.

    Returns a float when every term is real, otherwise a complex.
    """
    re_parts = []
    im_parts = []
    is_complex = False
    for t in terms:
        if isinstance(t, complex):
            is_complex = True
            re_parts.append(t.real)
            im_parts.append(t.imag)
        else:
            re_parts.append(float(t))
    re = math.fsum(re_parts)
    if not is_complex:
        return re
    return complex(re, math.fsum(im_parts))


def _check_gamma_pole(s: complex) -> None:
    if abs(s.imag) <= 1e-14 and s.real <= 1e-14:
        nearest = round(s.real)
        if abs(s.real - nearest) <= 1e-14:
            raise PoleError(f"Gamma has a pole at {nearest}")


def _loggamma_right(s: complex) -> complex:
    # Valid for Re s >= 1/2.
    z = s - 1.0
    acc = _LANCZOS_COEF[0]
    for k in range(len(_LANCZOS_COEF) - 1, 0, -1):
        acc += _LANCZOS_COEF[k] / (z + k)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(acc)


def loggamma(s: complex) -> complex:
    """A logarithm of Gamma(s); the branch is not the principal log-Gamma."""
    s = complex(s)
    _check_gamma_pole(s)
    if s.real >= 0.5:
        return _loggamma_right(s)
    return math.log(math.pi) - cmath.log(cmath.sin(math.pi * s)) - _loggamma_right(1.0 - s)


def gamma(s: complex) -> complex:
    """Gamma function for complex ``s``.

    Relative accuracy is about 1e-13 for ``|s| <= 50`` with ``|Im s| <= 50``.

    Raises
    ------
    PoleError
        If ``s`` is within 1e-14 of a nonpositive integer.
    """
    s = complex(s)
    _check_gamma_pole(s)
    if s.real >= 0.5:
        return cmath.exp(_loggamma_right(s))
    # reflection
    return math.pi / (cmath.sin(math.pi * s) * cmath.exp(_loggamma_right(1.0 - s)))


def _borwein_terms(s: complex) -> int:
    t = abs(s.imag)
    sigma = s.real
    budget = 0.5 * math.pi * t + (abs(sigma) + 1.5) * math.log1p(t) + 40.0
    return max(20, int(math.ceil(budget / math.log(3.0 + math.sqrt(8.0)))) + 2)


def _int_power(k: int, s: complex) -> complex:
    # k**-s with the modulus from libm pow, which is nearly correctly rounded
    lk = math.log(k)
    return k ** (-s.real) * complex(math.cos(s.imag * lk), -math.sin(s.imag * lk))


def eta(s: complex) -> complex:
    """Dirichlet eta function (alternating zeta), entire in ``s``."""
    s = complex(s)
    n = _borwein_terms(s)
    # d_k = n * sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!), built by term ratios
    d = []
    term = 1.0
    acc = 0.0
    for i in range(n + 1):
        acc += term
        d.append(acc)
        term *= 4.0 * (n + i) * (n - i) / ((2 * i + 1) * (2 * i + 2))
    dn = d[n]
    parts = []
    for k in range(n):
        w = (dn - d[k]) / dn
        if k % 2:
            w = -w
        parts.append(w * _int_power(k + 1, s))
    return complex(compensated_sum(complex(p) for p in parts))


def zeta(s: complex) -> complex:
    """Riemann zeta function for complex ``s != 1``.

    Relative accuracy is about 1e-12 for ``Re s > -2`` and ``|Im s| <= 50``,
    except very close to the zeros of ``1 - 2**(1-s)`` on ``Re s = 1``.

    Raises
    ------
    PoleError
        If ``|s - 1| < 1e-12``.
    """
    s = complex(s)
    if abs(s - 1.0) < 1e-12:
        raise PoleError("zeta has a pole at s = 1")
    if s.real >= 30.0:
        # 2^-s is below machine epsilon; the series is its own best evaluator.
        parts = [_int_power(k, s) for k in range(2, 8)]
        return 1.0 + complex(compensated_sum(parts))
    denom = 1.0 - cmath.exp((1.0 - s) * math.log(2.0))
    return eta(s) / denom


def zeta_shifted_laurent() -> LaurentData:
    """Laurent data of s -> zeta(2s - 1) at s = 1.

    zeta(w) = 1/(w-1) + euler_gamma + ..., and w - 1 = 2(s - 1).
    """
    euler_gamma = 0.57721566490153286
    return LaurentData(pole_order=1, residue=0.5, constant_term=euler_gamma)
