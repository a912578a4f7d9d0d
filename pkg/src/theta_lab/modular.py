"""Integer matrix machinery for the congruence subgroups Gamma_0(N).

Right cosets Gamma_0(N) g of SL(2, Z) are labelled by the bottom row of
``g`` read as a point of the projective line P^1(Z/N). Labels are stored in
the canonical form ``(g, d)`` with ``g`` a divisor of ``N`` (``0`` standing
for ``N`` itself) and ``d`` the least element of its orbit under the units
that fix ``g``.

Convention: Gamma_inf is the full stabiliser of infinity, including -I.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import ReductionFailure

__all__ = [
    "UniModMatrix",
    "MoebiusMap",
    "CosetTable",
    "CuspInfo",
    "moebius_apply",
    "in_gamma0",
    "index_gamma0",
    "coset_reps",
    "coset_label",
    "cusp_data_gamma0_4",
    "standard_domain_reduce",
    "fricke",
    "scaling",
]

_ENTRY_BOUND = 2**62


@dataclass(frozen=True)
class UniModMatrix:
    """An element of SL(2, Z), written ``(a, b; c, d)``."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        for v in (self.a, self.b, self.c, self.d):
            if abs(v) >= _ENTRY_BOUND:
                raise OverflowError("matrix entry exceeds 2**62")
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"determinant of {self} is not 1")

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    def __matmul__(self, other: "UniModMatrix") -> "UniModMatrix":
        return UniModMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "UniModMatrix":
        return UniModMatrix(self.d, -self.b, -self.c, self.a)

    def __call__(self, z):
        return moebius_apply(self, z)

    def as_tuple(self):
        return (self.a, self.b, self.c, self.d)


@dataclass(frozen=True)
class MoebiusMap:
    """A real Moebius map ``z -> (a z + b) / (c z + d)`` with positive determinant."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        if self.a * self.d - self.b * self.c <= 0:
            raise ValueError("MoebiusMap needs a positive determinant to preserve the half-plane")

    @property
    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    def __call__(self, z):
        return moebius_apply(self, z)


def fricke(N) -> MoebiusMap:
    """The involution ``z -> -1/(N z)``."""
    return MoebiusMap(0.0, -1.0, float(N), 0.0)


def scaling(k) -> MoebiusMap:
    """The map ``z -> k z``."""
    return MoebiusMap(float(k), 0.0, 0.0, 1.0)


def moebius_apply(m, z):
    """Apply ``m`` to a point (or array of points) of the upper half-plane."""
    z = np.asarray(z, dtype=complex) if not isinstance(z, (complex, float, int)) else complex(z)
    a, b, c, d = float(m.a), float(m.b), float(m.c), float(m.d)
    if c == 0.0:
        return (a * z + b) / d
    # (az+b)/(cz+d) = a/c - det/(c (cz+d))
    det = a * d - b * c
    return a / c - det / (c * (c * z + d))


def in_gamma0(m: UniModMatrix, N: int) -> bool:
    if N < 1:
        raise ValueError("level must be positive")
    return m.c % N == 0


def _prime_factors(n: int):
    ps = []
    q = 2
    while q * q <= n:
        if n % q == 0:
            ps.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        ps.append(n)
    return ps


def index_gamma0(N: int) -> int:
    """Index of Gamma_0(N) in SL(2, Z): ``N * prod_{q | N} (1 + 1/q)``."""
    if N < 1:
        raise ValueError("level must be positive")
    if N > 2**31:
        raise OverflowError("level too large")
    idx = N
    for q in _prime_factors(N):
        idx = idx // q * (q + 1)
    return idx


def _ext_gcd(x: int, y: int):
    # returns (g, u, v) with u x + v y = g
    u0, v0, u1, v1 = 1, 0, 0, 1
    while y:
        q, r = divmod(x, y)
        x, y = y, r
        u0, u1 = u1, u0 - q * u1
        v0, v1 = v1, v0 - q * v1
    return x, u0, v0


@dataclass(frozen=True)
class CosetTable:
    level: int
    reps: tuple
    labels: tuple
    _lookup: dict = field(repr=False, compare=False, default_factory=dict)

    def __len__(self):
        return len(self.reps)

    def label_index(self, m: UniModMatrix) -> int:
        """Index of the coset ``Gamma_0(N) m``."""
        return self.labels.index(coset_label(m.c, m.d, self.level))

    def rep_for(self, m: UniModMatrix) -> UniModMatrix:
        return self.reps[self.label_index(m)]


@lru_cache(maxsize=64)
def _label_tables(N: int):
    """Per divisor ``g`` of ``N``: the unit group fixing ``g`` and a map d -> canonical d."""
    units = [u for u in range(N) if math.gcd(u, N) == 1] if N > 1 else [0]
    tables = {}
    for g in sorted(dv for dv in range(1, N + 1) if N % dv == 0):
        gg = g % N
        stab = [u for u in units if (u * g - g) % N == 0] if N > 1 else [0]
        canon = {}
        for d in range(N):
            if math.gcd(math.gcd(g, d), N) != 1 or d in canon:
                continue
            orbit = {(u * d) % N for u in stab} if N > 1 else {0}
            rep = min(orbit)
            for e in orbit:
                canon[e] = rep
        tables[gg] = canon
    return units, tables


def coset_label(c: int, d: int, N: int):
    """Canonical P^1(Z/N) label of the row ``(c, d)``."""
    if N == 1:
        return (0, 0)
    c %= N
    d %= N
    if math.gcd(math.gcd(c, d), N) != 1:
        raise ValueError(f"({c}, {d}) is not a primitive row mod {N}")
    units, tables = _label_tables(N)
    g = math.gcd(c, N)
    # find a unit u with u c == g (mod N)
    for u in units:
        if (u * c - g) % N == 0:
            break
    else:  # pragma: no cover - c/g is a unit mod N/g, so a lift always exists
        raise ArithmeticError("no unit lift found")
    gg = g % N
    return (gg, tables[gg][(u * d) % N])


@lru_cache(maxsize=64)
def coset_reps(N: int) -> CosetTable:
    """Right coset representatives of Gamma_0(N) in SL(2, Z)."""
    if not 1 <= N <= 10_000:
        raise ValueError("level must be in [1, 10000]")
    if N == 1:
        return CosetTable(1, (UniModMatrix.identity(),), ((0, 0),))
    _, tables = _label_tables(N)
    reps, labels = [], []
    for gg in sorted(tables, key=lambda v: (v == 0, v)):
        for d in sorted(set(tables[gg].values())):
            c = gg
            if c == 0:
                row = (0, 1)
            else:
                row = (c, d)
            g, u, v = _ext_gcd(row[1], row[0])
            assert g == 1
            # a d - b c = 1 with a = u, b = -v; normalise a into [0, |c|)
            a, b = u, -v
            if row[0]:
                k = a // row[0]
                a -= k * row[0]
                b -= k * row[1]
            reps.append(UniModMatrix(a, b, row[0], row[1]))
            labels.append((gg, d))
    # Put the identity coset first.
    order = sorted(range(len(labels)), key=lambda i: (labels[i][0] != 0, labels[i]))
    return CosetTable(N, tuple(reps[i] for i in order), tuple(labels[i] for i in order))


@dataclass(frozen=True)
class CuspInfo:
    representative: object  # Fraction or the string "inf"
    width: int
    tile_indices: tuple


def cusp_data_gamma0_4():
    """Cusps of Gamma_0(4) with their widths and the coset tiles that touch them."""
    table = coset_reps(4)
    by_label = {lab: i for i, lab in enumerate(table.labels)}
    return [
        CuspInfo("inf", 1, (by_label[(0, 1)],)),
        CuspInfo(Fraction(0), 4, tuple(by_label[(1, k)] for k in range(4))),
        CuspInfo(Fraction(1, 2), 1, (by_label[(2, 1)],)),
    ]


def standard_domain_reduce(z, max_steps=10_000):
    """Move ``z`` into ``|Re z| <= 1/2, |z| >= 1`` by an element of SL(2, Z).

    Returns ``(z', gamma)`` with ``gamma(z) = z'``. Ties go to
    ``Re z' in (-1/2, 1/2]`` and, on the unit circle, ``Re z' >= 0``.
    """
    z = complex(z)
    if z.imag <= 0:
        raise ValueError("point must lie in the upper half-plane")
    g = UniModMatrix.identity()
    eps = 1e-12
    for _ in range(max_steps):
        n = math.floor(z.real + 0.5 - eps)  # puts Re z in (-1/2, 1/2]
        if n:
            z -= n
            g = UniModMatrix(1, -n, 0, 1) @ g
        r2 = z.real * z.real + z.imag * z.imag
        if r2 < 1.0 - eps or (abs(r2 - 1.0) <= eps and z.real < -eps):
            z = -1.0 / z
            g = UniModMatrix(0, -1, 1, 0) @ g
            continue
        return z, g
    raise ReductionFailure("standard_domain_reduce exceeded its step budget")
