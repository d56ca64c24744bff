"""Arithmetic planar lattices from imaginary quadratic fields.

Covers norm forms Q_D, the covolume-one scaling, pointwise energies
E_{D,k}(N) = sum_{n <= N / S_D^2} r_D(n)^k, Mueller's coefficient A_Q for the
second moment, and Kuehnlein-style arithmeticity detection (three pairwise
independent vectors of equal length).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .errors import DomainError
from .repcount import RepTable, sieve_binary_form


@dataclass(frozen=True)
class BinaryForm:
    """Integral binary quadratic form ax^2 + bxy + cy^2, positive definite."""

    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.a <= 0 or self.disc >= 0:
            raise DomainError(f"({self.a}, {self.b}, {self.c}) is not positive definite")

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def primitive(self) -> bool:
        return math.gcd(self.a, self.b, self.c) == 1

    @property
    def abc(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def __call__(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y

    def __str__(self):
        return f"{self.a}x^2 + {self.b}xy + {self.c}y^2"


def is_squarefree(n: int) -> bool:
    n = abs(n)
    if n == 0:
        return False
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        if n % p == 0:
            n //= p
        p += 1
    return True


def _check_D(D: int) -> None:
    if D >= 0:
        raise DomainError(f"D must be negative, got {D}")
    if not is_squarefree(D):
        raise DomainError(f"D={D} is not squarefree")


def norm_form(D: int) -> BinaryForm:
    """Norm form of the ring of integers of Q(sqrt(D))."""
    _check_D(D)
    if D % 4 == 1:
        return BinaryForm(1, 1, (1 - D) // 4)
    return BinaryForm(1, 0, -D)


@dataclass(frozen=True)
class ScaledLattice:
    """Q_D scaled by S_D so the lattice has covolume one.

    ``doubled`` records which case applies: S_D^2 = 2/sqrt|D| if True,
    else 1/sqrt|D|. The float ``scale`` is for display only; cutoffs use
    exact integer comparisons.
    """

    D: int
    form: BinaryForm
    scale: float
    doubled: bool

    @property
    def scale_sq(self) -> float:
        return (2.0 if self.doubled else 1.0) / math.sqrt(-self.D)

    def covolume(self) -> float:
        return self.scale_sq * math.sqrt(-self.form.disc) / 2

    def cutoff(self, N: int) -> int:
        """floor(N / S_D^2), computed exactly."""
        if N < 0:
            raise DomainError("N must be nonnegative")
        root = math.isqrt(N * N * (-self.D))
        # doubled: n <= N sqrt|D| / 2  <=>  2n <= isqrt(N^2 |D|)
        return root // 2 if self.doubled else root


def covolume_scale(D: int) -> ScaledLattice:
    form = norm_form(D)
    doubled = D % 4 == 1
    scale = (math.sqrt(2.0) if doubled else 1.0) * (-D) ** -0.25
    return ScaledLattice(D, form, scale, doubled)


@dataclass(frozen=True)
class LatticeEnergyReport:
    D: int
    k: int
    N: int
    cutoff: int
    energy: int


def power_sum_upto(table: RepTable, k: int, x: int) -> int:
    """sum_{1 <= n <= x} r(n)^k exactly; k = 0 counts n with r(n) > 0."""
    if x > table.x_max:
        raise DomainError(f"table for {table.descriptor.label()} stops at {table.x_max}, need {x}")
    vals, counts = np.unique(np.asarray(table.values[1 : x + 1], dtype=np.int64), return_counts=True)
    if k == 0:
        return int(counts[vals > 0].sum())
    return sum(int(v) ** k * int(c) for v, c in zip(vals.tolist(), counts.tolist()))


TableSource = Callable[[BinaryForm, int], RepTable]


def _default_source(form: BinaryForm, x_max: int) -> RepTable:
    return sieve_binary_form(form.a, form.b, form.c, x_max)


def pointwise_energy(
    D: int, k: int, N: int, table: Optional[RepTable] = None
) -> LatticeEnergyReport:
    """E_{D,k}(N) for the covolume-one lattice of Q_D.

    A supplied table that stops short of the cutoff is an error, never a
    silent truncation.
    """
    if k < 0:
        raise DomainError("k must be nonnegative")
    lat = covolume_scale(D)
    cut = lat.cutoff(N)
    if table is None:
        table = _default_source(lat.form, max(cut, 1))
    elif table.descriptor.abc != lat.form.abc:
        raise DomainError(f"table is for {table.descriptor.abc}, expected {lat.form.abc}")
    return LatticeEnergyReport(D, k, N, cut, power_sum_upto(table, k, cut))


def _factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _mueller_A(q: int) -> Fraction:
    total = Fraction(1)
    for p, e in _factor(q).items():
        if p == 2:
            total *= 1 if e <= 1 else (2 if e == 2 else e - 1)
        else:
            total *= 2 + (1 - Fraction(1, p)) * (e - 1)
    return total


def muller_coefficient_exact(F: BinaryForm) -> Fraction:
    """A_Q = 12 A(q)/q prod_{p | q} (1 + 1/p)^-1 with q = det [[2a, b], [b, 2c]]."""
    if not F.primitive:
        raise DomainError(f"{F} is not primitive")
    q = -F.disc
    value = 12 * _mueller_A(q) / q
    for p in _factor(q):
        value /= 1 + Fraction(1, p)
    return value


def muller_coefficient(F: BinaryForm) -> float:
    return float(muller_coefficient_exact(F))


# --- forms with a quadratic-irrational coefficient --------------------------


def surd_sign(p: int, q: int, d: int) -> int:
    """Sign of p + q*sqrt(d) for non-square d > 0, decided in integers."""
    if q == 0:
        return (p > 0) - (p < 0)
    if p == 0:
        return (q > 0) - (q < 0)
    if p > 0 and q > 0:
        return 1
    if p < 0 and q < 0:
        return -1
    # opposite signs: compare p^2 with q^2 d
    lhs, rhs = p * p, q * q * d
    if p > 0:
        return 1 if lhs > rhs else -1
    return 1 if rhs > lhs else -1


@dataclass(frozen=True)
class SurdForm:
    """a x^2 + b xy + c y^2 with coefficients in Z[sqrt(d)].

    Each coefficient is a pair (u, v) meaning u + v*sqrt(d). Values are
    pairs of the same kind, so equality of lengths is exact.
    """

    d: int
    a: tuple[int, int]
    b: tuple[int, int] = (0, 0)
    c: tuple[int, int] = (1, 0)

    def __post_init__(self):
        if self.d <= 1 or math.isqrt(self.d) ** 2 == self.d:
            raise DomainError(f"d={self.d} must be a non-square integer > 1")
        af, bf, cf = (self._f(t) for t in (self.a, self.b, self.c))
        if af <= 0 or bf * bf - 4 * af * cf >= 0:
            raise DomainError("surd form is not positive definite")

    def _f(self, t):
        return t[0] + t[1] * math.sqrt(self.d)

    @classmethod
    def diagonal(cls, d: int) -> "SurdForm":
        """x^2 + sqrt(d) y^2."""
        return cls(d, (1, 0), (0, 0), (0, 1))

    def __call__(self, x: int, y: int) -> tuple[int, int]:
        xx, xy, yy = x * x, x * y, y * y
        return (
            self.a[0] * xx + self.b[0] * xy + self.c[0] * yy,
            self.a[1] * xx + self.b[1] * xy + self.c[1] * yy,
        )

    def le(self, value: tuple[int, int], n: int) -> bool:
        return surd_sign(n - value[0], -value[1], self.d) >= 0

    def approx(self) -> tuple[float, float, float]:
        return self._f(self.a), self._f(self.b), self._f(self.c)


AnyForm = Union[BinaryForm, SurdForm]


def _half_plane_vectors(F: AnyForm, n_max: int):
    """All (x, y) with y > 0 or (y == 0, x > 0) and F(x, y) <= n_max."""
    if isinstance(F, BinaryForm):
        a, b, c = F.abc
        le = lambda v: v <= n_max  # noqa: E731
    else:
        a, b, c = F.approx()
        le = lambda v: F.le(v, n_max)  # noqa: E731
    disc = 4 * a * c - b * b
    ymax = int(math.sqrt(4 * a * n_max / disc)) + 2
    for y in range(0, ymax + 1):
        rem = 4 * a * n_max - disc * y * y
        if rem < 0:
            continue
        centre = -b * y / (2 * a)
        half = math.sqrt(rem) / (2 * a)
        lo = 1 if y == 0 else math.floor(centre - half) - 2
        for x in range(lo, math.ceil(centre + half) + 3):
            v = F(x, y)
            if le(v):
                yield v, (x, y)


def _canonical(vec: tuple[int, int]) -> tuple[int, int]:
    x, y = vec
    return vec if (x > 0 or (x == 0 and y > 0)) else (-x, -y)


def direction_classes(F: AnyForm, n_max: int) -> dict:
    """Length value -> representing vectors, one per direction through the origin.

    Vectors of equal length are linearly dependent only when v' = -v, so each
    half-plane vector is its own direction.
    """
    groups: dict = {}
    for v, vec in _half_plane_vectors(F, n_max):
        groups.setdefault(v, []).append(_canonical(vec))
    return groups


@dataclass(frozen=True)
class KuhnleinWitness:
    value: object
    vectors: tuple[tuple[int, int], ...]


def _value_key(F: AnyForm, v):
    if isinstance(F, BinaryForm):
        return v
    return v[0] + v[1] * math.sqrt(F.d)


def kuhnlein_witness(F: AnyForm, n_max: int) -> Optional[KuhnleinWitness]:
    """Smallest length value <= n_max with three pairwise independent vectors."""
    if n_max < 1:
        return None
    groups = direction_classes(F, n_max)
    hits = [v for v, vecs in groups.items() if len(vecs) >= 3]
    if not hits:
        return None
    best = min(hits, key=lambda v: _value_key(F, v))
    vecs = sorted(groups[best], key=lambda t: (-t[0], -t[1]))[:3]
    return KuhnleinWitness(best, tuple(vecs))


def max_independent_directions(F: AnyForm, n_max: int) -> int:
    if n_max < 1:
        return 0
    if isinstance(F, BinaryForm):
        table = sieve_binary_form(F.a, F.b, F.c, n_max)
        return int(np.asarray(table.values[1:], dtype=np.int64).max()) // 2
    groups = direction_classes(F, n_max)
    return max((len(v) for v in groups.values()), default=0)


# --- comparisons -------------------------------------------------------------


@dataclass
class LatticeRanking:
    k: int
    N: int
    reports: list[LatticeEnergyReport]
    flags: dict[str, bool] = field(default_factory=dict)
    asserted: bool = False

    @property
    def order(self) -> list[int]:
        return [r.D for r in self.reports]

    def energy(self, D: int) -> int:
        return next(r.energy for r in self.reports if r.D == D)


def compare_lattices(
    Ds: Sequence[int], k: int, N: int, source: TableSource = _default_source
) -> LatticeRanking:
    """Rank E_{D,k}(N) descending and evaluate the hexagonal-maximality flags.

    Flags are only meant to be asserted for k == 2.
    """
    reports = []
    for D in dict.fromkeys(Ds):
        lat = covolume_scale(D)
        cut = lat.cutoff(N)
        table = source(lat.form, max(cut, 1))
        reports.append(pointwise_energy(D, k, N, table=table))
    reports.sort(key=lambda r: (-r.energy, -r.D))
    by_D = {r.D: r.energy for r in reports}
    flags: dict[str, bool] = {}
    for D, e in by_D.items():
        if D % 4 == 1 and D != -3 and -3 in by_D:
            flags[f"E[{D}] < E[-3]"] = e < by_D[-3]
        elif D % 4 != 1 and D != -1 and -1 in by_D:
            flags[f"E[{D}] < E[-1]"] = e < by_D[-1]
    if -3 in by_D:
        flags["hexagonal strictly maximal"] = all(e < by_D[-3] for D, e in by_D.items() if D != -3)
    return LatticeRanking(k, N, reports, flags, asserted=(k == 2))
