"""Finite integer point sets, exact distance histograms and distance energies.

Pairs are ordered and exclude p == q, so the histogram counts always sum to
N(N - 1). The k-th energy is the sum of count^k over distinct squared
distances; with k = 0 it is the number of distinct distances d(P).
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityError, DomainError

MAX_POINTS = 5 * 10**7
# brute-force pair loop: rows per block
_PAIR_BLOCK = 512


@dataclass(frozen=True, eq=False)
class PointSet:
    """Distinct integer points in Z^m, stored as an (N, m) int64 array."""

    coords: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coords)
        if c.ndim != 2 or c.shape[0] < 1 or c.shape[1] < 1:
            raise DomainError("need a nonempty (N, m) coordinate array")
        c = c.astype(np.int64)
        if len(np.unique(c, axis=0)) != len(c):
            raise DomainError("points must be pairwise distinct")
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    @classmethod
    def from_points(cls, points: Iterable[Sequence[int]]) -> "PointSet":
        pts = [tuple(int(v) for v in p) for p in points]
        if not pts:
            raise DomainError("empty point set")
        dims = {len(p) for p in pts}
        if len(dims) != 1:
            raise DomainError(f"mixed dimensions {sorted(dims)}")
        return cls(np.array(pts, dtype=np.int64))

    @property
    def dimension(self) -> int:
        return self.coords.shape[1]

    @property
    def size(self) -> int:
        return self.coords.shape[0]

    def __len__(self):
        return self.size

    def points(self) -> list[tuple[int, ...]]:
        return [tuple(p) for p in self.coords.tolist()]


@dataclass(frozen=True, eq=False)
class DistanceHistogram:
    """Squared distance -> number of ordered pairs (p, q), p != q."""

    d2: np.ndarray
    counts: np.ndarray
    source_size: int

    def __post_init__(self):
        if len(self.d2) != len(self.counts):
            raise ValueError("d2 and counts must have equal length")
        if len(self.d2) and (np.any(np.diff(self.d2) <= 0) or self.d2[0] <= 0):
            raise ValueError("d2 must be strictly increasing and positive")

    def as_dict(self) -> dict[int, int]:
        return dict(zip(self.d2.tolist(), self.counts.tolist()))

    def total(self) -> int:
        return sum(int(c) for c in self.counts.tolist())

    def __eq__(self, other):
        if not isinstance(other, DistanceHistogram):
            return NotImplemented
        return (
            self.source_size == other.source_size
            and np.array_equal(self.d2, other.d2)
            and np.array_equal(self.counts, other.counts)
        )

    @property
    def distinct(self) -> int:
        return len(self.d2)


@dataclass(frozen=True)
class EnergyReport:
    N: int
    k: int
    energy: int
    distinct: int
    holder_bound: float


def make_square_grid(m: int, side: int) -> PointSet:
    """The grid {1, ..., side}^m."""
    if m < 1 or side < 1:
        raise DomainError(f"need m >= 1 and side >= 1, got m={m}, side={side}")
    if side**m > MAX_POINTS:
        raise CapacityError(f"grid {side}^{m} exceeds {MAX_POINTS} points")
    axes = [np.arange(1, side + 1, dtype=np.int64)] * m
    mesh = np.meshgrid(*axes, indexing="ij")
    return PointSet(np.stack([g.ravel() for g in mesh], axis=1))


def _histogram_from_bins(bins: np.ndarray, n: int) -> DistanceHistogram:
    bins[0] = 0
    nz = np.flatnonzero(bins)
    return DistanceHistogram(nz.astype(np.int64), bins[nz].astype(np.int64), n)


def distance_histogram(P: PointSet) -> DistanceHistogram:
    """Brute-force histogram over all N(N - 1) ordered pairs."""
    c = P.coords
    n = len(c)
    if n * n > 4 * 10**10:
        raise CapacityError(f"{n} points is too many for pair enumeration")
    span = c.max(axis=0) - c.min(axis=0)
    top = int(np.sum(span.astype(object) ** 2))
    bins = np.zeros(top + 1, dtype=np.int64)
    for start in range(0, n, _PAIR_BLOCK):
        block = c[start : start + _PAIR_BLOCK]
        diff = block[:, None, :] - c[None, :, :]
        d2 = np.einsum("ijk,ijk->ij", diff, diff)
        bins += np.bincount(d2.ravel(), minlength=top + 1)
    return _histogram_from_bins(bins, n)


def grid_difference_histogram(m: int, side: int) -> DistanceHistogram:
    """Histogram of {1..side}^m via difference vectors.

    A difference vector a occurs for prod_i (side - |a_i|) ordered pairs; vectors
    are enumerated in the nonnegative orthant and weighted by 2^(nonzero coords).
    """
    if m < 1 or side < 1:
        raise DomainError(f"need m >= 1 and side >= 1, got m={m}, side={side}")
    if side**m > MAX_POINTS:
        raise CapacityError(f"grid {side}^{m} exceeds {MAX_POINTS} points")
    n = side**m
    top = m * (side - 1) ** 2
    bins = np.zeros(top + 1, dtype=np.int64)
    steps = np.arange(side, dtype=np.int64)
    mult = (side - steps) * np.where(steps > 0, 2, 1)
    sq = steps * steps
    # fold the leading m - 1 axes into unique (norm, weight) pairs, then add
    # the last axis row by row
    norm = np.zeros(1, dtype=np.int64)
    weight = np.ones(1, dtype=np.int64)
    for _ in range(m - 1):
        norm = (norm[:, None] + sq[None, :]).ravel()
        weight = (weight[:, None] * mult[None, :]).ravel()
        order = np.argsort(norm, kind="stable")
        norm, starts = np.unique(norm[order], return_index=True)
        weight = np.add.reduceat(weight[order], starts)
    for j in range(side):
        # norms are unique, so the fancy-index add sees no duplicates
        bins[norm + sq[j]] += weight * mult[j]
    return _histogram_from_bins(bins, n)


def energy(H: DistanceHistogram, k: int) -> int:
    """E_k = sum of count^k; E_0 = number of distinct distances."""
    if k < 0:
        raise DomainError("k must be nonnegative")
    if k == 0:
        return H.distinct
    return sum(c**k for c in H.counts.tolist())


def holder_lower_bound(H: DistanceHistogram, k: int) -> float:
    """(N^2 - N)^(k/(k-1)) / E_k^(1/(k-1)), a lower bound for d(P)."""
    if k < 2:
        raise DomainError("Hoelder bound needs k >= 2")
    if H.source_size < 2:
        raise DomainError("Hoelder bound needs at least two points")
    pairs = H.source_size * (H.source_size - 1)
    ek = energy(H, k)
    # work in logs: E_k overflows float for large grids
    log_bound = (k * math.log(pairs) - math.log(ek)) / (k - 1)
    return math.exp(log_bound)


def energy_report(H: DistanceHistogram, k: int) -> EnergyReport:
    bound = holder_lower_bound(H, k) if k >= 2 and H.source_size >= 2 else 0.0
    return EnergyReport(H.source_size, k, energy(H, k), H.distinct, bound)


def random_point_set(n: int, m: int, low: int, high: int, seed: int = 0) -> PointSet:
    """n distinct points uniform in [low, high]^m from ``random.Random(seed)``.

    Duplicates are rejected and resampled.
    """
    if (high - low + 1) ** m < n:
        raise DomainError("box too small for that many distinct points")
    rng = random.Random(seed)
    seen: set[tuple[int, ...]] = set()
    pts = []
    while len(pts) < n:
        p = tuple(rng.randint(low, high) for _ in range(m))
        if p not in seen:
            seen.add(p)
            pts.append(p)
    return PointSet.from_points(pts)


def read_point_file(path) -> PointSet:
    """One point per line, whitespace-separated integers, '#' starts a comment line."""
    pts = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            try:
                pts.append(tuple(int(tok) for tok in s.split()))
            except ValueError as exc:
                raise DomainError(f"{path}:{lineno}: {exc}") from None
    return PointSet.from_points(pts)


def brute_pairs(points: Sequence[Sequence[int]]) -> dict[int, int]:
    """Pure-Python pair loop; test oracle for tiny sets."""
    out: dict[int, int] = {}
    for p, q in itertools.permutations(points, 2):
        d2 = sum((a - b) ** 2 for a, b in zip(p, q))
        out[d2] = out.get(d2, 0) + 1
    return dict(sorted(out.items()))
