"""Asymptotic checks: log-polynomial fits, grid energy scans, counting theorems.

Scans report spreads (max/min of a normalised quantity) rather than
constants, since the asymptotic statements being checked hide constants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import DomainError
from .geometry import PointSet, distance_histogram, energy, grid_difference_histogram
from .repcount import RepTable, power_partial_sums, sieve_sum_of_squares

MAX_CONDITION = 1e10


@dataclass(frozen=True)
class FitReport:
    degree: int
    coefficients: tuple[float, ...]  # monomials in log x, leading first
    residual: float  # rms relative residual of S(x)/x
    sample_range: tuple[float, float]
    condition: float

    @property
    def leading(self) -> float:
        return self.coefficients[0]

    def __call__(self, x):
        return np.polyval(self.coefficients, np.log(x))


def fit_log_poly(samples: Sequence[tuple[float, float]], degree: int, max_condition: float = MAX_CONDITION) -> FitReport:
    """Least-squares fit of S(x)/x by a degree-d polynomial in log x.

    The design matrix is built in log x mapped affinely onto [-1, 1] and
    solved by SVD; the condition number reported is of that scaled matrix.
    """
    if degree < 0:
        raise DomainError("degree must be nonnegative")
    xs = np.array([float(x) for x, _ in samples])
    ys = np.array([float(y) for _, y in samples]) / xs
    if len(xs) < degree + 2:
        raise DomainError(f"need at least {degree + 2} samples for degree {degree}, got {len(xs)}")
    if len(np.unique(xs)) != len(xs) or xs.min() < 10:
        raise DomainError("sample x values must be distinct and >= 10")
    L = np.log(xs)
    lo, hi = L.min(), L.max()
    mid, half = (hi + lo) / 2, (hi - lo) / 2
    t = (L - mid) / half
    V = np.vander(t, degree + 1)
    sv = np.linalg.svd(V, compute_uv=False)
    cond = float(sv[0] / sv[-1]) if sv[-1] > 0 else math.inf
    if cond > max_condition:
        raise DomainError(f"fit of degree {degree} is ill-conditioned (cond {cond:.2e}); try a lower degree")
    coef_t, *_ = np.linalg.lstsq(V, ys, rcond=None)
    # substitute t = (L - mid) / half back into monomials of L
    poly = np.poly1d([0.0])
    lin = np.poly1d([1 / half, -mid / half])
    for c in coef_t:
        poly = poly * lin + c
    coefs = np.zeros(degree + 1)
    coefs[degree + 1 - len(poly.coeffs):] = poly.coeffs
    resid = (V @ coef_t - ys) / ys
    rms = float(np.sqrt(np.mean(resid**2)))
    return FitReport(degree, tuple(coefs.tolist()), rms, (float(xs.min()), float(xs.max())), cond)


def geometric_points(x_lo: int, x_hi: int, count: int) -> list[int]:
    return sorted(set(int(round(v)) for v in np.geomspace(x_lo, x_hi, count)))


def partial_sum_samples(table: RepTable, k: int, xs: Iterable[int], smoothing: int = 0) -> list[tuple[int, float]]:
    """(x, S_k(x)) pairs, or Riesz-smoothed stand-ins when ``smoothing`` > 0.

    With smoothing j the value is (j + 1)! R_j(x) / x^j where R_0 = S_k and
    R_j(x) = sum_{m <= x} R_{j-1}(m). It has the same leading behaviour
    x P(log x) with P of the same degree, but far less arithmetic noise.
    """
    sums = power_partial_sums(table, k)
    xs = list(xs)
    if smoothing == 0:
        return [(x, float(sums[x])) for x in xs]
    acc = sums.as_float()
    for _ in range(smoothing):
        acc = np.cumsum(acc)
    fact = math.factorial(smoothing + 1)
    return [(x, fact * float(acc[x]) / float(x) ** smoothing) for x in xs]


def predicted_degree(k: int) -> int:
    """Degree 2^(k-1) - 1 of the log-polynomial in sum r(n)^k."""
    return 2 ** (k - 1) - 1


@dataclass(frozen=True)
class DegreeDetection:
    k: int
    degree: int
    fit: FitReport
    lower: FitReport

    @property
    def improvement(self) -> float:
        return self.lower.residual / self.fit.residual if self.fit.residual > 0 else math.inf


def degree_detection(
    table: RepTable, k: int, x_lo: int = 10**5, x_hi: int = 10**7, count: int = 40, smoothing: int = 2
) -> DegreeDetection:
    """Compare the predicted-degree fit with the fit one degree lower."""
    d = predicted_degree(k)
    if d < 1:
        raise DomainError("degree detection needs k >= 2")
    samples = partial_sum_samples(table, k, geometric_points(x_lo, x_hi, count), smoothing)
    return DegreeDetection(k, d, fit_log_poly(samples, d), fit_log_poly(samples, d - 1))


def wilson_ratio(table: RepTable, xs: Sequence[int]) -> list[tuple[int, float]]:
    """S_2(x) / (x log x) for the two-squares table."""
    S = power_partial_sums(table, 2)
    return [(x, S[x] / (x * math.log(x))) for x in xs]


def leading_coefficient(table: RepTable, k: int = 2, x_lo: int = 10**5, x_hi: int = 10**7, count: int = 25) -> float:
    """Slope of S_k(x)/x against log x from a degree-1 fit (k = 2: Mueller's A_Q)."""
    samples = partial_sum_samples(table, k, geometric_points(x_lo, x_hi, count))
    return fit_log_poly(samples, 1).leading


@dataclass
class RatioSeries:
    points: list[tuple[int, float]]
    normalizer: str
    exploratory: bool = False
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        Ns = [n for n, _ in self.points]
        if any(b <= a for a, b in zip(Ns, Ns[1:])):
            raise ValueError("N must be strictly increasing")

    @property
    def ratios(self) -> list[float]:
        return [r for _, r in self.points]

    @property
    def spread(self) -> float:
        r = self.ratios
        return max(r) / min(r)


def _log_normalizer(k: int, m: int, N: int) -> tuple[float, str]:
    """log of the normaliser and its description."""
    if m == 2:
        p = predicted_degree(k)
        return (k + 1) * math.log(N) + p * math.log(math.log(N)), f"N^{k + 1} (log N)^{p}"
    if k == 2:
        e = 2 + (2 * m - 2) / m
        return e * math.log(N), f"N^{e:g}"
    return (k + 1) * math.log(N), f"N^{k + 1}"


def grid_energy_ratio_scan(k: int, m: int, sides: Sequence[int]) -> RatioSeries:
    """E_k(grid) divided by the predicted order, for increasing sides.

    m >= 3 with k >= 3 has no stated order; it is scanned against N^(k+1)
    and marked exploratory.
    """
    if k < 1 or m < 1:
        raise DomainError("need k >= 1 and m >= 1")
    pts = []
    desc = ""
    for side in sides:
        if side < 2:
            raise DomainError("sides must be >= 2")
        N = side**m
        H = grid_difference_histogram(m, side)
        E = energy(H, k)
        if k == 1:
            pts.append((N, E / N**2))
            desc = "N^2"
            continue
        log_norm, desc = _log_normalizer(k, m, N)
        pts.append((N, math.exp(math.log(E) - log_norm)))
    return RatioSeries(pts, desc, exploratory=(m >= 3 and k >= 3))


def optimality_product(m: int, sides: Sequence[int]) -> RatioSeries:
    """d(P) E_2(P) / N^4 for grids in dimension m >= 3."""
    if m < 3:
        raise DomainError("optimality product is stated for m >= 3")
    pts = []
    for side in sides:
        if side < 2:
            raise DomainError("sides must be >= 2")
        N = side**m
        H = grid_difference_histogram(m, side)
        pts.append((N, H.distinct * energy(H, 2) / N**4))
    return RatioSeries(pts, "d(P) E_2 / N^4")


def legendre_distinct_count(x: int) -> int:
    """#{1 <= n <= x : n != 4^a (8b + 7)}."""
    if x < 1:
        raise DomainError("x must be positive")
    excluded = 0
    q = x
    while q >= 7:
        excluded += (q - 7) // 8 + 1
        q //= 4
    return x - excluded


def legendre_crosscheck(x: int, table: Optional[RepTable] = None) -> list[int]:
    """Values y <= x where the Legendre count disagrees with the r_3 support (empty when consistent)."""
    T = table if table is not None else sieve_sum_of_squares(3, x)
    support = np.cumsum(np.asarray(T.values[1 : x + 1]) > 0)
    bad = []
    # the Legendre count is cheap; check every prefix
    excluded = np.zeros(x + 1, dtype=np.int64)
    q = 1
    while 7 * q <= x:
        excluded[7 * q :: 8 * q] = 1
        q *= 4
    legendre = np.cumsum(1 - excluded[1:])
    bad = (np.flatnonzero(legendre != support) + 1).tolist()
    return bad


def lagrange_support(x: int, table: Optional[RepTable] = None) -> int:
    """#{1 <= n <= x : r_4(n) > 0}; equals x by the four-square theorem."""
    T = table if table is not None else sieve_sum_of_squares(4, x)
    return T.support_count(x)


@dataclass(frozen=True)
class Conjecture44Row:
    label: str
    N: int
    energy: int
    ratio: float


def conjecture44_report(point_sets: Sequence[tuple[str, PointSet]], m: int) -> list[Conjecture44Row]:
    """E_2(P) / |P|^(2 + (2m - 2)/m) per labelled set. Reported, never asserted."""
    e = 2 + (2 * m - 2) / m
    rows = []
    for label, P in point_sets:
        if P.dimension != m:
            raise DomainError(f"{label} has dimension {P.dimension}, expected {m}")
        E = energy(distance_histogram(P), 2)
        rows.append(Conjecture44Row(label, P.size, E, E / P.size**e))
    return rows


@dataclass(frozen=True)
class LogPowerRow:
    k: int
    predicted: int  # 2^(k-1) - 1
    required: float  # (k-1)/2 needed for the Hoelder route to give N / sqrt(log N)
    measured: float  # local slope of log(E_k / N^(k+1)) against log log N


def log_power_report(ks: Sequence[int], sides: Sequence[int]) -> list[LogPowerRow]:
    """Side-by-side log exponents for planar grids.

    ``measured`` is a crude two-point slope over the scan and is only
    indicative at desk-scale N.
    """
    rows = []
    lo, hi = sides[0], sides[-1]
    for k in ks:
        vals = []
        for side in (lo, hi):
            N = side * side
            E = energy(grid_difference_histogram(2, side), k)
            vals.append((math.log(math.log(N)), math.log(E) - (k + 1) * math.log(N)))
        slope = (vals[1][1] - vals[0][1]) / (vals[1][0] - vals[0][0])
        rows.append(LogPowerRow(k, predicted_degree(k), (k - 1) / 2, slope))
    return rows
