"""Epstein zeta functions of binary forms and their higher moments.

Normalisation: Z_Q(s) = sum over all nonzero (x, y) of Q(x, y)^-s
= sum_{n >= 1} r_Q(n) n^-s. With a, l = sqrt|D|/(2a) for the reduced form,

    Z_Q(s) = 2 a^-s zeta(2s)
           + 2 a^-s sqrt(pi) Gamma(s - 1/2)/Gamma(s) zeta(2s - 1) l^(1 - 2s)
           + 8 a^-s pi^s l^(1/2 - s)/Gamma(s)
             * sum_n n^(s-1/2) sigma_{1-2s}(n) K_{s-1/2}(2 pi n l) cos(pi n b / a).

The direct route sums the sieve table up to a cutoff and adds the tail of
the smooth lattice-point count c t - 1 (c = 2 pi / sqrt|D|) by partial
summation; it shares nothing with the Bessel route and serves as its oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError, PoleError
from .lattice import BinaryForm, norm_form
from .repcount import RepTable, sieve_binary_form
from .special import bessel_k, divisor_sigma, eta_beta, gamma_fn, riemann_zeta

DIRECT = "direct"
CHOWLA_SELBERG = "chowla_selberg"
FUNCTIONAL_EQUATION = "functional_equation"
TRUNCATED = "truncated"

# safety factor applied to every empirical error envelope
SAFETY = 4.0


@dataclass(frozen=True)
class SpecialFunctionConfig:
    target_abs_tolerance: float = 1e-12
    max_series_terms: int = 400
    bessel_term_cap: int = 400
    pole_radius: float = 1e-6

    def __post_init__(self):
        if not self.target_abs_tolerance > 0:
            raise DomainError("tolerance must be positive")


DEFAULT_CONFIG = SpecialFunctionConfig()


@dataclass(frozen=True)
class EpsteinEvaluation:
    form: BinaryForm
    s: float
    k: int
    value: float
    method: str
    error_estimate: float
    cutoff: Optional[int] = None

    def __post_init__(self):
        if not self.error_estimate >= 0:
            raise ValueError("error estimate must be nonnegative")


def reduce_form(F: BinaryForm) -> BinaryForm:
    """Gauss-reduced representative: |b| <= a <= c, b >= 0 when |b| == a or a == c."""
    a, b, c = F.abc
    while True:
        if c < a:
            a, b, c = c, -b, a
            continue
        if abs(b) > a:
            # x -> x - t y with t the nearest integer to b / 2a
            t = (b + a) // (2 * a)
            b, c = b - 2 * a * t, a * t * t - b * t + c
            continue
        break
    if b < 0 and (-b == a or a == c):
        b = -b
    return BinaryForm(a, b, c)


# --- Chowla-Selberg ----------------------------------------------------------


def _chowla_selberg_raw(F: BinaryForm, s: float, cfg: SpecialFunctionConfig) -> tuple[float, float]:
    R = reduce_form(F)
    a, b = R.a, R.b
    l = math.sqrt(-R.disc) / (2 * a)
    a_s = a**-s
    g_s = gamma_fn(s)
    first = 2 * a_s * riemann_zeta(2 * s)
    second = 2 * a_s * math.sqrt(math.pi) * gamma_fn(s - 0.5) / g_s * riemann_zeta(2 * s - 1) * l ** (1 - 2 * s)
    pref = 8 * a_s * math.pi**s * l ** (0.5 - s) / g_s
    nu = s - 0.5
    terms = []
    last = 0.0
    for n in range(1, cfg.bessel_term_cap + 1):
        t = n**nu * divisor_sigma(n, 1 - 2 * s) * bessel_k(nu, 2 * math.pi * n * l) * math.cos(math.pi * n * b / a)
        terms.append(pref * t)
        # envelope ignores the cosine so a vanishing cosine cannot stop the loop early
        last = abs(pref * n**nu * divisor_sigma(n, 1 - 2 * s) * bessel_k(nu, 2 * math.pi * n * l))
        if last < cfg.target_abs_tolerance * 1e-4:
            break
    else:
        raise DomainError(f"Bessel series did not converge in {cfg.bessel_term_cap} terms")
    value = first + second + math.fsum(terms)
    # terms shrink by about exp(-2 pi l) <= exp(-pi sqrt 3) per step
    err = SAFETY * last + 1e-15 * (abs(first) + abs(second) + abs(value))
    return value, err


def _check_poles(s: float, cfg: SpecialFunctionConfig) -> None:
    if abs(s - 1) < cfg.pole_radius:
        raise PoleError(f"s={s} is within {cfg.pole_radius} of the pole at s=1")
    if abs(s - 0.5) < cfg.pole_radius:
        raise PoleError(f"s={s} is within {cfg.pole_radius} of the cancelling singularities at s=1/2")
    if s <= 0:
        raise DomainError(f"s={s} must be positive")


def completion_factor(F: BinaryForm, s: float) -> float:
    """(sqrt|D| / 2 pi)^s Gamma(s)."""
    return (math.sqrt(-F.disc) / (2 * math.pi)) ** s * gamma_fn(s)


def epstein_chowla_selberg(
    F: BinaryForm, s: float, config: SpecialFunctionConfig = DEFAULT_CONFIG, route: str = "auto"
) -> EpsteinEvaluation:
    """Z_F(s) for real s > 0 away from 1/2 and 1.

    ``route="auto"`` evaluates s < 1/2 through the functional equation from
    1 - s; ``route="series"`` uses the closed formula everywhere.
    """
    s = float(s)
    _check_poles(s, config)
    if route == "auto" and s < 0.5:
        v, err = _chowla_selberg_raw(F, 1 - s, config)
        ratio = completion_factor(F, 1 - s) / completion_factor(F, s)
        return EpsteinEvaluation(F, s, 1, v * ratio, FUNCTIONAL_EQUATION, err * abs(ratio))
    v, err = _chowla_selberg_raw(F, s, config)
    return EpsteinEvaluation(F, s, 1, v, CHOWLA_SELBERG, err)


def functional_eq_residual(F: BinaryForm, s: float, config: SpecialFunctionConfig = DEFAULT_CONFIG) -> float:
    """|Lambda(s) - Lambda(1 - s)| with both sides from the closed formula."""
    s = float(s)
    if s == 0.5:
        return 0.0
    left = completion_factor(F, s) * epstein_chowla_selberg(F, s, config, route="series").value
    right = completion_factor(F, 1 - s) * epstein_chowla_selberg(F, 1 - s, config, route="series").value
    return abs(left - right)


# --- direct lattice sums -------------------------------------------------------


def _table_for(F: BinaryForm, cutoff: int, table: Optional[RepTable]) -> RepTable:
    if table is None:
        return sieve_binary_form(F.a, F.b, F.c, cutoff)
    if table.descriptor.kind != "binary" or table.descriptor.abc != F.abc:
        raise DomainError(f"table descriptor {table.descriptor} does not match {F}")
    if table.x_max < cutoff:
        raise DomainError(f"table stops at {table.x_max} < cutoff {cutoff}")
    return table


def _corrected_partial(r: np.ndarray, cum_terms: np.ndarray, cum_count: np.ndarray, X: int, s: float, c: float) -> float:
    # sum_{n<=X} r(n) n^-s plus the tail of A(t) ~ c t - 1 beyond X + 1/2
    Xh = X + 0.5
    A = float(cum_count[X])
    tail = s * c * Xh ** (1 - s) / (s - 1) - Xh**-s - A * Xh**-s
    return float(cum_terms[X]) + tail


def epstein_direct(
    F: BinaryForm,
    s: float,
    cutoff: int,
    table: Optional[RepTable] = None,
    tail_correction: bool = True,
) -> EpsteinEvaluation:
    """sum_{n <= cutoff} r_F(n) n^-s, optionally with the smooth tail added.

    With the tail correction, the error estimate is the safety factor times
    the spread of the corrected value over cutoffs cutoff/8 ... cutoff/2; the
    remaining error is the oscillating lattice-point discrepancy, which only
    shrinks as the cutoff grows. Without it the estimate uses the envelope
    r(n) <= C n^0.2 with C fitted on the table.
    """
    s = float(s)
    if s < 1 + 1e-3:
        raise DomainError(f"direct series diverges for s={s} <= 1")
    if cutoff < 1:
        raise DomainError("cutoff must be positive")
    T = _table_for(F, cutoff, table)
    r = np.asarray(T.values[: cutoff + 1], dtype=np.float64).copy()
    r[0] = 0.0
    n = np.arange(cutoff + 1, dtype=np.float64)
    n[0] = 1.0
    terms = r * n**-s
    cum_terms = np.cumsum(terms)
    if not tail_correction:
        value = math.fsum(terms.tolist())
        C = float(np.max(r[1:] / n[1:] ** 0.2)) * SAFETY
        # sum_{n > X} C n^(0.2 - s) <= C X^(1.2 - s) / (s - 1.2) + C X^(0.2 - s)
        if s > 1.2:
            err = C * cutoff ** (1.2 - s) / (s - 1.2) + C * (cutoff + 1) ** (0.2 - s)
        else:
            err = math.inf
        return EpsteinEvaluation(F, s, 1, value, TRUNCATED, err, cutoff)
    cum_count = np.cumsum(r)
    c = 2 * math.pi / math.sqrt(-F.disc)
    value = _corrected_partial(r, cum_terms, cum_count, cutoff, s, c)
    # exact-rounded head sum for the reported value; probes can use cumsum
    value += math.fsum(terms.tolist()) - float(cum_terms[cutoff])
    probes = [cutoff // j for j in (8, 6, 4, 3, 2) if cutoff // j >= 1]
    spread = max((abs(_corrected_partial(r, cum_terms, cum_count, X, s, c) - value) for X in probes), default=abs(value))
    err = SAFETY * spread + 1e-14 * abs(value)
    return EpsteinEvaluation(F, s, 1, value, DIRECT, err, cutoff)


def higher_moment_truncated(F: BinaryForm, k: int, s: float, table: RepTable, cutoff: Optional[int] = None) -> EpsteinEvaluation:
    """Truncated Z_{F,k}(s) = sum_{n <= cutoff} r(n)^k n^-s.

    The tail estimate uses r(n)^k <= C_k n^(k/5) with C_k fitted on the
    table times the safety factor; it is infinite when s <= 1 + k/5.
    """
    if k < 1:
        raise DomainError("moment order must be >= 1")
    s = float(s)
    if s <= 1:
        raise DomainError(f"moment series diverges for s={s} <= 1")
    X = table.x_max if cutoff is None else cutoff
    T = _table_for(F, X, table)
    r = np.asarray(T.values[1 : X + 1], dtype=np.float64)
    n = np.arange(1, X + 1, dtype=np.float64)
    value = math.fsum((r**k * n**-s).tolist())
    e = k / 5
    C = float(np.max(r**k / n**e)) * SAFETY
    if s - e > 1:
        err = C * X ** (1 + e - s) / (s - e - 1) + C * (X + 1) ** (e - s)
    else:
        err = math.inf
    return EpsteinEvaluation(F, s, k, value, TRUNCATED, err, X)


# --- structure and conjecture probes -------------------------------------------


def wilson_denominator(k: int, s: float) -> float:
    """4^k (1 - 2^-s)^(2^(k-1) - 1) (zeta(s) beta(s))^(2^(k-1))."""
    e = 2 ** (k - 1)
    return 4.0**k * (1 - 2.0**-s) ** (e - 1) * (riemann_zeta(s) * eta_beta(s)) ** e


@dataclass(frozen=True)
class WilsonCheck:
    k: int
    s: float
    phi: float
    error_estimate: float
    cutoff: int


def wilson_structure_check(k: int, s: float, table: RepTable, cutoff: Optional[int] = None) -> WilsonCheck:
    """Residual factor phi(s) of sum r(n)^k n^-s for the two-squares table.

    k = 1 uses the tail-corrected direct sum; k >= 2 the truncated moment.
    """
    if k < 1:
        raise DomainError("k must be >= 1")
    if s <= 1:
        raise DomainError("s must exceed 1")
    F = BinaryForm(1, 0, 1)
    if table.descriptor.kind == "squares" and table.descriptor.m == 2:
        from .repcount import FormDescriptor

        table = RepTable(FormDescriptor.binary(1, 0, 1), table.x_max, np.array(table.values))
    X = table.x_max if cutoff is None else cutoff
    if k == 1:
        ev = epstein_direct(F, s, X, table=table)
    else:
        ev = higher_moment_truncated(F, k, s, table, cutoff=X)
    den = wilson_denominator(k, s)
    return WilsonCheck(k, s, ev.value / den, ev.error_estimate / den, X)


@dataclass(frozen=True)
class ProbeRow:
    form: BinaryForm
    k: int
    s: float
    value: float
    hexagonal: float
    difference: float
    method: str
    asserted: bool


def covolume_one_factor(F: BinaryForm) -> float:
    """t with t*F of covolume one: t = 2 / sqrt|D|."""
    return 2 / math.sqrt(-F.disc)


def normalized_moment(
    F: BinaryForm, k: int, s: float, table: Optional[RepTable] = None, config: SpecialFunctionConfig = DEFAULT_CONFIG
) -> EpsteinEvaluation:
    """Z_{tF,k}(s) = t^-s Z_{F,k}(s) for the covolume-one multiple tF."""
    t = covolume_one_factor(F)
    if k == 1:
        ev = epstein_chowla_selberg(F, s, config)
    else:
        if table is None:
            raise DomainError("higher moments need a sieve table")
        ev = higher_moment_truncated(F, k, s, table)
    scale = t**-s
    return EpsteinEvaluation(F, s, k, ev.value * scale, ev.method, ev.error_estimate * scale, ev.cutoff)


def conjecture_probe(
    forms: Sequence[BinaryForm],
    k: int,
    s_grid: Sequence[float],
    x_max: int = 10**6,
    config: SpecialFunctionConfig = DEFAULT_CONFIG,
) -> list[ProbeRow]:
    """Signed differences Z_{Q,k}(s) - Z_{Q_-3,k}(s) at covolume one.

    Rows with k == 1 are marked as asserted (hexagonal minimality is a
    theorem there); k >= 2 rows are exploratory.
    """
    hexa = norm_form(-3)
    tables: dict = {}

    def table(F):
        if k == 1:
            return None
        if F.abc not in tables:
            tables[F.abc] = sieve_binary_form(F.a, F.b, F.c, x_max)
        return tables[F.abc]

    rows = []
    for s in s_grid:
        if k >= 2 and s <= 1:
            raise DomainError(f"moment k={k} is only defined for s > 1, got {s}")
        h = normalized_moment(hexa, k, s, table(hexa), config)
        for F in forms:
            ev = normalized_moment(F, k, s, table(F), config)
            rows.append(ProbeRow(F, k, s, ev.value, h.value, ev.value - h.value, ev.method, k == 1))
    return rows
