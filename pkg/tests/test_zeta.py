import math

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from distenergy import lattice, repcount, zeta
from distenergy.errors import DomainError, PoleError

mpmath.mp.dps = 25
Q1, Q3, Q7 = (lattice.norm_form(D) for D in (-1, -3, -7))


def test_closed_form_square_lattice():
    # Z_{x^2+y^2}(s) = 4 zeta(s) beta(s)
    for s in (1.5, 2, 3, 5):
        beta = 4**-mpmath.mpf(s) * (mpmath.zeta(s, mpmath.mpf(1) / 4) - mpmath.zeta(s, mpmath.mpf(3) / 4))
        want = 4 * float(mpmath.zeta(s) * beta)
        assert zeta.epstein_chowla_selberg(Q1, s).value == pytest.approx(want, rel=1e-13)


def test_closed_form_hexagonal():
    # Z_{x^2+xy+y^2}(s) = 6 zeta(s) L(s, chi_-3)
    for s in (1.5, 2, 4):
        L = float(3**-mpmath.mpf(s) * (mpmath.zeta(s, mpmath.mpf(1) / 3) - mpmath.zeta(s, mpmath.mpf(2) / 3)))
        assert zeta.epstein_chowla_selberg(Q3, s).value == pytest.approx(6 * float(mpmath.zeta(s)) * L, rel=1e-13)


def test_reduction_invariance():
    # (2,1,3), (3,1,2) and (2,5,6) are properly equivalent
    for s in (0.7, 2.0):
        a = zeta.epstein_chowla_selberg(lattice.BinaryForm(2, 1, 3), s).value
        b = zeta.epstein_chowla_selberg(lattice.BinaryForm(3, 1, 2), s).value
        c = zeta.epstein_chowla_selberg(lattice.BinaryForm(2, 5, 6), s).value
        assert a == pytest.approx(b, rel=1e-13) and a == pytest.approx(c, rel=1e-13)


@pytest.mark.parametrize("F", [Q1, Q3, Q7])
def test_direct_matches_chowla_selberg(F):
    T = repcount.sieve_binary_form(F.a, F.b, F.c, 200_000)
    for s in (1.5, 2.5):
        d = zeta.epstein_direct(F, s, 200_000, table=T)
        cs = zeta.epstein_chowla_selberg(F, s)
        assert abs(d.value - cs.value) <= d.error_estimate + cs.error_estimate
        assert abs(d.value - cs.value) < 1e-7


def test_truncated_without_tail_bounds_error():
    T = repcount.sieve_binary_form(1, 0, 1, 100_000)
    ev = zeta.epstein_direct(Q1, 3, 100_000, table=T, tail_correction=False)
    cs = zeta.epstein_chowla_selberg(Q1, 3).value
    assert ev.method == zeta.TRUNCATED and 0 < cs - ev.value <= ev.error_estimate


@given(st.sampled_from([Q1, Q3, Q7, lattice.BinaryForm(2, 1, 3)]), st.floats(0.05, 0.45))
@settings(max_examples=20, deadline=None)
def test_functional_equation(F, s):
    assert zeta.functional_eq_residual(F, s) < 1e-10


def test_left_of_half_uses_functional_equation():
    ev = zeta.epstein_chowla_selberg(Q1, 0.25)
    assert ev.method == zeta.FUNCTIONAL_EQUATION
    series = zeta.epstein_chowla_selberg(Q1, 0.25, route="series").value
    assert ev.value == pytest.approx(series, rel=1e-11)


def test_poles_and_domains():
    for s in (1.0, 1 + 1e-8, 0.5, 0.0, -1.0):
        with pytest.raises((PoleError, DomainError)):
            zeta.epstein_chowla_selberg(Q1, s)
    with pytest.raises(DomainError):
        zeta.epstein_direct(Q1, 0.9, 100)
    with pytest.raises(DomainError):
        zeta.epstein_direct(Q1, 2, 1000, table=repcount.sieve_binary_form(1, 0, 1, 10))


def test_wilson_k1_identity():
    T = repcount.sieve_sum_of_squares(2, 200_000)
    for s in (1.5, 2, 3):
        w = zeta.wilson_structure_check(1, s, T)
        assert abs(w.phi - 1) < 1e-6


def test_higher_moment_self_check():
    T = repcount.sieve_binary_form(1, 0, 1, 10**6)
    a = zeta.higher_moment_truncated(Q1, 2, 2, T, cutoff=10**5).value
    b = zeta.higher_moment_truncated(Q1, 2, 2, T).value
    assert abs(a - b) < 1e-3
    assert zeta.higher_moment_truncated(Q1, 5, 1.5, T).error_estimate == math.inf


def test_cassels_probe_square_vs_hexagonal():
    rows = zeta.conjecture_probe([Q1], 1, [0.8, 2])
    assert all(r.difference > 0 and r.asserted for r in rows)
