import math

import mpmath
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from distenergy import special
from distenergy.errors import DomainError, PoleError

mpmath.mp.dps = 30


@given(st.floats(0.05, 40))
@settings(max_examples=80, deadline=None)
def test_gamma(s):
    assert special.gamma_fn(s) == pytest.approx(float(mpmath.gamma(s)), rel=1e-13)


# subnormal s is excluded: mpmath itself misreports zeta there (-0.5 + 7e-12 at s = -2e-309)
@given(st.floats(-12, 30, allow_subnormal=False).filter(lambda s: abs(s - 1) > 1e-3))
@settings(max_examples=80, deadline=None)
def test_zeta(s):
    want = float(mpmath.zeta(s))
    assert special.riemann_zeta(s) == pytest.approx(want, rel=1e-12, abs=1e-14)


@given(st.floats(0.1, 30))
@settings(max_examples=60, deadline=None)
def test_beta(s):
    want = float(mpmath.nsum(lambda n: (-1) ** n * (2 * n + 1) ** -s, [0, mpmath.inf], method="alternating"))
    assert special.eta_beta(s) == pytest.approx(want, rel=1e-13)


@given(st.floats(0, 6), st.floats(0.05, 60))
@settings(max_examples=80, deadline=None)
def test_bessel_k(nu, z):
    want = float(mpmath.besselk(nu, z))
    assert special.bessel_k(nu, z) == pytest.approx(want, rel=1e-12, abs=1e-300)


def test_k0_at_one_independent_quadrature():
    quad, _ = integrate.quad(lambda t: math.exp(-math.cosh(t)), 0, 8, epsabs=1e-14, epsrel=1e-14, limit=200)
    assert special.bessel_k(0, 1.0) == pytest.approx(quad, rel=1e-13)
    assert special.bessel_k(0, 1.0) == pytest.approx(0.42102443824070834, rel=1e-14)


def test_closed_forms():
    assert special.riemann_zeta(2) == pytest.approx(math.pi**2 / 6, rel=1e-15)
    assert special.eta_beta(1) == pytest.approx(math.pi / 4, rel=1e-15)
    # K_{1/2}(z) = sqrt(pi / (2z)) e^-z
    assert special.bessel_k(0.5, 3.0) == pytest.approx(math.sqrt(math.pi / 6) * math.exp(-3), rel=1e-13)
    assert special.divisor_sigma(12, 1) == 28


def test_domain_errors():
    with pytest.raises(PoleError):
        special.riemann_zeta(1.0)
    with pytest.raises(PoleError):
        special.gamma_fn(-2)
    with pytest.raises(DomainError):
        special.bessel_k(0, 0)
    with pytest.raises(DomainError):
        special.eta_beta(-1)
