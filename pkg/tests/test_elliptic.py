import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, optimize

from kdv_reservoir.elliptic import (
    EllipticDivergenceError,
    EllipticDomainError,
    complete_elliptic_k,
    jacobi_sn,
)


def k_quadrature(m):
    """K(m) = int_0^{pi/2} dphi / sqrt(1 - m sin^2 phi)."""
    val, _ = integrate.quad(lambda p: 1.0 / math.sqrt(1.0 - m * math.sin(p) ** 2), 0.0, math.pi / 2,
                            epsabs=1e-14, epsrel=1e-14, limit=200)
    return val


def sn_by_inversion(theta, m):
    """Invert F(phi | m) = theta by quadrature + root finding, then sn = sin(phi)."""
    F = lambda phi: integrate.quad(lambda p: 1.0 / math.sqrt(1.0 - m * math.sin(p) ** 2), 0.0, phi,
                                   epsabs=1e-13, epsrel=1e-13)[0]
    phi = optimize.brentq(lambda p: F(p) - theta, -math.pi, math.pi, xtol=1e-15)
    return math.sin(phi)


def test_sn_zero():
    assert jacobi_sn(0.0, 0.5) == 0.0


def test_sn_circular_case():
    assert jacobi_sn(math.pi / 2, 0.0) == pytest.approx(1.0, abs=1e-15)


def test_sn_hyperbolic_case():
    assert jacobi_sn(1.0, 1.0) == pytest.approx(0.7615941559557649, abs=1e-15)
    assert jacobi_sn(1.0, 1.0) == pytest.approx(math.tanh(1.0), abs=1e-15)


def test_k_values():
    assert complete_elliptic_k(0.0) == pytest.approx(math.pi / 2, abs=1e-15)
    assert complete_elliptic_k(0.5) == pytest.approx(1.8540746773013719, abs=1e-13)
    assert complete_elliptic_k(0.5) == pytest.approx(k_quadrature(0.5), abs=1e-12)


def test_k_diverges_at_one():
    with pytest.raises(EllipticDivergenceError):
        complete_elliptic_k(1.0)


@pytest.mark.parametrize("m", [-0.1, 1.5, float("nan")])
def test_domain_errors(m):
    with pytest.raises(EllipticDomainError):
        jacobi_sn(0.3, m)
    with pytest.raises(EllipticDomainError):
        complete_elliptic_k(m)


def test_nonfinite_argument():
    with pytest.raises(EllipticDomainError):
        jacobi_sn(float("inf"), 0.3)


def test_array_input_keeps_shape():
    th = np.linspace(-3, 3, 7)
    out = jacobi_sn(th, 0.3)
    assert out.shape == th.shape


@pytest.mark.parametrize("theta,m", [(0.4, 0.2), (1.3, 0.7), (-2.0, 0.95), (2.9, 0.5)])
def test_sn_against_quadrature_inversion(theta, m):
    # restricted to |theta| < K so that the amplitude stays in (-pi/2, pi/2)
    theta = math.copysign(min(abs(theta), 0.99 * complete_elliptic_k(m)), theta)
    assert jacobi_sn(theta, m) == pytest.approx(sn_by_inversion(theta, m), abs=1e-11)


@pytest.mark.parametrize("m", [0.1, 0.5, 0.9])
def test_periodicity(m):
    rng = np.random.default_rng(7)
    theta = rng.uniform(-20, 20, 100)
    K = complete_elliptic_k(m)
    np.testing.assert_allclose(jacobi_sn(theta + 4 * K, m), jacobi_sn(theta, m), atol=1e-10, rtol=0)


@settings(max_examples=200, deadline=None)
@given(theta=st.floats(-50, 50), m=st.floats(0.0, 1.0))
def test_bounded_and_pythagorean(theta, m):
    s = jacobi_sn(theta, m)
    assert abs(s) <= 1.0
    # cn from mpmath, sn from us
    cn = float(mpmath.ellipfun("cn", theta, m=m))
    assert s * s + cn * cn == pytest.approx(1.0, abs=1e-9)


def test_small_m_limit():
    th = np.linspace(0, 10, 1001)
    assert np.max(np.abs(jacobi_sn(th, 1e-8) - np.sin(th))) < 1e-6


def test_odd_symmetry():
    th = np.linspace(0.1, 5, 50)
    np.testing.assert_allclose(jacobi_sn(-th, 0.6), -jacobi_sn(th, 0.6), atol=1e-15)
