import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from legbench.amplitudes import (
    CutoffPrime,
    CutoffTransformAmplitude,
    HermiteGaussianSum,
    HermiteTerm,
    alpha,
    alpha_prime,
    schwartz_decay_report,
)
from legbench.quadrature import gl_nodes


def numerical_transform(a, Z, radius=None, panels=200, order=16):
    """Reference quadrature for F[a](Z) = int e^{i zeta Z} a(zeta) d zeta."""
    R = radius or a.support_radius(1e-18)
    nodes, weights = gl_nodes(-R, R, panels, order)
    Z = np.atleast_1d(np.asarray(Z, dtype=float))
    return np.exp(1j * np.outer(Z, nodes)) @ (a(nodes) * weights)


def test_gaussian_transform_closed_form():
    a = HermiteGaussianSum.gaussian(width=1.0)
    Z = np.linspace(-4, 4, 9)
    # int e^{i zeta Z} e^{-zeta^2} dzeta = sqrt(pi) e^{-Z^2/4}
    np.testing.assert_allclose(
        a.fourier_transform()(Z), np.sqrt(np.pi) * np.exp(-(Z**2) / 4), atol=1e-14
    )


term_strategy = st.builds(
    HermiteTerm,
    coeff=st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False),
    hermite=st.integers(0, 4),
    center=st.floats(-2, 2),
    width=st.floats(0.3, 3),
    freq=st.floats(-2, 2),
)


@given(st.lists(term_strategy, min_size=1, max_size=3))
@settings(max_examples=25, deadline=None)
def test_transform_matches_quadrature(terms):
    a = HermiteGaussianSum(terms)
    Z = np.array([-1.7, 0.0, 0.4, 2.3])
    ref = numerical_transform(a, Z)
    np.testing.assert_allclose(a.fourier_transform()(Z), ref, atol=1e-9)


@given(st.lists(term_strategy, min_size=1, max_size=3))
@settings(max_examples=25, deadline=None)
def test_double_transform_is_reflection(terms):
    a = HermiteGaussianSum(terms)
    w = np.array([-1.3, 0.2, 1.9])
    double = a.fourier_transform().fourier_transform()(w)
    np.testing.assert_allclose(double, 2 * np.pi * a(-w), atol=1e-9)


def test_transform_linearity_and_translation():
    t1 = HermiteTerm(1.0, 1, 0.3, 0.8, 0.0)
    t2 = HermiteTerm(0.5j, 0, -0.2, 1.1, 0.7)
    a, b = HermiteGaussianSum([t1]), HermiteGaussianSum([t2])
    Z = np.linspace(-3, 3, 7)
    both = (a + b).fourier_transform()(Z)
    np.testing.assert_allclose(
        both, a.fourier_transform()(Z) + b.fourier_transform()(Z), atol=1e-13
    )
    # shifting the center by c multiplies the transform by e^{i c Z}
    c = 0.9
    shifted = HermiteGaussianSum([HermiteTerm(1.0, 1, 0.3 + c, 0.8, 0.0)])
    np.testing.assert_allclose(
        shifted.fourier_transform()(Z),
        np.exp(1j * c * Z) * a.fourier_transform()(Z),
        atol=1e-12,
    )


def test_plancherel():
    a = HermiteGaussianSum([(1.0, 2, 0.4, 0.9, 0.6), (0.3 - 0.2j, 0, -0.5, 1.2, 0.0)])
    R = a.support_radius(1e-20)
    nodes, weights = gl_nodes(-R, R, 400, 16)
    lhs = np.sum(np.abs(a(nodes)) ** 2 * weights)
    ft = a.fourier_transform()
    R2 = ft.support_radius(1e-20)
    nodes2, weights2 = gl_nodes(-R2, R2, 400, 16)
    rhs = np.sum(np.abs(ft(nodes2)) ** 2 * weights2) / (2 * np.pi)
    assert lhs == pytest.approx(rhs, rel=1e-8)


def test_integral_over_line():
    a = HermiteGaussianSum.gaussian(width=1.3)
    assert a.integral_over_line() == pytest.approx(1.3 * np.sqrt(np.pi))
    odd = HermiteGaussianSum([(1.0, 1, 0.0, 1.0, 0.0)])
    assert abs(odd.integral_over_line()) < 1e-14


def test_integrate_to():
    a = HermiteGaussianSum.gaussian()
    z = np.array([-8.0, 0.0, 8.0])
    cum = a.integrate_to(z)
    assert abs(cum[0]) < 1e-16
    assert cum[1] == pytest.approx(np.sqrt(np.pi) / 2, rel=1e-12)
    assert cum[2] == pytest.approx(np.sqrt(np.pi), rel=1e-12)


def test_reflect():
    a = HermiteGaussianSum([(1.0, 1, 0.5, 0.8, 0.3)])
    z = np.linspace(-2, 2, 9)
    np.testing.assert_allclose(a.reflect()(z), a(-z), atol=1e-14)


def test_term_validation():
    with pytest.raises(ValueError):
        HermiteTerm(1.0, width=0.0)
    with pytest.raises(ValueError):
        HermiteTerm(1.0, hermite=-1)


# ----------------------------------------------------------------------
def test_alpha_endpoints_and_monotonicity():
    assert alpha(-1.0) == 0.0 and alpha(0.0) == 0.0
    assert alpha(1.0) == 1.0 and alpha(5.0) == 1.0
    assert alpha(0.5) == pytest.approx(0.5)
    t = np.linspace(-0.5, 1.5, 401)
    assert np.all(np.diff(alpha(t)) >= 0)


def test_alpha_prime_is_derivative_with_unit_mass():
    t = np.linspace(0.05, 0.95, 51)
    h = 1e-6
    fd = (alpha(t + h) - alpha(t - h)) / (2 * h)
    np.testing.assert_allclose(alpha_prime(t), fd, atol=1e-8)
    nodes, weights = gl_nodes(0.0, 1.0, 64, 16)
    assert np.sum(alpha_prime(nodes) * weights) == pytest.approx(1.0, abs=1e-13)


def test_cutoff_transform_amplitude():
    amp = CutoffTransformAmplitude()
    assert isinstance(amp.fourier_transform(), CutoffPrime)
    # its forward transform must reproduce alpha' on the nose
    Z = np.array([0.2, 0.5, 0.8])
    R = amp.support_radius(1e-14)
    nodes, weights = gl_nodes(-R, R, 4000, 16)
    vals = np.exp(1j * np.outer(Z, nodes)) @ (amp(nodes) * weights)
    np.testing.assert_allclose(vals, alpha_prime(Z), atol=1e-6)
    # cumulative of the transform is exactly alpha
    np.testing.assert_allclose(
        amp.fourier_transform().integrate_to(Z), alpha(Z), atol=1e-15
    )


# ----------------------------------------------------------------------
def test_decay_report_gaussian_passes_all_orders():
    a = HermiteGaussianSum.gaussian()
    report = schwartz_decay_report(a, n_max=6)
    assert all(r.passes for r in report)


def test_decay_report_lorentzian():
    f = lambda Z: 1.0 / (1.0 + Z**2)
    report = schwartz_decay_report(f, n_max=3)
    assert report[0].passes and report[1].passes
    assert not report[3].passes


def test_decay_report_cutoff_fails():
    report = schwartz_decay_report(lambda Z: alpha(Z) + 0j, n_max=1)
    assert not report[1].passes
