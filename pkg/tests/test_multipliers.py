import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spectral_barron import (BoxSpectrum, ConvergenceError, Gaussian, PreconditionError, QuadratureSpec,
                             SingularSystemError, SpectralFunction, apply_multiplier, barron_norm, bessel,
                             derivative, eval_spatial, fractional_inverse, heat, make_grid, resolvent,
                             resolvent_via_semigroup, sample)
from spectral_barron.multipliers import bessel_symbol, derivative_symbol, resolvent_norm_bound

TWO_PI = 2 * math.pi


@pytest.fixture
def gauss(grid_1d):
    return sample(Gaussian(1, 0.5), grid_1d)


@pytest.mark.parametrize("sigma", [0.25, 0.5, 1.0, 2.0])
def test_bessel_isometry(gauss, sigma):
    assert barron_norm(bessel(gauss, sigma)) == pytest.approx(barron_norm(gauss, 2 * sigma), rel=1e-12)


def test_bessel_group(gauss):
    back = bessel(bessel(gauss, 0.7), -0.7)
    np.testing.assert_allclose(back.coeffs, gauss.coeffs, rtol=1e-13)
    assert bessel(gauss, 0) is gauss


def test_bessel_symbol_bound(grid_small):
    sym = bessel_symbol(1.0)
    # <xi>^2 maps B^2 -> B^0 with norm exactly 1
    assert sym.bound(grid_small) == pytest.approx(1.0)
    f = sample(Gaussian(1, 0.5), grid_small)
    np.testing.assert_allclose(apply_multiplier(sym, f).coeffs, bessel(f, 1.0).coeffs, rtol=1e-14)


def test_derivative_against_spatial(grid_1d, gauss):
    d = derivative(gauss, 0)
    x = np.array([-1.0, 0.3, 2.0])
    # d/dx exp(-x^2/2) = -x exp(-x^2/2)
    np.testing.assert_allclose(eval_spatial(d, x).real, -x * np.exp(-x ** 2 / 2), atol=1e-9)
    assert derivative_symbol(0).bound(grid_1d) <= 1.0
    with pytest.raises(PreconditionError):
        derivative(gauss, 1)


def test_resolvent_examples(gauss):
    r = resolvent(gauss, 1.0)
    np.testing.assert_allclose(r.coeffs, bessel(gauss, -1.0).coeffs, rtol=1e-14)
    g = make_grid(1, 4.0, 9)  # contains xi = 1
    f = sample(Gaussian(1, 1.0), g)
    with pytest.raises(SingularSystemError):
        resolvent(f, -1.0)
    # complex lambda is fine
    assert np.all(np.isfinite(resolvent(f, -1.0 + 0.5j).coeffs))


def test_resolvent_norm_family(grid_1d):
    ts = np.logspace(-3, 3, 50)
    vals = [resolvent_norm_bound(grid_1d, t) for t in ts]
    assert max(vals) <= 1.0
    # zero frequency is on the lattice, so the sup is attained
    assert max(vals) == 1.0
    f = sample(BoxSpectrum(1, 3.0, 1.0), grid_1d)
    for t in ts[::7]:
        assert barron_norm(t * resolvent(f, t)) <= resolvent_norm_bound(grid_1d, t) * barron_norm(f) * (1 + 1e-14)
    with pytest.raises(PreconditionError):
        resolvent_norm_bound(grid_1d, 0.0)


def test_heat(gauss):
    # Gaussian(a=1/2) has spectrum sqrt(2 pi) e^{-xi^2/2}; heat(t) widens a to 1/(2 + 4t)
    t = 1.5
    h = heat(gauss, t)
    assert barron_norm(h) == pytest.approx(TWO_PI / math.sqrt(1 + 2 * t), rel=1e-10)
    assert barron_norm(heat(heat(gauss, 0.3), 0.7) - heat(gauss, 1.0)) < 1e-14
    assert heat(gauss, 0) is gauss
    with pytest.raises(PreconditionError):
        heat(gauss, -1.0)


@given(st.floats(1e-3, 1e3), st.integers(0, 1000))
def test_heat_contractive(t, seed):
    g = make_grid(1, 6.0, 41)
    rng = np.random.default_rng(seed)
    f = SpectralFunction(g, rng.standard_normal(g.shape) + 1j * rng.standard_normal(g.shape))
    assert barron_norm(heat(f, t)) <= barron_norm(f)


@pytest.mark.parametrize("lam", [0.1, 1.0, 7.5])
def test_resolvent_via_semigroup(gauss, lam):
    q = resolvent_via_semigroup(gauss, lam)
    ref = resolvent(gauss, lam)
    assert barron_norm(q - ref) <= 1e-8 * barron_norm(ref)


@pytest.mark.parametrize("alpha", [0.1, 0.3, 0.5, 0.7, 0.9])
def test_fractional_inverse(gauss, alpha):
    h = fractional_inverse(gauss, alpha)
    ref = bessel(gauss, -alpha)
    assert barron_norm(h - ref) <= 1e-8 * barron_norm(ref)
    assert barron_norm(h, 2 * alpha) == pytest.approx(barron_norm(gauss), rel=1e-8)


def test_quadrature_failures(gauss):
    with pytest.raises(PreconditionError):
        fractional_inverse(gauss, 1.0)
    with pytest.raises(PreconditionError):
        resolvent_via_semigroup(gauss, -1.0)
    with pytest.raises(ConvergenceError):
        fractional_inverse(gauss, 0.5, QuadratureSpec(step=1e-4, max_nodes=100))


def test_coarse_quadrature_degrades(gauss):
    coarse = fractional_inverse(gauss, 0.5, QuadratureSpec(step=2.0))
    assert barron_norm(coarse - bessel(gauss, -0.5)) > 1e-8 * barron_norm(gauss)
