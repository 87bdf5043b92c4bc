import math

import numpy as np
import pytest
from scipy.integrate import quad
from hypothesis import given
from hypothesis import strategies as st

from spectral_barron import (DeltaKernel, DualElement, Gaussian, GridError, Lorentzian1D, PreconditionError,
                             SingleMode, SpectralFunction, barron_norm, convolve, dual_norm, eval_spatial,
                             interpolation_check, lp_variant_norm, make_grid, multiply, pairing, project, sample,
                             tail_split)
from spectral_barron.spectral import (conjugate_reflection, embed, eval_spatial_tensor, peetre_ratio,
                                      product_bound, sobolev_embedding_bound)

TWO_PI = 2 * math.pi


def mode(grid, xi0, mass):
    return sample(SingleMode(grid.dim, tuple(np.atleast_1d(xi0).astype(float)), mass), grid)


def random_function(grid, rng, width=None):
    width = rng.uniform(0.5, 4.0) if width is None else width
    c = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    return SpectralFunction(grid, c * np.exp(-grid.sq_norm / (2 * width ** 2)))


# --- barron_norm --------------------------------------------------------------------

def test_gaussian_norms(grid_1d):
    f = sample(Gaussian(1, 0.5), grid_1d)
    assert barron_norm(f, 0, 1) == pytest.approx(TWO_PI, abs=1e-8)
    assert barron_norm(f, 2, 1) == pytest.approx(4 * math.pi, abs=1e-6)


def test_single_mode_norm():
    g = make_grid(1, 4.0, 9)
    # <xi0> = 2 needs |xi0| = sqrt(3); use a lattice with that point
    h = math.sqrt(3.0)
    g = make_grid(1, 4 * h, 9)
    f = mode(g, h, 3.0)
    assert barron_norm(f, 2, 1) == pytest.approx(12.0, rel=1e-13)


def test_general_p_and_inf(grid_small, rng):
    f = random_function(grid_small, rng)
    w = grid_small.weight(1.0) * np.abs(f.coeffs)
    assert barron_norm(f, 1.0, 2.0) == pytest.approx(math.sqrt(np.sum(w ** 2) * grid_small.spacing))
    assert barron_norm(f, 1.0, math.inf) == pytest.approx(w.max())
    with pytest.raises(PreconditionError):
        barron_norm(f, -1.0)
    with pytest.raises(PreconditionError):
        barron_norm(f, 0.0, 0.5)


def test_coefficients_validated(grid_small):
    with pytest.raises(PreconditionError):
        SpectralFunction(grid_small, np.full(grid_small.shape, np.nan))
    with pytest.raises(GridError):
        SpectralFunction(grid_small, np.zeros(3))
    f = SpectralFunction.zeros(grid_small)
    with pytest.raises(ValueError):
        f.coeffs[0] = 1.0


@given(st.floats(0, 4), st.floats(0, 4), st.integers(0, 10_000))
def test_monotone_in_s(s, t, seed):
    g = make_grid(1, 6.0, 61)
    f = random_function(g, np.random.default_rng(seed))
    lo, hi = sorted((s, t))
    assert barron_norm(f, lo) <= barron_norm(f, hi) * (1 + 1e-14)


# --- lp_variant_norm ------------------------------------------------------------------

def test_lp_variant_gaussian(grid_1d):
    f = sample(Gaussian(1, 0.5), grid_1d)
    val, tail = lp_variant_norm(f, 0.0, 2.0, spatial_box=12.0, spatial_pts=2401)
    assert val == pytest.approx(math.pi ** 0.25 + TWO_PI, abs=1e-8)
    assert tail < 1e-6


def test_lp_variant_trivial_cases(grid_1d):
    z = SpectralFunction.zeros(grid_1d)
    assert lp_variant_norm(z, 1.0, 1.5, 10.0, 101)[0] == 0.0
    # single mode at the origin: |xi|^s weight vanishes, only the L^p part remains
    g = make_grid(1, 2.0, 41)
    m = mode(g, 0.0, TWO_PI)
    val, _ = lp_variant_norm(m, 1.0, 2.0, spatial_box=1.0, spatial_pts=201, tail_tol=np.inf)
    assert val == pytest.approx(math.sqrt(2.0), rel=1e-12)


def test_lp_variant_rejects_bad_box(grid_1d):
    f = sample(Gaussian(1, 0.5), grid_1d)
    with pytest.raises(PreconditionError, match="truncation"):
        lp_variant_norm(f, 0.0, 1.0, spatial_box=3.0, spatial_pts=301)
    with pytest.raises(PreconditionError, match="half period"):
        lp_variant_norm(f, 0.0, 1.0, spatial_box=100.0, spatial_pts=301)


# --- duality -----------------------------------------------------------------------------

def test_dual_norm_examples(grid_1d):
    assert dual_norm(DualElement.delta(grid_1d)) == pytest.approx(1 / TWO_PI)
    assert dual_norm(DualElement(grid_1d, np.zeros(grid_1d.shape))) == 0.0
    for s in (0.5, 2.0):
        assert dual_norm(DualElement(grid_1d, grid_1d.weight(s), order=s)) == pytest.approx(1.0)


def test_pairing_examples(grid_1d):
    f = sample(Gaussian(1, 0.5), grid_1d)
    assert pairing(DualElement.delta(grid_1d), f) == pytest.approx(1.0, abs=1e-8)
    assert pairing(DualElement(grid_1d, np.zeros(grid_1d.shape)), f) == 0
    g = make_grid(1, 4.0, 9)
    assert pairing(DualElement.delta(g), mode(g, 1.0, 5.0)) == pytest.approx(5.0 / TWO_PI)
    with pytest.raises(GridError):
        pairing(DualElement.delta(g), f)


@given(st.integers(0, 10_000), st.floats(0, 3))
def test_duality_bound(seed, s):
    g = make_grid(1, 6.0, 61)
    rng = np.random.default_rng(seed)
    d = DualElement(g, rng.standard_normal(g.shape) + 1j * rng.standard_normal(g.shape), order=s)
    f = random_function(g, rng)
    assert abs(pairing(d, f)) <= dual_norm(d) * barron_norm(f, s) * (1 + 1e-12)


# --- eval_spatial ---------------------------------------------------------------------------

def test_eval_spatial_examples(grid_1d):
    g = make_grid(1, 3.0, 7)
    m = mode(g, 0.0, TWO_PI)
    for x in (-3.3, 0.0, 17.0):
        assert eval_spatial(m, x) == pytest.approx(1.0)
    f = sample(Gaussian(1, 0.5), grid_1d)
    assert eval_spatial(f, 0.0) == pytest.approx(1.0, abs=1e-8)


def test_eval_spatial_lorentzian():
    # aliasing error of the lattice sum is about h^2 / 12; h = 0.0025 keeps it below 1e-6
    g = make_grid(1, 25.0, 20001)
    f = sample(Lorentzian1D(amplitude=1.0), g)
    assert eval_spatial(f, 1.0).real == pytest.approx(0.5, abs=1e-6)


def test_eval_spatial_shapes_and_oracle(grid_2d, rng):
    f = random_function(grid_2d, rng)
    pts = rng.uniform(-3, 3, size=(5, 2))
    vals = eval_spatial(f, pts)
    assert vals.shape == (5,)
    assert isinstance(eval_spatial(f, pts[0]), complex)
    h = grid_2d.cell_volume
    for p, v in zip(pts, vals):
        ref = np.sum(np.exp(1j * grid_2d.points @ p) * f.coeffs) * h / TWO_PI ** 2
        assert v == pytest.approx(ref, rel=1e-12, abs=1e-14)
    xs, ys = np.linspace(-1, 1, 3), np.linspace(0, 2, 4)
    tens = eval_spatial_tensor(f, [xs, ys])
    assert tens[2, 1] == pytest.approx(eval_spatial(f, [xs[2], ys[1]]), rel=1e-12)


@given(st.integers(0, 10_000))
def test_sup_bound(seed):
    g = make_grid(2, 4.0, 21)
    rng = np.random.default_rng(seed)
    f = random_function(g, rng)
    vals = eval_spatial(f, rng.uniform(-20, 20, size=(32, 2)))
    assert np.max(np.abs(vals)) <= barron_norm(f) / TWO_PI ** 2 * (1 + 1e-12)


# --- multiply --------------------------------------------------------------------------

def _naive_product(f, g):
    """Direct double loop on the doubled lattice (1-D)."""
    N = f.grid.points_per_axis
    out = np.zeros(2 * N - 1, dtype=complex)
    for i in range(N):
        for j in range(N):
            out[i + j] += f.coeffs[i] * g.coeffs[j]
    return out * f.grid.spacing / TWO_PI


def test_multiply_matches_naive_convolution(rng):
    g = make_grid(1, 5.0, 21)
    f, h = random_function(g, rng), random_function(g, rng)
    full, d = multiply(f, h, keep_band=True)
    assert d == 0.0
    np.testing.assert_allclose(full.coeffs, _naive_product(f, h), rtol=1e-12, atol=1e-15)
    proj, disc = multiply(f, h)
    np.testing.assert_array_equal(proj.coeffs, full.coeffs[10:31])
    mask = np.ones(41, bool)
    mask[10:31] = False
    assert disc == pytest.approx(np.sum(np.abs(full.coeffs[mask])) * g.spacing)


def test_multiply_matches_spatial_product(rng):
    g = make_grid(2, 4.0, 17)
    f, h = random_function(g, rng, 1.0), random_function(g, rng, 1.5)
    full, _ = multiply(f, h, keep_band=True)
    x = rng.uniform(-2, 2, size=(4, 2))
    np.testing.assert_allclose(eval_spatial(full, x), eval_spatial(f, x) * eval_spatial(h, x), rtol=1e-10)


def test_multiply_gaussian_saturates(grid_1d):
    f = sample(Gaussian(1, 0.5), grid_1d)
    p, _ = multiply(f, f)
    assert barron_norm(p) == pytest.approx(TWO_PI, abs=1e-6)
    # nonnegative spectra: Young's inequality is an equality before projection
    full, _ = multiply(f, f, keep_band=True)
    assert barron_norm(full) == pytest.approx(product_bound(f, f, 0.0), rel=1e-13)


def test_multiply_lorentzian():
    # lattice error shrinks like h^2; h = 0.005 puts it near 3e-5
    g = make_grid(1, 20.0, 8001)
    f = sample(Lorentzian1D(amplitude=1.0), g)
    p, _ = multiply(f, f)
    assert barron_norm(p) == pytest.approx(TWO_PI, abs=1e-4)


def test_multiply_zero_and_mismatch(grid_small, rng):
    f = random_function(grid_small, rng)
    p, d = multiply(f, SpectralFunction.zeros(grid_small))
    assert barron_norm(p) == 0.0 and d == 0.0
    with pytest.raises(GridError):
        multiply(f, SpectralFunction.zeros(make_grid(1, 10.0, 101)))
    with pytest.raises(TypeError):
        f * f


@given(st.integers(0, 10_000), st.sampled_from([0.0, 0.5, 1.0, 2.0]))
def test_product_bound_random(seed, s):
    g = make_grid(1, 6.0, 41)
    rng = np.random.default_rng(seed)
    f, h = random_function(g, rng), random_function(g, rng)
    full, _ = multiply(f, h, keep_band=True)
    proj, _ = multiply(f, h)
    bnd = product_bound(f, h, s)
    assert barron_norm(proj, s) <= barron_norm(full, s) * (1 + 1e-14)
    assert barron_norm(full, s) <= bnd * (1 + 1e-12)


@given(st.integers(0, 10_000), st.floats(0, 5))
def test_peetre_pointwise(seed, s):
    rng = np.random.default_rng(seed)
    g = make_grid(2, 5.0, 21)
    flat = g.points.reshape(-1, 2)
    i, j = rng.integers(0, len(flat), size=(2, 50))
    assert np.all(peetre_ratio(flat[i], flat[j], s) <= 1 + 1e-13)


# --- project / embed ------------------------------------------------------------------------

def test_project_and_embed(rng):
    g = make_grid(1, 5.0, 21)
    f = random_function(g, rng)
    big = embed(f, g.doubled())
    back, d = project(big, g)
    np.testing.assert_array_equal(back.coeffs, f.coeffs)
    assert d == 0.0
    small = make_grid(1, 2.5, 11)
    p, d = project(f, small)
    for s in (0, 1, 3):
        assert barron_norm(p, s) <= barron_norm(f, s)
    assert barron_norm(p) + d == pytest.approx(barron_norm(f))
    with pytest.raises(GridError, match="nested"):
        project(f, make_grid(1, 5.0, 11))


# --- convolve ------------------------------------------------------------------------------

def test_convolve_examples(grid_1d):
    k = Gaussian(1, 0.5)
    g = make_grid(1, 3.0, 7)
    m = mode(g, 0.0, 2.0)
    c = convolve(m, k)
    assert barron_norm(c) == pytest.approx(2.0 * math.sqrt(TWO_PI))
    assert barron_norm(c) <= barron_norm(m) * k.l1_norm() * (1 + 1e-15)
    np.testing.assert_array_equal(convolve(m, DeltaKernel(1, 1.0)).coeffs, m.coeffs)
    f = sample(Gaussian(1, 0.5), grid_1d)
    ref = quad(lambda x: float(k.spectrum(np.array([x]))) ** 2, -np.inf, np.inf, epsabs=1e-13)[0]
    assert barron_norm(convolve(f, k)) == pytest.approx(ref, abs=1e-8)
    assert barron_norm(convolve(f, k)) <= barron_norm(f) * k.l1_norm()


@given(st.integers(0, 10_000), st.floats(0, 3))
def test_convolve_bound(seed, s):
    g = make_grid(1, 6.0, 41)
    f = random_function(g, np.random.default_rng(seed))
    k = Gaussian(1, 0.3, -1.7)
    assert barron_norm(convolve(f, k), s) <= barron_norm(f, s) * k.l1_norm() * (1 + 1e-12)


# --- tail_split / interpolation -------------------------------------------------------------

def test_tail_split_single_mode():
    h = math.sqrt(3.0)
    g = make_grid(1, 4 * h, 9)
    f = mode(g, h, 1.0)  # <xi0> = 2
    gm, hm = tail_split(f, 3.0)
    assert barron_norm(gm) == 0 and np.array_equal(hm.coeffs, f.coeffs)
    gm, hm = tail_split(f, 1.5)
    assert np.array_equal(gm.coeffs, f.coeffs) and barron_norm(hm) == 0
    with pytest.raises(PreconditionError):
        tail_split(f, 1.0)


def test_tail_split_bounds(grid_1d):
    f = sample(Gaussian(1, 0.5), grid_1d)
    mu = 2.0
    gm, hm = tail_split(f, mu)
    np.testing.assert_array_equal((gm + hm).coeffs, f.coeffs)
    r, s, t = 0.0, 1.0, 2.0
    assert barron_norm(gm, r) <= mu ** (-(s - r)) * barron_norm(f, s)
    assert barron_norm(hm, t) <= mu ** (t - s) * barron_norm(f, s)


def test_interpolation_examples(grid_1d):
    h = math.sqrt(3.0)
    g = make_grid(1, 4 * h, 9)
    lhs, rhs = interpolation_check(mode(g, h, 2.0), 0, 1, 2)
    assert lhs == pytest.approx(rhs, rel=1e-14)
    lhs, rhs = interpolation_check(sample(Gaussian(1, 0.5), grid_1d), 0, 1, 2)
    assert lhs <= rhs and np.isfinite(rhs)
    two = mode(g, 0.0, 1.0) + mode(g, h, 1.0)  # atoms at <xi> = 1 and 2
    lhs, rhs = interpolation_check(two, 0, 1, 2)
    assert lhs < rhs * (1 - 1e-3)
    with pytest.raises(PreconditionError):
        interpolation_check(two, 1, 0, 2)


# --- Sobolev embedding and misc --------------------------------------------------------------

@given(st.integers(0, 10_000))
def test_sobolev_embedding(seed):
    g = make_grid(2, 5.0, 31)
    f = random_function(g, np.random.default_rng(seed))
    lhs, rhs = sobolev_embedding_bound(f, 0.5, 1.6)
    assert lhs <= rhs * (1 + 1e-12)


def test_sobolev_precondition(grid_small):
    with pytest.raises(PreconditionError):
        sobolev_embedding_bound(SpectralFunction.zeros(grid_small), 1.0, 1.2)


def test_conjugate_reflection_is_real_part(rng):
    g = make_grid(1, 5.0, 21)
    f = random_function(g, rng)
    x = np.linspace(-2, 2, 5)
    np.testing.assert_allclose(eval_spatial(conjugate_reflection(f), x), np.conj(eval_spatial(f, x)), atol=1e-14)


def test_arithmetic(grid_small, rng):
    f, h = random_function(grid_small, rng), random_function(grid_small, rng)
    np.testing.assert_allclose((f - h + h).coeffs, f.coeffs, atol=1e-15)
    assert barron_norm(2 * f) == pytest.approx(2 * barron_norm(f))
    assert barron_norm(-f) == barron_norm(f)
