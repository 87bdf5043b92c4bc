import math

import numpy as np
import pytest

from spectral_barron import (BoxSpectrum, Gaussian, PreconditionError, central_slice_check, make_grid,
                             radon_direct, radon_isometry)
from spectral_barron.radon import analytic_slices, directions, polar_norm, sinogram_spectrum


@pytest.fixture(scope="module")
def grid():
    return make_grid(2, 12.0, 481)


def test_directions():
    om = directions(8)
    np.testing.assert_allclose(np.linalg.norm(om, axis=1), 1.0)
    np.testing.assert_allclose(om[4], -om[0], atol=1e-15)
    with pytest.raises(PreconditionError):
        directions(7)


def test_line_integrals_of_gaussian():
    # isotropic exp(-a|x|^2): every line integral is sqrt(pi/a) exp(-a s^2)
    a = 0.5
    sino = radon_direct(Gaussian(2, a), angles=8)
    ref = math.sqrt(math.pi / a) * np.exp(-a * sino.offsets ** 2)
    np.testing.assert_allclose(sino.values, np.broadcast_to(ref, sino.values.shape), atol=1e-13)
    assert sino.symmetry_defect() < 1e-13


def test_line_integrals_anisotropic():
    fn = Gaussian(2, (0.5, 2.0))
    sino = radon_direct(fn, angles=4, offsets=np.array([0.0, 1.0]))
    # omega = e_1: integrate over x_2, giving sqrt(pi/2) exp(-0.5 s^2)
    np.testing.assert_allclose(sino.values[0], math.sqrt(math.pi / 2) * np.exp(-0.5 * np.array([0.0, 1.0])),
                               atol=1e-13)


def test_central_slice(grid):
    res = central_slice_check(Gaussian(2, 0.5), grid, angles=16)
    assert res["max_rel_error"] < 1e-12
    res = central_slice_check(Gaussian(2, (0.5, 1.5)), grid, angles=16)
    assert res["max_rel_error"] < 1e-12


def test_polar_norm_of_analytic_slices():
    # isotropic Gaussian: the polar form reduces to 2 pi int_0^inf t g(t) dt = 4 pi^2.
    # |t| has a kink at t = 0, so the lattice sum converges like h^2.
    fn = Gaussian(2, 0.5)
    errs = []
    for N in (241, 481, 961):
        g = make_grid(2, 12.0, N)
        spec = analytic_slices(fn, 64, g.axis)
        errs.append(abs(polar_norm(spec, 0.0, g.spacing) - 4 * math.pi ** 2))
    assert errs[1] < 5e-4 * 4 * math.pi ** 2
    for a, b in zip(errs, errs[1:]):
        assert b / a == pytest.approx(0.25, abs=0.01)


@pytest.mark.parametrize("s", [0.0, 1.0])
def test_isometry_gaussian(grid, s):
    res = radon_isometry(Gaussian(2, 0.5), s, grid, angles=256)
    assert res["gap"] <= 1e-3
    assert res["symmetry_defect"] < 1e-10


def test_isometry_box_analytic(grid):
    # the box edge sits off the lattice so the Cartesian sum and the polar sum see the same disc
    res = radon_isometry(BoxSpectrum(2, 5.025, 1.0), 0.0, grid, angles=256, source="analytic")
    assert res["gap"] <= 1e-2
    assert res["lhs"] == pytest.approx(math.pi * 5.025 ** 2, rel=1e-2)


def test_rejections(grid):
    with pytest.raises(PreconditionError):
        radon_direct(BoxSpectrum(2, 5.0, 1.0))
    with pytest.raises(PreconditionError):
        radon_direct(Gaussian(1, 0.5))
    with pytest.raises(PreconditionError):
        radon_isometry(Gaussian(2, 0.5), 0.0, grid, source="bogus")
    with pytest.raises(PreconditionError):
        radon_isometry(Gaussian(2, 0.5), -1.0, grid)
