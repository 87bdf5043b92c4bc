"""Functions represented by their Fourier samples on a :class:`FreqGrid`.

All norms are exact weighted sums over the lattice,

    ||f||_{B^s} = sum_k <xi_k>^s |f_hat_k| h^n,

so inequalities that hold for weighted ``L^1`` norms transfer verbatim to
the discrete model.  Operations that create frequency content outside the
lattice (products) compute it on the doubled lattice and report what
projection back discards.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import signal

from .catalog import CatalogFunction
from .errors import GridError, PreconditionError
from .grid import FreqGrid, inner_slices

_DIRECT_CONV_LIMIT = 1 << 22


@dataclass(frozen=True, eq=False)
class SpectralFunction:
    """Complex samples ``f_hat(xi_k)`` on ``grid`` (immutable)."""

    grid: FreqGrid
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex, copy=True)
        if c.shape != self.grid.shape:
            raise GridError(f"coefficient shape {c.shape} does not match grid shape {self.grid.shape}")
        if not np.all(np.isfinite(c)):
            raise PreconditionError("coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zeros(cls, grid: FreqGrid) -> "SpectralFunction":
        return cls(grid, np.zeros(grid.shape, dtype=complex))

    def norm(self, s: float = 0.0, p: float = 1.0) -> float:
        return barron_norm(self, s, p)

    def with_coeffs(self, coeffs) -> "SpectralFunction":
        return SpectralFunction(self.grid, coeffs)

    def _check(self, other):
        if not isinstance(other, SpectralFunction):
            return NotImplemented
        if other.grid != self.grid:
            raise GridError("grid mismatch")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self.with_coeffs(self.coeffs + other.coeffs)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self.with_coeffs(self.coeffs - other.coeffs)

    def __neg__(self):
        return self.with_coeffs(-self.coeffs)

    def __mul__(self, scalar):
        if isinstance(scalar, SpectralFunction):
            raise TypeError("use multiply(f, g) for pointwise products of functions")
        return self.with_coeffs(self.coeffs * scalar)

    __rmul__ = __mul__

    def __repr__(self):
        return f"SpectralFunction(grid={self.grid}, ||f||_B0={self.norm():.6g})"


def _same_grid(f, g):
    if f.grid != g.grid:
        raise GridError(f"grid mismatch: {f.grid} vs {g.grid}")


def _weighted_abs(f: SpectralFunction, s: float, weight_fn=None) -> np.ndarray:
    w = f.grid.weight(s) if weight_fn is None else weight_fn
    return w * np.abs(f.coeffs)


def barron_norm(f: SpectralFunction, s: float = 0.0, p: float = 1.0) -> float:
    """``(sum_k (<xi_k>^s |f_hat_k|)^p h^n)^(1/p)``; ``p = inf`` takes the max.

    For ``p = 1`` this is the spectral Barron norm ``||f||_{B^s}``.
    """
    if s < 0:
        raise PreconditionError(f"order s must be >= 0, got {s}")
    if not p >= 1:
        raise PreconditionError(f"exponent p must lie in [1, inf], got {p}")
    wa = _weighted_abs(f, s)
    if math.isinf(p):
        return float(wa.max())
    if p == 1:
        return float(np.sum(wa) * f.grid.cell_volume)
    return float((np.sum(wa ** p) * f.grid.cell_volume) ** (1.0 / p))


def sobolev_norm(f: SpectralFunction, t: float) -> float:
    """``||f||_{H^t} := ||<xi>^t f_hat||_2`` (no ``(2 pi)^{-n/2}`` factor)."""
    return barron_norm(f, t, 2.0)


def sobolev_embedding_bound(f: SpectralFunction, s: float, t: float) -> tuple[float, float]:
    """Return ``(||f||_{B^s}, ||<xi>^{s-t}||_2 ||f||_{H^t})``; lhs <= rhs by Cauchy-Schwarz."""
    if not t > s + f.grid.dim / 2:
        raise PreconditionError(f"need t > s + n/2, got s={s}, t={t}, n={f.grid.dim}")
    g = f.grid
    weight_l2 = math.sqrt(float(np.sum(g.weight(2 * (s - t))) * g.cell_volume))
    return barron_norm(f, s), weight_l2 * sobolev_norm(f, t)


def lp_variant_norm(f: SpectralFunction, s: float, p: float, spatial_box: float,
                    spatial_pts: int, tail_tol: float = 1e-6) -> tuple[float, float]:
    """Norm ``||f||_{L^p} + || |xi|^s f_hat ||_1`` with the ``L^p`` part by spatial quadrature.

    The ``L^p`` integral runs over the cube ``[-spatial_box, spatial_box]^n``
    with the trapezoid rule on ``spatial_pts`` points per axis.  The spatial
    truncation estimate is the ``|f|^p`` mass in the outermost tenth of the
    cube; exceeding ``tail_tol`` is an error.

    Returns
    -------
    value, tail_estimate : float
    """
    if s < 0:
        raise PreconditionError(f"order s must be >= 0, got {s}")
    if not 1 <= p <= 2:
        raise PreconditionError(f"p must lie in [1, 2], got {p}")
    g = f.grid
    if spatial_box >= math.pi / g.spacing:
        raise PreconditionError(
            f"spatial_box {spatial_box} exceeds the half period pi/h = {math.pi / g.spacing:.6g} "
            "of the lattice model"
        )
    x = np.linspace(-spatial_box, spatial_box, spatial_pts)
    dx = x[1] - x[0]
    vals = np.abs(eval_spatial_tensor(f, [x] * g.dim)) ** p
    w1 = np.full(spatial_pts, dx)
    w1[0] = w1[-1] = dx / 2
    weights = w1
    shell = np.abs(x) > 0.9 * spatial_box
    shell_mask = shell
    for _ in range(g.dim - 1):
        weights = np.multiply.outer(weights, w1)
        shell_mask = np.logical_or.outer(shell_mask, shell)
    integral = float(np.sum(vals * weights))
    tail = float(np.sum((vals * weights)[shell_mask]))
    if tail > tail_tol:
        raise PreconditionError(
            f"spatial truncation estimate {tail:.3e} exceeds tolerance {tail_tol:.1e}; enlarge spatial_box",
            tail=tail,
        )
    absxi = np.sqrt(g.sq_norm)
    if s == 0:
        wxi = np.ones(g.shape)
    else:
        wxi = absxi ** s
    spectral_part = float(np.sum(wxi * np.abs(f.coeffs)) * g.cell_volume)
    return integral ** (1.0 / p) + spectral_part, tail


# --- duality -----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DualElement:
    """Samples of ``F^{-1} f`` on a lattice for a member ``f`` of ``B~^{-s}``."""

    grid: FreqGrid
    values: np.ndarray
    order: float = 0.0

    def __post_init__(self):
        v = np.array(self.values, dtype=complex, copy=True)
        if v.shape != self.grid.shape:
            raise GridError(f"value shape {v.shape} does not match grid shape {self.grid.shape}")
        if not np.all(np.isfinite(v)):
            raise PreconditionError("dual values must be finite")
        if self.order < 0:
            raise PreconditionError("order must be >= 0")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def delta(cls, grid: FreqGrid, order: float = 0.0) -> "DualElement":
        """The Dirac delta at the origin: ``F^{-1} delta == (2 pi)^-n``."""
        return cls(grid, np.full(grid.shape, (2 * np.pi) ** (-grid.dim), dtype=complex), order)


def dual_norm(g: DualElement) -> float:
    """``max_k <xi_k>^{-s} |values_k|``."""
    return float(np.max(g.grid.weight(-g.order) * np.abs(g.values)))


def pairing(g: DualElement, phi: SpectralFunction) -> complex:
    """``sum_k [<xi_k>^{-s} values_k] [<xi_k>^s phi_hat_k] h^n``."""
    if g.grid != phi.grid:
        raise GridError("grid mismatch between dual element and test function")
    w = g.grid.weight(g.order)
    left = g.values / w
    right = w * phi.coeffs
    return complex(np.sum(left * right) * g.grid.cell_volume)


# --- spatial evaluation ---------------------------------------------------------

def eval_spatial(f: SpectralFunction, x) -> complex | np.ndarray:
    """Inverse transform ``(2 pi)^-n sum_k exp(i x.xi_k) f_hat_k h^n`` at arbitrary points.

    ``x`` may be a single point of shape ``(n,)`` (scalar result) or an array
    of points of shape ``(m, n)``.
    """
    g = f.grid
    x = np.asarray(x, dtype=float)
    if g.dim == 1:
        single = x.ndim == 0 or x.shape == (1,)
        pts = x.reshape(-1, 1)
    else:
        single = x.ndim == 1
        pts = np.atleast_2d(x)
    if pts.shape[-1] != g.dim:
        raise GridError(f"points must have {g.dim} coordinates")
    scale = (2 * np.pi) ** (-g.dim) * g.cell_volume
    out = np.empty(len(pts), dtype=complex)
    chunk = max(1, (1 << 22) // g.size)
    for start in range(0, len(pts), chunk):
        p = pts[start:start + chunk]
        # contract one axis at a time: (m, N, ..., N) -> (m, N, ...) -> ... -> (m,)
        e0 = np.exp(1j * np.multiply.outer(p[:, 0], g.axis))
        acc = e0 @ f.coeffs.reshape(g.points_per_axis, -1)
        acc = acc.reshape((len(p),) + g.shape[1:])
        for d in range(1, g.dim):
            e = np.exp(1j * np.multiply.outer(p[:, d], g.axis))
            acc = np.einsum("mj,mj...->m...", e, acc)
        out[start:start + chunk] = acc
    out *= scale
    return complex(out[0]) if single else out


def eval_spatial_tensor(f: SpectralFunction, axes) -> np.ndarray:
    """Evaluate ``f`` on the tensor grid ``axes[0] x ... x axes[n-1]``."""
    g = f.grid
    if len(axes) != g.dim:
        raise GridError(f"need {g.dim} spatial axes")
    acc = f.coeffs
    for d, xs in enumerate(axes):
        e = np.exp(1j * np.multiply.outer(np.asarray(xs, dtype=float), g.axis))
        acc = np.tensordot(e, acc, axes=([1], [d]))
        acc = np.moveaxis(acc, 0, d)
    return acc * ((2 * np.pi) ** (-g.dim) * g.cell_volume)


# --- products, convolutions and truncation ---------------------------------------

def _full_convolution(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    method = "direct" if a.size * b.size <= _DIRECT_CONV_LIMIT else "fft"
    return signal.convolve(a, b, mode="full", method=method)


def project(f: SpectralFunction, target: FreqGrid) -> tuple[SpectralFunction, float]:
    """Restrict ``f`` to the cells of ``target``.

    ``target`` must share the spacing of ``f.grid`` and have a cutoff no
    larger than it.  Returns the restricted function and the ``B^0`` mass of
    the dropped cells.  Restriction never increases any ``B^s`` norm.
    """
    src = f.grid
    sl = inner_slices(src, target)
    kept = f.coeffs[sl]
    total = np.sum(np.abs(f.coeffs))
    discarded = max(0.0, float((total - np.sum(np.abs(kept))) * src.cell_volume))
    if discarded > 0:
        mask = np.ones(src.shape, dtype=bool)
        mask[sl] = False
        discarded = float(np.sum(np.abs(f.coeffs[mask])) * src.cell_volume)
    return SpectralFunction(target, kept), discarded


def embed(f: SpectralFunction, target: FreqGrid) -> SpectralFunction:
    """Zero-pad ``f`` onto a larger lattice with the same spacing."""
    out = np.zeros(target.shape, dtype=complex)
    out[inner_slices(target, f.grid)] = f.coeffs
    return SpectralFunction(target, out)


def multiply(f: SpectralFunction, g: SpectralFunction, keep_band: bool = False):
    """Pointwise product ``f g`` through its spectrum.

    ``(fg)^(xi_k) = (2 pi)^-n sum_j f_hat(xi_k - xi_j) g_hat(xi_j) h^n`` is
    evaluated on the doubled lattice, where it is exact.  Unless
    ``keep_band`` is set, the result is projected back onto ``f.grid``.

    Returns
    -------
    product : SpectralFunction
    discarded_mass : float
        ``B^0`` mass removed by the projection (0 with ``keep_band``).
    """
    _same_grid(f, g)
    grid = f.grid
    band = grid.doubled()
    if not np.any(f.coeffs) or not np.any(g.coeffs):
        full = SpectralFunction.zeros(band)
    else:
        conv = _full_convolution(f.coeffs, g.coeffs)
        full = SpectralFunction(band, conv * ((2 * np.pi) ** (-grid.dim) * grid.cell_volume))
    if keep_band:
        return full, 0.0
    return project(full, grid)


def product_bound(f: SpectralFunction, g: SpectralFunction, s: float) -> float:
    """Right-hand side ``2^{s/2} (2 pi)^-n ||f||_{B^s} ||g||_{B^s}`` of the product estimate."""
    return 2 ** (s / 2) * (2 * np.pi) ** (-f.grid.dim) * barron_norm(f, s) * barron_norm(g, s)


def peetre_ratio(xi: np.ndarray, eta: np.ndarray, s: float) -> np.ndarray:
    """``<xi>^s / (2^{s/2} <xi - eta>^s <eta>^s)``, at most 1 by Peetre's inequality."""
    def br(v):
        return np.sqrt(1.0 + np.sum(np.asarray(v) ** 2, axis=-1))
    return br(xi) ** s / (2 ** (s / 2) * br(np.asarray(xi) - eta) ** s * br(eta) ** s)


def convolve(f: SpectralFunction, kernel: CatalogFunction) -> SpectralFunction:
    """``f * kernel`` via ``f_hat * kernel_hat``; ``||f*k||_{B^s} <= ||f||_{B^s} ||k||_1``."""
    if kernel.dim != f.grid.dim:
        raise GridError("kernel dimension does not match the grid")
    return f.with_coeffs(f.coeffs * kernel.sample(f.grid))


def tail_split(f: SpectralFunction, mu: float) -> tuple[SpectralFunction, SpectralFunction]:
    """Split ``f = g + h`` with ``g`` carrying ``<xi> > mu`` and ``h`` carrying ``<xi> <= mu``."""
    if not mu > 1:
        raise PreconditionError(f"split level mu must exceed 1, got {mu}")
    high = f.grid.bracket > mu
    g = np.where(high, f.coeffs, 0)
    h = np.where(high, 0, f.coeffs)
    return f.with_coeffs(g), f.with_coeffs(h)


def interpolation_check(f: SpectralFunction, r: float, s: float, t: float) -> tuple[float, float]:
    """``(||f||_{B^s}, ||f||_{B^r}^alpha ||f||_{B^t}^(1-alpha))`` with ``alpha = (t-s)/(t-r)``.

    Hölder's inequality gives lhs <= rhs.
    """
    if not (0 <= r <= s <= t):
        raise PreconditionError(f"need 0 <= r <= s <= t, got {(r, s, t)}")
    lhs = barron_norm(f, s)
    if t == r:
        return lhs, barron_norm(f, r)
    alpha = (t - s) / (t - r)
    return lhs, barron_norm(f, r) ** alpha * barron_norm(f, t) ** (1 - alpha)


def conjugate_reflection(f: SpectralFunction) -> SpectralFunction:
    """Spectrum of ``conj(f)``: ``xi -> conj(f_hat(-xi))``."""
    return f.with_coeffs(np.conj(f.coeffs[(slice(None, None, -1),) * f.grid.dim]))
