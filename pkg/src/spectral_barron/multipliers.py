"""Fourier multipliers: Bessel potentials, resolvents and the heat semigroup of ``-Delta``.

A multiplier with symbol ``a`` acts cellwise, ``h_hat_k = a(xi_k) f_hat_k``,
so its ``B^t -> B^s`` operator norm on the lattice is exactly
``max_k <xi_k>^{s-t} |a(xi_k)|``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConvergenceError, PreconditionError, SingularSystemError
from .grid import FreqGrid
from .spectral import SpectralFunction


@dataclass(frozen=True)
class MultiplierSymbol:
    """Symbol ``a(xi)`` with declared orders ``B^{t_in} -> B^{s_out}``.

    ``evaluator`` maps an array of points (``shape + (dim,)``) to complex
    values of shape ``shape``.
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    t_in: float = 0.0
    s_out: float = 0.0
    name: str = "symbol"

    def values(self, grid: FreqGrid) -> np.ndarray:
        return np.broadcast_to(np.asarray(self.evaluator(grid.points), dtype=complex), grid.shape)

    def bound(self, grid: FreqGrid) -> float:
        """``M = max_k <xi_k>^{s_out - t_in} |a(xi_k)|``."""
        m = float(np.max(grid.weight(self.s_out - self.t_in) * np.abs(self.values(grid))))
        if not math.isfinite(m):
            raise PreconditionError(f"symbol {self.name} is unbounded on the lattice")
        return m


def apply_multiplier(sym: MultiplierSymbol, f: SpectralFunction) -> SpectralFunction:
    return f.with_coeffs(sym.values(f.grid) * f.coeffs)


def bessel_symbol(sigma: float) -> MultiplierSymbol:
    return MultiplierSymbol(lambda xi: (1.0 + np.sum(xi ** 2, axis=-1)) ** sigma,
                            t_in=max(2 * sigma, 0.0), s_out=max(-2 * sigma, 0.0), name=f"bessel({sigma})")


def derivative_symbol(axis: int) -> MultiplierSymbol:
    """Symbol ``i xi_axis`` of ``d/dx_axis`` (order one)."""
    return MultiplierSymbol(lambda xi: 1j * xi[..., axis], t_in=1.0, s_out=0.0, name=f"d/dx{axis}")


def bessel(f: SpectralFunction, sigma: float) -> SpectralFunction:
    """``(1 - Delta)^sigma f``, symbol ``<xi>^{2 sigma}``.

    Maps ``B^{s + 2 sigma}`` isometrically onto ``B^s``.
    """
    if sigma == 0:
        return f
    return f.with_coeffs(f.grid.weight(2 * sigma) * f.coeffs)


def derivative(f: SpectralFunction, axis: int) -> SpectralFunction:
    if not 0 <= axis < f.grid.dim:
        raise PreconditionError(f"axis {axis} out of range for dim {f.grid.dim}")
    return f.with_coeffs(1j * f.grid.points[..., axis] * f.coeffs)


def resolvent(f: SpectralFunction, lam: complex) -> SpectralFunction:
    """``(lam - Delta)^{-1} f``, symbol ``1 / (lam + |xi|^2)``."""
    denom = lam + f.grid.sq_norm
    if np.any(denom == 0):
        k = tuple(int(i) for i in np.argwhere(denom == 0)[0])
        raise SingularSystemError(f"singular resolvent symbol: lam + |xi|^2 = 0 at lattice index {k}", lam=lam)
    return f.with_coeffs(f.coeffs / denom)


def resolvent_norm_bound(grid: FreqGrid, t: float) -> float:
    """Induced ``B^0`` norm of ``t (t - Delta)^{-1}``: ``max_k t / (t + |xi_k|^2)``."""
    if not t > 0:
        raise PreconditionError("t must be positive")
    return float(np.max(t / (t + grid.sq_norm)))


def heat(f: SpectralFunction, t: float) -> SpectralFunction:
    """Heat semigroup ``exp(t Delta) f``, symbol ``exp(-t |xi|^2)``."""
    if t < 0:
        raise PreconditionError(f"heat time must be >= 0, got {t}")
    if t == 0:
        return f
    return f.with_coeffs(np.exp(-t * f.grid.sq_norm) * f.coeffs)


# --- quadrature representations -------------------------------------------------

@dataclass(frozen=True)
class QuadratureSpec:
    """Trapezoid rule in ``u = log(variable)`` on a truncated interval.

    The window and step are derived from ``tol`` and the spectrum range of
    the operator; ``step`` / ``half_width`` override the automatic choice.
    """

    tol: float = 1e-10
    step: float | None = None
    half_width: float | None = None
    max_nodes: int = 20000


def _trapezoid_nodes(lo: float, hi: float, step: float, max_nodes: int) -> np.ndarray:
    n = int(math.ceil((hi - lo) / step)) + 1
    if n > max_nodes:
        raise ConvergenceError(f"quadrature needs {n} nodes (> {max_nodes})", nodes=n)
    return np.linspace(lo, hi, n)


def _log_sum(u: np.ndarray, integrand) -> np.ndarray:
    """Trapezoid sum in ``u`` of ``integrand(u_i)`` (arrays over the lattice), fixed order."""
    du = u[1] - u[0]
    acc = 0.5 * (integrand(u[0]) + integrand(u[-1]))
    for ui in u[1:-1]:
        acc = acc + integrand(ui)
    return acc * du


def resolvent_via_semigroup(f: SpectralFunction, lam: float, quad: QuadratureSpec = QuadratureSpec()) -> SpectralFunction:
    """``(lam - Delta)^{-1} f = int_0^inf exp(-lam t) exp(t Delta) f dt`` by quadrature.

    With ``t = e^u`` the integrand ``exp(u - (lam + |xi|^2) e^u)`` decays
    like ``e^u`` as ``u -> -inf`` and double-exponentially as ``u -> inf``.
    """
    if not lam > 0:
        raise PreconditionError(f"lam must be positive, got {lam}")
    rate = lam + f.grid.sq_norm
    rmin, rmax = float(rate.min()), float(rate.max())
    # left tail: int_{-inf}^{lo} e^u r du = r e^lo must be below tol * (value 1 / r)
    lo = math.log(quad.tol) - 2 * math.log(rmax) if quad.half_width is None else -quad.half_width
    # right tail: exp(-r e^hi) negligible for the smallest rate
    hi = math.log(max(1.0, -math.log(quad.tol * 1e-3)) / rmin) if quad.half_width is None else quad.half_width
    step = quad.step or _auto_step(quad.tol)
    u = _trapezoid_nodes(lo, hi, step, quad.max_nodes)
    weights = _log_sum(u, lambda ui: np.exp(ui - rate * math.exp(ui)))
    return f.with_coeffs(weights * f.coeffs)


def _auto_step(tol: float) -> float:
    # trapezoid error for functions analytic in a strip of width d decays like exp(-2 pi d / step);
    # both integrands here are analytic for |Im u| < pi/2
    return min(0.5, math.pi ** 2 / math.log(1.0 / tol) * 0.9)


def fractional_inverse(f: SpectralFunction, alpha: float, quad: QuadratureSpec = QuadratureSpec()) -> SpectralFunction:
    """``(1 - Delta)^{-alpha} f`` through the Balakrishnan integral.

    ``w^{-alpha} = sin(pi alpha)/pi int_0^inf lam^{-alpha} (lam + w)^{-1} dlam``
    with ``w = <xi>^2``.  After ``lam = e^u`` the integrand is
    ``exp((1 - alpha) u) / (e^u + w)``, evaluated in log form for stability.
    """
    if not 0 < alpha < 1:
        raise PreconditionError(f"alpha must lie in (0, 1), got {alpha}")
    w = f.grid.weight(2.0)
    logw = np.log(w)
    lw_min, lw_max = float(logw.min()), float(logw.max())
    tail = quad.tol * 1e-2
    if quad.half_width is None:
        # integrand ~ exp((1-alpha) u - log w) on the left and exp(-alpha u) on the right
        lo = lw_min + math.log(tail) / (1 - alpha) - 1.0
        hi = lw_max - math.log(tail) / alpha + 1.0
    else:
        lo, hi = -quad.half_width, quad.half_width
    step = quad.step or _auto_step(quad.tol)
    u = _trapezoid_nodes(lo, hi, step, quad.max_nodes)

    def integrand(ui):
        return np.exp((1 - alpha) * ui - np.logaddexp(ui, logw))

    vals = _log_sum(u, integrand) * (math.sin(math.pi * alpha) / math.pi)
    if not np.all(np.isfinite(vals)):
        raise ConvergenceError("fractional quadrature produced non-finite weights")
    return f.with_coeffs(vals * f.coeffs)
