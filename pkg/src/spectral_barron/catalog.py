"""Analytic test functions with closed-form Fourier transforms.

Convention: ``f_hat(xi) = int exp(-i x.xi) f(x) dx``.  Each entry knows its
spectrum, its spatial form where one exists, its ``L^1`` norm where finite,
and an oracle for ``||f||_{B^s} = int <xi>^s |f_hat(xi)| dxi`` that does not
touch any lattice.

Entries are addressable by short string ids, e.g. ``"gaussian:a=0.5"``,
``"lorentzian:amp=2"``, ``"singlemode:xi=1|0,mass=3"``, ``"box:c=5"``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate, special

from .errors import GridError, PreconditionError
from .grid import FreqGrid

_SPHERE_AREA = {1: 2.0, 2: 2.0 * math.pi, 3: 4.0 * math.pi}


@dataclass(frozen=True)
class CatalogFunction:
    """Base class; subclasses are frozen and hashable so oracles can be cached."""

    dim: int

    kind = "abstract"

    def spectrum(self, xi: np.ndarray) -> np.ndarray:
        """Evaluate ``f_hat`` at points ``xi`` of shape ``(..., dim)``."""
        raise NotImplementedError(f"{self.kind} has no pointwise spectrum")

    def spatial(self, x: np.ndarray) -> np.ndarray:
        """Evaluate ``f`` at points ``x`` of shape ``(..., dim)``."""
        raise NotImplementedError(f"{self.kind} has no spatial form")

    def l1_norm(self) -> float:
        raise PreconditionError(f"{self.kind} has no finite analytic L^1 norm")

    def sample(self, grid: FreqGrid) -> np.ndarray:
        return np.asarray(self.spectrum(grid.points), dtype=complex)

    def _oracle_norm(self, s: float) -> float:
        raise NotImplementedError

    def to_id(self) -> str:
        raise NotImplementedError


def _as_axes(a, dim):
    a = np.broadcast_to(np.asarray(a, dtype=float), (dim,))
    return tuple(float(v) for v in a)


def _radial_norm(profile, dim, s, scale):
    """``|S^{dim-1}| int_0^inf r^{dim-1} <r>^s profile(r) dr`` by adaptive quadrature."""
    def integrand(r):
        return r ** (dim - 1) * (1.0 + r * r) ** (s / 2) * profile(r)

    # split at the profile's natural scale so QUADPACK sees the bulk
    val = 0.0
    for lo, hi in ((0.0, scale), (scale, 10 * scale), (10 * scale, np.inf)):
        part, _ = integrate.quad(integrand, lo, hi, epsabs=0.0, epsrel=1e-13, limit=500)
        val += part
    return _SPHERE_AREA[dim] * val


@dataclass(frozen=True)
class Gaussian(CatalogFunction):
    """``f(x) = amp * exp(-sum_i a_i x_i^2)``; ``a`` may be a scalar or per-axis."""

    a: float | tuple = 0.5
    amplitude: float = 1.0

    kind = "gaussian"

    def __post_init__(self):
        axes = _as_axes(self.a, self.dim)
        if min(axes) <= 0:
            raise PreconditionError("gaussian width parameter a must be positive")
        object.__setattr__(self, "a", axes)

    @property
    def isotropic(self) -> bool:
        return len(set(self.a)) == 1

    def spectrum(self, xi):
        xi = np.asarray(xi, dtype=float)
        a = np.asarray(self.a)
        pref = self.amplitude * np.prod(np.sqrt(np.pi / a))
        return pref * np.exp(-np.sum(xi ** 2 / (4 * a), axis=-1))

    def spatial(self, x):
        x = np.asarray(x, dtype=float)
        return self.amplitude * np.exp(-np.sum(np.asarray(self.a) * x ** 2, axis=-1))

    def l1_norm(self):
        return abs(self.amplitude) * float(np.prod(np.sqrt(np.pi / np.asarray(self.a))))

    def decay_radius(self, eps=1e-20):
        """Radius beyond which ``|f(x)| <= eps * |amp|`` in every direction."""
        return math.sqrt(math.log(1.0 / eps) / min(self.a))

    def _oracle_norm(self, s):
        amp = abs(self.amplitude)
        if s == 0:
            return amp * (2 * math.pi) ** self.dim
        if self.isotropic:
            a = self.a[0]
            pref = amp * (math.pi / a) ** (self.dim / 2)
            return pref * _radial_norm(lambda r: math.exp(-r * r / (4 * a)), self.dim, s, 2 * math.sqrt(a))
        if self.dim != 2:
            raise NotImplementedError("anisotropic gaussian oracle only for dim=2 when s>0")
        a1, a2 = self.a
        pref = amp * math.pi / math.sqrt(a1 * a2)
        lim = [[-40 * math.sqrt(a1), 40 * math.sqrt(a1)], [-40 * math.sqrt(a2), 40 * math.sqrt(a2)]]
        val, _ = integrate.nquad(
            lambda x, y: (1 + x * x + y * y) ** (s / 2) * math.exp(-x * x / (4 * a1) - y * y / (4 * a2)),
            lim, opts={"epsrel": 1e-12, "epsabs": 0.0, "limit": 200},
        )
        return pref * val

    def to_id(self):
        a = "|".join(repr(v) for v in self.a) if not self.isotropic else repr(self.a[0])
        return f"gaussian:a={a},amp={self.amplitude!r}"


@dataclass(frozen=True)
class Lorentzian1D(CatalogFunction):
    """``f(x) = amp / (1 + x^2)``, ``f_hat(xi) = amp * pi * exp(-|xi|)``."""

    dim: int = 1
    amplitude: float = 1.0

    kind = "lorentzian"

    def __post_init__(self):
        if self.dim != 1:
            raise PreconditionError("the Lorentzian entry is one-dimensional")

    def spectrum(self, xi):
        xi = np.asarray(xi, dtype=float)
        return self.amplitude * np.pi * np.exp(-np.abs(xi[..., 0]))

    def spatial(self, x):
        x = np.asarray(x, dtype=float)[..., 0]
        return self.amplitude / (1.0 + x * x)

    def l1_norm(self):
        return math.pi * abs(self.amplitude)

    def _oracle_norm(self, s):
        amp = abs(self.amplitude)
        if s == 0:
            return 2 * math.pi * amp
        if float(s).is_integer() and s % 2 == 0:
            # int_0^inf (1 + x^2)^m e^-x dx = sum_k C(m,k) (2k)!
            m = int(s) // 2
            tot = sum(math.comb(m, k) * math.factorial(2 * k) for k in range(m + 1))
            return 2 * math.pi * amp * tot
        return math.pi * amp * _radial_norm(lambda r: math.exp(-r), 1, s, 1.0)

    def to_id(self):
        return f"lorentzian:amp={self.amplitude!r}"


@dataclass(frozen=True)
class SingleMode(CatalogFunction):
    """Discrete point mass in frequency: ``f_hat = mass / h^n`` on the cell at ``xi0``.

    On a lattice this is the surrogate of ``mass * delta(xi - xi0)``; its
    spatial form is the plane wave ``(2 pi)^-n mass exp(i x.xi0)``.  With
    ``xi0 = 0`` it stands in for a constant function, which is not an
    element of ``B^0`` in the continuum.
    """

    xi0: tuple = (0.0,)
    mass: float = 1.0

    kind = "singlemode"

    def __post_init__(self):
        object.__setattr__(self, "xi0", _as_axes(self.xi0, self.dim))

    def sample(self, grid):
        if grid.dim != self.dim:
            raise GridError(f"dimension mismatch: function dim {self.dim}, grid dim {grid.dim}")
        out = np.zeros(grid.shape, dtype=complex)
        out[grid.point_to_index(self.xi0)] = self.mass / grid.cell_volume
        return out

    def spatial(self, x):
        x = np.asarray(x, dtype=float)
        return (2 * np.pi) ** (-self.dim) * self.mass * np.exp(1j * (x @ np.asarray(self.xi0)))

    @property
    def bracket(self) -> float:
        return math.sqrt(1.0 + sum(v * v for v in self.xi0))

    def _oracle_norm(self, s):
        return abs(self.mass) * self.bracket ** s

    def to_id(self):
        return f"singlemode:xi={'|'.join(repr(v) for v in self.xi0)},mass={self.mass!r}"


@dataclass(frozen=True)
class BoxSpectrum(CatalogFunction):
    """``f_hat = height`` on the ball ``|xi| <= c``, zero outside."""

    c: float = 1.0
    height: float = 1.0

    kind = "box"

    def __post_init__(self):
        if not self.c > 0:
            raise PreconditionError("box radius c must be positive")

    def spectrum(self, xi):
        r = np.sqrt(np.sum(np.asarray(xi, dtype=float) ** 2, axis=-1))
        return np.where(r <= self.c * (1 + 1e-12), self.height, 0.0)

    def spatial(self, x):
        x = np.asarray(x, dtype=float)
        r = np.sqrt(np.sum(x ** 2, axis=-1))
        c, h = self.c, self.height
        with np.errstate(divide="ignore", invalid="ignore"):
            if self.dim == 1:
                val = h * np.sin(c * r) / (np.pi * r)
                return np.where(r == 0, h * c / np.pi, val)
            if self.dim == 2:
                val = h * c * special.j1(c * r) / (2 * np.pi * r)
                return np.where(r == 0, h * c * c / (4 * np.pi), val)
            val = h * (np.sin(c * r) - c * r * np.cos(c * r)) / (2 * np.pi ** 2 * r ** 3)
            return np.where(r == 0, h * c ** 3 / (6 * np.pi ** 2), val)

    def _oracle_norm(self, s):
        h, c = abs(self.height), self.c
        if self.dim == 2:
            return 2 * math.pi * h * ((1 + c * c) ** (s / 2 + 1) - 1) / (s + 2)
        val, _ = integrate.quad(
            lambda r: r ** (self.dim - 1) * (1 + r * r) ** (s / 2), 0.0, c, epsabs=0.0, epsrel=1e-13
        )
        return _SPHERE_AREA[self.dim] * h * val

    def to_id(self):
        return f"box:c={self.c!r},height={self.height!r}"


@dataclass(frozen=True)
class DeltaKernel(CatalogFunction):
    """``weight * delta`` as a convolution kernel: ``f_hat == weight``, total mass ``|weight|``."""

    weight: float = 1.0

    kind = "delta"

    def spectrum(self, xi):
        xi = np.asarray(xi)
        return np.full(xi.shape[:-1], self.weight, dtype=float)

    def l1_norm(self):
        return abs(self.weight)

    def _oracle_norm(self, s):
        raise PreconditionError("the delta kernel is not an element of B^s")

    def to_id(self):
        return f"delta:weight={self.weight!r}"


def sample(fn: CatalogFunction, grid: FreqGrid):
    """Sample ``fn``'s spectrum on ``grid`` as a :class:`SpectralFunction`."""
    from .spectral import SpectralFunction

    if fn.dim != grid.dim:
        raise GridError(f"dimension mismatch: function dim {fn.dim}, grid dim {grid.dim}")
    return SpectralFunction(grid, fn.sample(grid))


@lru_cache(maxsize=512)
def oracle_norm(fn: CatalogFunction, s: float = 0.0) -> float:
    """Exact (or adaptive-quadrature) ``||fn||_{B^s}`` on all of frequency space."""
    if s < 0:
        raise PreconditionError(f"order s must be >= 0, got {s}")
    return float(fn._oracle_norm(float(s)))


_KINDS = {
    "gaussian": Gaussian,
    "lorentzian": Lorentzian1D,
    "singlemode": SingleMode,
    "box": BoxSpectrum,
    "delta": DeltaKernel,
}

_ALIASES = {
    "gaussian": {"a": "a", "amp": "amplitude", "amplitude": "amplitude"},
    "lorentzian": {"amp": "amplitude", "amplitude": "amplitude"},
    "singlemode": {"xi": "xi0", "xi0": "xi0", "mass": "mass"},
    "box": {"c": "c", "height": "height", "h": "height"},
    "delta": {"weight": "weight", "w": "weight"},
}


def parse_catalog_id(text: str, dim: int) -> CatalogFunction:
    """Build a catalog function from an id such as ``"gaussian:a=0.5,amp=2"``.

    Vector-valued parameters separate components with ``|``.
    """
    kind, _, rest = text.strip().partition(":")
    kind = kind.strip().lower()
    if kind not in _KINDS:
        raise PreconditionError(f"unknown catalog kind {kind!r}; expected one of {sorted(_KINDS)}")
    kwargs = {}
    for item in filter(None, (p.strip() for p in rest.split(","))):
        key, eq, val = item.partition("=")
        if not eq:
            raise PreconditionError(f"malformed catalog parameter {item!r} in {text!r}")
        key = key.strip().lower()
        if key not in _ALIASES[kind]:
            raise PreconditionError(f"unknown parameter {key!r} for {kind}")
        parts = [float(v) for v in val.split("|")]
        kwargs[_ALIASES[kind][key]] = tuple(parts) if len(parts) > 1 or key in ("xi", "xi0") else parts[0]
    return _KINDS[kind](dim=dim, **kwargs)
