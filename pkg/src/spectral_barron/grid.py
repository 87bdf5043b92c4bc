"""Truncated uniform frequency lattices.

Every spectral object in the package lives on a :class:`FreqGrid`: the cube
``[-cutoff, cutoff]^dim`` sampled with ``points_per_axis`` (odd) points per
axis, so that ``xi = 0`` is always a lattice point and the lattice is
symmetric under ``xi -> -xi``.  Integrals over frequency space are replaced by
rectangle sums with weight ``cell_volume = spacing**dim``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import GridError

_SPACING_RTOL = 1e-12


def _readonly(a):
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class FreqGrid:
    """Uniform lattice ``xi_j = -cutoff + i_j * spacing`` with ``i_j in [0, N)``."""

    dim: int
    cutoff: float
    points_per_axis: int

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise GridError(f"dim must be 1, 2 or 3, got {self.dim}")
        if not self.cutoff > 0 or not np.isfinite(self.cutoff):
            raise GridError(f"cutoff must be positive, got {self.cutoff}")
        n = self.points_per_axis
        if int(n) != n or n < 3:
            raise GridError(f"points_per_axis must be an integer >= 3, got {n}")
        if n % 2 == 0:
            raise GridError(f"even points_per_axis ({n}): zero frequency would not be a lattice point")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "cutoff", float(self.cutoff))
        object.__setattr__(self, "points_per_axis", int(n))

    @property
    def spacing(self) -> float:
        return 2.0 * self.cutoff / (self.points_per_axis - 1)

    @property
    def cell_volume(self) -> float:
        return self.spacing ** self.dim

    @property
    def shape(self) -> tuple:
        return (self.points_per_axis,) * self.dim

    @property
    def size(self) -> int:
        return self.points_per_axis ** self.dim

    @property
    def center_index(self) -> tuple:
        c = (self.points_per_axis - 1) // 2
        return (c,) * self.dim

    @cached_property
    def axis(self) -> np.ndarray:
        n = self.points_per_axis
        # symmetric by construction: axis[i] == -axis[n - 1 - i] bitwise
        half = (np.arange(n) - (n - 1) // 2) * self.spacing
        return _readonly(half)

    @cached_property
    def points(self) -> np.ndarray:
        """Lattice points, shape ``shape + (dim,)``."""
        mesh = np.meshgrid(*([self.axis] * self.dim), indexing="ij")
        return _readonly(np.stack(mesh, axis=-1))

    @cached_property
    def sq_norm(self) -> np.ndarray:
        """``|xi|^2`` on the lattice."""
        return _readonly(np.sum(self.points ** 2, axis=-1))

    @cached_property
    def bracket(self) -> np.ndarray:
        """Japanese bracket ``<xi> = sqrt(1 + |xi|^2)`` on the lattice."""
        return _readonly(np.sqrt(1.0 + self.sq_norm))

    def weight(self, s: float) -> np.ndarray:
        """``<xi>^s`` on the lattice."""
        if s == 0:
            return np.ones(self.shape)
        return self.bracket ** s

    def index_to_point(self, index) -> np.ndarray:
        index = np.asarray(index)
        if index.shape[-1] != self.dim:
            raise GridError(f"index must have {self.dim} components")
        if np.any(index < 0) or np.any(index >= self.points_per_axis):
            raise GridError(f"index {index.tolist()} outside [0, {self.points_per_axis})")
        return self.axis[index]

    def point_to_index(self, point, atol: float | None = None) -> tuple:
        """Multi-index of the lattice point equal to ``point``.

        Raises :class:`GridError` if ``point`` is not a lattice point (within
        ``atol``, default ``1e-9 * spacing``).
        """
        point = np.atleast_1d(np.asarray(point, dtype=float))
        if point.shape != (self.dim,):
            raise GridError(f"point must have {self.dim} components")
        atol = 1e-9 * self.spacing if atol is None else atol
        raw = point / self.spacing + (self.points_per_axis - 1) / 2
        idx = np.rint(raw).astype(int)
        if np.any(np.abs(raw - idx) * self.spacing > atol):
            raise GridError(f"{point.tolist()} is not a lattice point (spacing {self.spacing})")
        if np.any(idx < 0) or np.any(idx >= self.points_per_axis):
            raise GridError(f"{point.tolist()} lies outside the lattice box [-{self.cutoff}, {self.cutoff}]")
        return tuple(int(i) for i in idx)

    def doubled(self) -> "FreqGrid":
        """Lattice with the same spacing and twice the cutoff.

        It contains every difference ``xi_k - xi_j`` of points of ``self``,
        hence also the support of a product computed by discrete convolution.
        """
        return FreqGrid(self.dim, 2.0 * self.cutoff, 2 * self.points_per_axis - 1)

    def same_spacing(self, other: "FreqGrid") -> bool:
        return abs(self.spacing - other.spacing) <= _SPACING_RTOL * self.spacing

    def to_dict(self) -> dict:
        return {"dim": self.dim, "cutoff": self.cutoff, "points_per_axis": self.points_per_axis}

    @classmethod
    def from_dict(cls, d: dict) -> "FreqGrid":
        try:
            return cls(d["dim"], d["cutoff"], d["points_per_axis"])
        except KeyError as exc:
            raise GridError(f"grid descriptor missing key {exc}") from None


def make_grid(dim: int, cutoff: float, points_per_axis: int) -> FreqGrid:
    """Build a :class:`FreqGrid`, validating all lattice invariants.

    Examples
    --------
    >>> g = make_grid(1, 10.0, 5)
    >>> g.spacing, g.axis.tolist()
    (5.0, [-10.0, -5.0, 0.0, 5.0, 10.0])
    """
    return FreqGrid(dim, cutoff, points_per_axis)


def nested_offset(source: FreqGrid, target: FreqGrid) -> int:
    """Per-axis index offset of ``target`` inside ``source``.

    ``target`` must share the spacing of ``source`` and not be larger.
    """
    if source.dim != target.dim:
        raise GridError(f"dimension mismatch: {source.dim} vs {target.dim}")
    if not source.same_spacing(target):
        raise GridError(
            f"incompatible lattices: spacings not nested ({source.spacing} vs {target.spacing})"
        )
    if target.points_per_axis > source.points_per_axis:
        raise GridError("target lattice is larger than the source lattice")
    return (source.points_per_axis - target.points_per_axis) // 2


def inner_slices(source: FreqGrid, target: FreqGrid) -> tuple:
    """Slices selecting the cells of ``target`` inside an array on ``source``."""
    off = nested_offset(source, target)
    n = target.points_per_axis
    return (slice(off, off + n),) * source.dim
