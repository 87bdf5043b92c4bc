"""Dense matrices of the compact operators ``T = B^{-1} V`` on the lattice.

``B`` is either the Bessel symbol ``<xi>^2`` or an anisotropic symbol
``mu + A0 xi . xi``.  In coefficient space

    M[k, j] = b(xi_k)^{-1} (2 pi)^{-n} V_hat(xi_k - xi_j) h^n,

with ``V_hat`` read from the doubled lattice, which contains every
difference ``xi_k - xi_j``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .catalog import CatalogFunction
from .checks import Check, check_le
from .errors import CertificateError, GridError, PreconditionError, SingularSystemError
from .grid import FreqGrid
from .spectral import SpectralFunction, barron_norm, embed

DENSE_CAP = 2048
ASSEMBLY_CAP = 4096


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Dense matrix acting on flattened coefficient vectors of ``grid``."""

    grid: FreqGrid
    entries: np.ndarray
    base: str = "bessel"
    weight_order: float = 0.0
    v_norm_b0: float = 0.0  # ||V||_{B^0} over the difference lattice
    info: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def apply(self, f: SpectralFunction) -> SpectralFunction:
        if f.grid != self.grid:
            raise GridError("grid mismatch")
        return f.with_coeffs((self.entries @ f.coeffs.ravel()).reshape(self.grid.shape))

    @property
    def kappa(self) -> float:
        """``(2 pi)^-n ||V||_{B^0}``: the a-priori bound for the ``B^0`` operator norm."""
        return (2 * np.pi) ** (-self.grid.dim) * self.v_norm_b0


def potential_on_differences(V, grid: FreqGrid) -> SpectralFunction:
    """``V_hat`` on ``grid.doubled()``.

    Catalog functions are sampled analytically; samples on ``grid`` are
    zero-padded (the discrete model has no content outside the lattice).
    """
    band = grid.doubled()
    if isinstance(V, CatalogFunction):
        if V.dim != grid.dim:
            raise GridError("potential dimension does not match the grid")
        return SpectralFunction(band, V.sample(band))
    if isinstance(V, SpectralFunction):
        if V.grid == band:
            return V
        if V.grid == grid:
            return embed(V, band)
        raise GridError("sampled potential must live on the grid or on its doubled lattice")
    raise TypeError(f"unsupported potential type {type(V).__name__}")


def anisotropic_symbol(grid: FreqGrid, mu: float, A0) -> np.ndarray:
    A0 = np.asarray(A0, dtype=float)
    return mu + np.einsum("...k,kl,...l->...", grid.points, A0, grid.points)


def assemble_T(V, grid: FreqGrid, base: str = "bessel", mu: float = 1.0, A0=None) -> OperatorMatrix:
    """Assemble ``M = B^{-1} V`` on ``grid``; ``base`` is ``"bessel"`` or ``"anisotropic"``."""
    if grid.size > ASSEMBLY_CAP:
        raise PreconditionError(f"dense assembly capped at {ASSEMBLY_CAP} unknowns, grid has {grid.size}")
    vd = potential_on_differences(V, grid)
    n, N = grid.dim, grid.points_per_axis
    if base == "bessel":
        sym = grid.weight(2.0)
    elif base == "anisotropic":
        if A0 is None:
            raise PreconditionError("anisotropic base needs A0")
        sym = anisotropic_symbol(grid, mu, A0)
        if np.any(sym <= 0):
            raise PreconditionError("anisotropic symbol is not positive on the lattice")
    else:
        raise PreconditionError(f"unknown base symbol {base!r}")
    idx = np.indices(grid.shape).reshape(n, -1)  # (n, size)
    diff = tuple(idx[d][:, None] - idx[d][None, :] + (N - 1) for d in range(n))
    scale = (2 * np.pi) ** (-n) * grid.cell_volume
    entries = vd.coeffs[diff] * scale / sym.ravel()[:, None]
    return OperatorMatrix(grid, entries, base, 0.0, barron_norm(vd, 0.0),
                          info={"potential_lattice": "difference", "analytic": isinstance(V, CatalogFunction)})


def opnorm_weighted(M: OperatorMatrix, s: float | None = None) -> float:
    """Induced norm on ``B^s``: ``max_j sum_k w_k |M_kj| / w_j`` with ``w_k = <xi_k>^s h^n``."""
    s = M.weight_order if s is None else s
    w = M.grid.weight(s).ravel()
    val = float(np.max(np.sum(w[:, None] * np.abs(M.entries), axis=0) / w))
    if s == 0 and M.base == "bessel":
        bound = M.kappa
        if val > bound + 1e-12 * max(1.0, bound):
            raise CertificateError(f"operator norm {val} exceeds (2pi)^-n ||V||_B0 = {bound}", norm=val, bound=bound)
    return val


def inverse_opnorm(M: OperatorMatrix, shift: complex, s: float = 0.0) -> float:
    """Induced ``B^s`` norm of ``(shift + M)^{-1}``."""
    A = M.entries + shift * np.eye(M.size)
    lu = linalg.lu_factor(A, check_finite=False)
    _check_conditioning(A, lu)
    inv = linalg.lu_solve(lu, np.eye(M.size))
    w = M.grid.weight(s).ravel()
    return float(np.max(np.sum(w[:, None] * np.abs(inv), axis=0) / w))


def _check_conditioning(A, lu, rcond_min: float = 1e-12):
    anorm = np.linalg.norm(A, 1)
    if anorm == 0:
        raise SingularSystemError("zero matrix")
    rcond = float(linalg.lapack.zgecon(np.asarray(lu[0], dtype=complex), anorm)[0])
    if not rcond > rcond_min:
        raise SingularSystemError(f"system is singular to working precision (rcond={rcond:.2e})", rcond=rcond)
    return rcond


def eigs(M: OperatorMatrix, cap: int = DENSE_CAP) -> list[tuple[complex, SpectralFunction]]:
    """Full eigendecomposition, sorted by decreasing modulus.

    Eigenvectors are normalized to unit ``B^0`` norm.  Every eigenvalue is
    checked against the induced-norm ball.
    """
    if M.size > cap:
        raise PreconditionError(f"dense eigensolver capped at {cap} unknowns, matrix has {M.size}")
    try:
        vals, vecs = linalg.eig(M.entries, check_finite=False)
    except linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise SingularSystemError(f"eigensolver did not converge: {exc}") from None
    radius = opnorm_weighted(M, 0.0)
    if np.max(np.abs(vals), initial=0.0) > radius + 1e-9:
        raise CertificateError("eigenvalue outside the induced-norm ball", radius=radius)
    order = np.lexsort((vals.imag, vals.real, -np.round(np.abs(vals), 14)))
    h = M.grid.cell_volume
    out = []
    for i in order:
        v = vecs[:, i]
        nrm = np.sum(np.abs(v)) * h
        out.append((complex(vals[i]), SpectralFunction(M.grid, (v / nrm).reshape(M.grid.shape))))
    return out


def eigenpair_residual(M: OperatorMatrix, u: SpectralFunction, mu: complex) -> float:
    """``||M u - mu u||_{B^0} / ||u||_{B^0}``."""
    r = M.apply(u) - mu * u
    return barron_norm(r) / barron_norm(u)


def eigenfunction_regularity_check(u: SpectralFunction, V, lam: complex, j: int,
                                   M: OperatorMatrix | None = None, tol: float = 1e-8) -> dict:
    """Regularity of an eigenfunction ``T u = -u / lam``.

    From ``u = -lam (1 - Delta)^{-1} V u`` and the product estimate,
    ``||u||_{B^{k+2}} <= a_k ||u||_{B^k}`` with
    ``a_k = 2^{k/2} (2 pi)^-n |lam| ||V||_{B^k}``.  Chaining ``k = 0..j``
    gives

        ||u||_{B^{j+2}} <= 2^{j(j+1)/4} [(2 pi)^-n |lam| ||V||_{B^j}]^{j+1} ||u||_{B^0}.

    The report also carries the same envelope with exponent ``j`` (which
    the chain does not imply) and the exact chain product.
    """
    if j < 0 or int(j) != j:
        raise PreconditionError("j must be a non-negative integer")
    grid = u.grid
    M = assemble_T(V, grid) if M is None else M
    res = eigenpair_residual(M, u, -1.0 / lam)
    if res > tol:
        raise CertificateError(f"eigenpair residual {res:.3e} exceeds {tol:.1e}", residual=res)
    vd = potential_on_differences(V, grid)
    c = (2 * np.pi) ** (-grid.dim) * abs(lam)
    u0 = barron_norm(u, 0)
    lhs = barron_norm(u, j + 2)
    chain = u0
    for k in range(j + 1):
        chain *= 2 ** (k / 2) * c * barron_norm(vd, k)
    base = c * barron_norm(vd, j)
    derived = 2 ** (j * (j + 1) / 4) * base ** (j + 1) * u0
    stated = 2 ** (j * (j + 1) / 4) * base ** j * u0
    checks: list[Check] = [
        check_le("eigfn_chain", lhs, chain, 1e-6 * chain, param=j),
        check_le("eigfn_envelope", lhs, derived, 1e-6 * derived, param=j),
        check_le("eigfn_envelope_exponent_j", lhs, stated, 1e-6 * stated, param=j),
    ]
    return {
        "j": j, "residual": res, "lhs": lhs, "rhs_chain": chain, "rhs_envelope": derived,
        "rhs_exponent_j": stated, "checks": checks,
        "passed": checks[0].passed and checks[1].passed,
    }


def singular_value_tail(M: OperatorMatrix, m: int) -> float:
    """Sum of singular values beyond index ``m``."""
    sv = linalg.svdvals(M.entries)
    return float(np.sum(sv[m:]))


def nearest_eigen_distance(M: OperatorMatrix, z: complex) -> float:
    vals = linalg.eigvals(M.entries)
    return float(np.min(np.abs(vals - z))) if len(vals) else math.inf
