"""Solvers for ``(1 - Delta + V) u = f`` and relatives in the discrete Barron model.

Every iteration runs in coefficient space.  Products are formed on the
doubled lattice and restricted back, which never increases a ``B^s`` norm,
so the continuous contraction constants remain valid certificates for
the discrete iterations.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .catalog import CatalogFunction
from .checks import Check, check_le
from .errors import ConvergenceError, GridError, NotAContractionError, PreconditionError
from .multipliers import derivative
from .operators import (_check_conditioning, assemble_T, anisotropic_symbol, potential_on_differences)
from .spectral import SpectralFunction, barron_norm, multiply


@dataclass
class ContractionReport:
    kappa: float
    iterations: int
    residual_B0: float
    bound_check: Check | None = None
    history: list = field(default_factory=list)
    residual: float = 0.0  # in the working norm
    equation_residual: float = 0.0
    checks: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "kappa": self.kappa,
            "iterations": self.iterations,
            "residual_B0": self.residual_B0,
            "residual": self.residual,
            "equation_residual": self.equation_residual,
            "history": list(self.history),
            "checks": [c.to_dict() for c in self.checks],
            **{k: v for k, v in self.extra.items()},
        }


def _as_spectral(V, grid) -> SpectralFunction:
    if isinstance(V, CatalogFunction):
        return SpectralFunction(grid, V.sample(grid))
    if V.grid != grid:
        raise GridError("potential and right-hand side live on different grids")
    return V


def iteration_cap(rate: float, tol: float, fnorm: float) -> int:
    """``ceil(log(tol / max(||f||, eps)) / log(rate)) + 10``."""
    if rate <= 0:
        return 11
    ratio = tol / max(fnorm, np.finfo(float).tiny)
    if ratio >= 1:
        return 10
    return int(math.ceil(math.log(ratio) / math.log(rate))) + 10


def _pc(n):
    return (2 * np.pi) ** (-n)


# --- Schrödinger contraction -------------------------------------------------------

def contraction_constant(V: SpectralFunction, s: float = 0.0) -> float:
    """``2^{s/2} (2 pi)^-n ||V||_{B^s}``."""
    return 2 ** (s / 2) * _pc(V.grid.dim) * barron_norm(V, s)


def _schrodinger_map(V, f):
    w = f.grid.weight(2.0)

    def F(u):
        vu, _ = multiply(V, u)
        return f.with_coeffs((f.coeffs - vu.coeffs) / w)
    return F


def solve_contraction(V, f: SpectralFunction, s: float = 0.0, tol: float = 1e-10):
    """Fixed-point iteration ``u <- (1 - Delta)^{-1}(f - V u)`` from ``u_0 = 0``.

    Requires ``kappa_s = 2^{s/2} (2 pi)^-n ||V||_{B^s} < 1``.  Stops once the
    a-posteriori bound ``kappa_s ||u_{m+1} - u_m||_{B^s}`` on the fixed-point
    residual drops below ``tol``, then measures that residual directly.

    Returns
    -------
    u : SpectralFunction
    report : ContractionReport
    """
    if not tol > 0:
        raise PreconditionError("tol must be positive")
    if s < 0:
        raise PreconditionError("s must be >= 0")
    V = _as_spectral(V, f.grid)
    kappa = contraction_constant(V, s)
    if kappa >= 1:
        raise NotAContractionError(f"not a contraction, kappa={kappa:.6g}", kappa=kappa, s=s)
    F = _schrodinger_map(V, f)
    fnorm = barron_norm(f, s)
    cap = iteration_cap(kappa, tol, fnorm)
    u = SpectralFunction.zeros(f.grid)
    history = []
    for m in range(1, cap + 1):
        u_new = F(u)
        step = barron_norm(u_new - u, s)
        history.append(step)
        u = u_new
        if kappa * step <= tol:
            break
    else:
        raise ConvergenceError(f"no convergence within {cap} iterations", kappa=kappa, iterations=cap,
                               last_step=history[-1])
    fu = F(u)
    residual = barron_norm(u - fu, s)
    residual_b0 = barron_norm(u - fu, 0)
    vu, _ = multiply(V, u)
    eq_res = barron_norm(u.with_coeffs(f.grid.weight(2.0) * u.coeffs + vu.coeffs - f.coeffs), 0)
    bound = check_le("apriori_bound", barron_norm(u, s + 2), fnorm / (1 - kappa), 10 * tol, param=s)
    res_check = check_le("fixed_point_residual", residual, tol, 0.0, param=s)
    rates = [b / a for a, b in zip(history, history[1:]) if a > 0]
    report = ContractionReport(kappa, len(history), residual_b0, bound, history, residual, eq_res,
                               [res_check, bound], {"s": s, "rates": rates, "iteration_cap": cap})
    return u, report


def regularity_constants(V: SpectralFunction, k: int, kappa: float | None = None) -> list[float]:
    """``c_0 = (1 - kappa)^{-1}``, ``c_{j+1} = 2^{(j+1)/2} (2 pi)^-n c_j ||V||_{B^{j+1}} + 1``."""
    kappa = contraction_constant(V, 0.0) if kappa is None else kappa
    if kappa >= 1:
        raise NotAContractionError(f"not a contraction, kappa={kappa:.6g}", kappa=kappa)
    c = [1.0 / (1.0 - kappa)]
    for j in range(k):
        c.append(2 ** ((j + 1) / 2) * _pc(V.grid.dim) * c[-1] * barron_norm(V, j + 1) + 1.0)
    return c


def verify_higher_regularity(u: SpectralFunction, V, f: SpectralFunction, k: int, tol: float = 1e-10) -> dict:
    """Check ``||u||_{B^{j+2}} <= c_j ||f||_{B^j}`` for ``j = 0..k`` with the inductive constants."""
    if k < 0 or int(k) != k:
        raise PreconditionError("k must be a non-negative integer")
    V = _as_spectral(V, f.grid)
    F = _schrodinger_map(V, f)
    fp = barron_norm(u - F(u), k + 2)
    if fp > 10 * tol:
        raise ConvergenceError(f"fixed-point residual {fp:.3e} in B^{k + 2} too large to certify", residual=fp)
    consts = regularity_constants(V, k)
    checks = [
        check_le("higher_regularity", barron_norm(u, j + 2), consts[j] * barron_norm(f, j), 10 * tol, param=j)
        for j in range(k + 1)
    ]
    return {"constants": consts, "checks": checks, "passed": all(c.passed for c in checks), "residual": fp}


# --- direct dense solve ------------------------------------------------------------

def solve_direct(V, lam: complex, f: SpectralFunction, order: int = 0, M=None):
    """Dense solve of ``(1 - Delta + lam V) u = f`` as ``(I + lam T) u = (1 - Delta)^{-1} f``.

    Alongside the residual, the report carries the regularity chain

        c_0 = (2 pi)^-n |lam| ||V||_{B^0} ||(I + lam T)^{-1}|| + 1,
        c_j = 2^{j/2} (2 pi)^-n |lam| ||V||_{B^j} c_{j-1} + 1,

    and checks ``||u||_{B^{j+2}} <= c_j ||f||_{B^j}`` for ``j <= order``.
    """
    grid = f.grid
    M = assemble_T(V, grid) if M is None else M
    A = np.eye(M.size) + lam * M.entries
    lu = linalg.lu_factor(A, check_finite=False)
    rcond = _check_conditioning(A, lu)
    rhs = (f.coeffs / grid.weight(2.0)).ravel()
    u = SpectralFunction(grid, linalg.lu_solve(lu, rhs).reshape(grid.shape))
    Mu = M.apply(u)
    res = u.with_coeffs(grid.weight(2.0) * (u.coeffs + lam * Mu.coeffs) - f.coeffs)
    inv = linalg.lu_solve(lu, np.eye(M.size))
    inv_norm = float(np.max(np.sum(np.abs(inv), axis=0)))
    vd = potential_on_differences(V, grid)
    pc = _pc(grid.dim) * abs(lam)
    consts = [pc * barron_norm(vd, 0) * inv_norm + 1.0]
    for j in range(1, order + 1):
        consts.append(2 ** (j / 2) * pc * barron_norm(vd, j) * consts[-1] + 1.0)
    tol = 1e-8
    checks = [check_le("direct_regularity", barron_norm(u, j + 2), consts[j] * barron_norm(f, j),
                       tol * max(1.0, consts[j] * barron_norm(f, j)), param=j)
              for j in range(order + 1)]
    report = {
        "residual_B0": barron_norm(res, 0),
        "rcond": rcond,
        "inverse_norm": inv_norm,
        "constants": consts,
        "envelopes": [barron_norm(u, j + 2) / barron_norm(f, j) if barron_norm(f, j) > 0 else 0.0
                      for j in range(order + 1)],
        "checks": checks,
        "passed": all(c.passed for c in checks),
    }
    return u, report


# --- nonlocal term ------------------------------------------------------------------

def solve_nonlocal(V, lam: complex, kernel: CatalogFunction, f: SpectralFunction, tol: float = 1e-10, M=None):
    """Fixed point of ``K u = lam^-1 (lam^-1 + T)^-1 (1 - Delta)^-1 [k * u + f]``.

    Solves ``(1 - Delta + lam V) u = k * u + f``.  The map contracts in
    ``B^0`` with constant ``delta = |lam|^-1 ||(lam^-1 + T)^-1|| ||k||_1``.
    """
    if lam == 0:
        raise PreconditionError("lam must be non-zero")
    grid = f.grid
    M = assemble_T(V, grid) if M is None else M
    shift = 1.0 / lam
    A = M.entries + shift * np.eye(M.size)
    lu = linalg.lu_factor(A, check_finite=False)
    rcond = _check_conditioning(A, lu)
    inv_norm = float(np.max(np.sum(np.abs(linalg.lu_solve(lu, np.eye(M.size))), axis=0)))
    k1 = kernel.l1_norm()
    beta = inv_norm / abs(lam)
    delta = beta * k1
    if delta >= 1:
        raise NotAContractionError(f"nonlocal map is not a contraction, delta={delta:.6g}", delta=delta)
    khat = kernel.sample(grid).ravel()
    w = grid.weight(2.0).ravel()
    fvec = f.coeffs.ravel()

    def K(u):
        return linalg.lu_solve(lu, (khat * u + fvec) / w) / lam

    def eq_residual(u):
        r = w * (u + lam * (M.entries @ u)) - khat * u - fvec
        return float(np.sum(np.abs(r)) * grid.cell_volume)

    fnorm = barron_norm(f, 0)
    cap = iteration_cap(delta, tol, fnorm)
    u = np.zeros(M.size, dtype=complex)
    history = []
    for _ in range(cap):
        u_new = K(u)
        step = float(np.sum(np.abs(u_new - u)) * grid.cell_volume)
        u = u_new
        res = eq_residual(u)
        history.append(res)
        if delta * step <= tol and res <= tol:
            break
    else:
        raise ConvergenceError(f"no convergence within {cap} iterations", delta=delta, residual=history[-1])
    sol = SpectralFunction(grid, u.reshape(grid.shape))
    vd = potential_on_differences(V, grid)
    a = abs(lam) * _pc(grid.dim) * barron_norm(vd, 0) + k1
    lhs = barron_norm(sol, 2)
    rhs_full = (a * beta / (1 - delta) + 1.0) * fnorm
    rhs_short = (a / (1 - delta) + 1.0) * fnorm
    checks = [
        check_le("nonlocal_residual", history[-1], tol),
        check_le("nonlocal_apriori", lhs, rhs_full, 10 * tol),
        check_le("nonlocal_apriori_unscaled", lhs, rhs_short, 10 * tol),
    ]
    report = ContractionReport(delta, len(history), barron_norm(sol - sol.with_coeffs(K(u).reshape(grid.shape))),
                               checks[1], history, history[-1], history[-1], checks,
                               {"delta": delta, "rcond": rcond, "inverse_norm": inv_norm, "beta": beta})
    return sol, report


# --- anisotropic operators --------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class AnisotropicProblem:
    """``mu u - sum_{k,l} d_k (a_kl d_l u) = f`` with ``a = A0 + delta``.

    ``delta_coeffs[k][l]`` is a :class:`SpectralFunction` or ``None`` (zero).
    """

    grid: object
    mu: float
    A0: np.ndarray
    delta_coeffs: tuple
    kappa: float | None = None

    def __post_init__(self):
        n = self.grid.dim
        A0 = np.array(self.A0, dtype=float)
        if A0.shape != (n, n):
            raise PreconditionError(f"A0 must be {n}x{n}")
        if not np.allclose(A0, A0.T, rtol=0, atol=1e-14):
            raise PreconditionError("A0 must be symmetric")
        if not self.mu > 0:
            raise PreconditionError("mu must be positive")
        kmin = float(np.linalg.eigvalsh(A0).min())
        kappa = kmin if self.kappa is None else float(self.kappa)
        if not kappa > 0:
            raise PreconditionError(f"A0 is not elliptic (smallest eigenvalue {kmin:.3g})")
        quad = np.einsum("...k,kl,...l->...", self.grid.points, A0, self.grid.points)
        if np.any(quad < kappa * self.grid.sq_norm * (1 - 1e-12) - 1e-300):
            raise PreconditionError(f"A0 xi.xi >= {kappa} |xi|^2 fails on the lattice")
        rows = []
        for k in range(n):
            row = []
            for l in range(n):
                d = self.delta_coeffs[k][l] if self.delta_coeffs is not None else None
                if isinstance(d, CatalogFunction):
                    d = SpectralFunction(self.grid, d.sample(self.grid))
                if d is not None and d.grid != self.grid:
                    raise GridError("coefficient grid mismatch")
                row.append(d)
            rows.append(tuple(row))
        A0.setflags(write=False)
        object.__setattr__(self, "A0", A0)
        object.__setattr__(self, "kappa", kappa)
        object.__setattr__(self, "delta_coeffs", tuple(rows))

    @property
    def varkappa(self) -> float:
        return 1.0 / min(self.mu, self.kappa)

    def eta(self, s: float = 0.0) -> float:
        """``2^{(1+s)/2} varkappa (2 pi)^-n sum ||a_kl - a0_kl||_{B^{1+s}}``."""
        total = sum(barron_norm(d, 1 + s) for row in self.delta_coeffs for d in row if d is not None)
        return 2 ** ((1 + s) / 2) * self.varkappa * _pc(self.grid.dim) * total

    def symbol(self) -> np.ndarray:
        return anisotropic_symbol(self.grid, self.mu, self.A0)

    def apply_L0(self, u: SpectralFunction) -> SpectralFunction:
        return u.with_coeffs(self.symbol() * u.coeffs)

    def apply_perturbation(self, u: SpectralFunction, coeffs=None) -> SpectralFunction:
        """``-sum_{k,l} d_k (c_kl d_l u)`` with ``c = delta_coeffs`` unless given."""
        coeffs = self.delta_coeffs if coeffs is None else coeffs
        n = self.grid.dim
        grads = [derivative(u, l) for l in range(n)]
        out = SpectralFunction.zeros(self.grid)
        for k in range(n):
            flux = SpectralFunction.zeros(self.grid)
            for l in range(n):
                c = coeffs[k][l]
                if c is None:
                    continue
                flux = flux + multiply(c, grads[l])[0]
            out = out - derivative(flux, k)
        return out

    def apply_L(self, u: SpectralFunction) -> SpectralFunction:
        return self.apply_L0(u) + self.apply_perturbation(u)


def solve_anisotropic(prob: AnisotropicProblem, f: SpectralFunction, s: float = 0.0, tol: float = 1e-10,
                      residual_order: float | None = None):
    """Neumann iteration ``u <- L0^{-1}(f - (L - L0) u)`` from ``u_0 = 0``.

    Converges in ``B^{2+s}`` when ``eta(s) < 1``; stops when the residual
    ``||L u - f||`` measured in ``B^{residual_order}`` (default ``B^s``) is at
    most ``tol``.
    """
    if f.grid != prob.grid:
        raise GridError("right-hand side grid differs from the problem grid")
    eta = prob.eta(s)
    if eta >= 1:
        raise NotAContractionError(f"perturbation too large, eta={eta:.6g}", eta=eta, s=s)
    r_ord = s if residual_order is None else residual_order
    sym = prob.symbol()
    fnorm = barron_norm(f, s)
    cap = iteration_cap(eta, tol, fnorm)
    u = f.with_coeffs(f.coeffs / sym)
    du = prob.apply_perturbation(u)
    history = [barron_norm(du, r_ord)]  # residual of the first iterate is D u_1
    it = 1
    while history[-1] > tol:
        if it >= cap:
            raise ConvergenceError(f"no convergence within {cap} iterations", eta=eta, residual=history[-1])
        u_new = f.with_coeffs((f.coeffs - du.coeffs) / sym)
        du_new = prob.apply_perturbation(u_new)
        u, du = u_new, du_new
        r = prob.apply_L0(u) + du - f
        history.append(barron_norm(r, r_ord))
        it += 1
    r = prob.apply_L0(u) + du - f
    residual = barron_norm(r, s)
    bound = check_le("anisotropic_bound", barron_norm(u, 2 + s), prob.varkappa * fnorm / (1 - eta), 10 * tol, param=s)
    checks = [check_le("anisotropic_residual", residual, tol, param=s), bound]
    report = ContractionReport(eta, it, barron_norm(r, 0), bound, history, residual, residual, checks,
                               {"eta": eta, "varkappa": prob.varkappa, "s": s})
    return u, report


def derivative_identity_check(prob: AnisotropicProblem, u: SpectralFunction, f: SpectralFunction, tol: float) -> dict:
    """Residual of ``L v_j = sum d_k (d_j a_kl d_l u) + d_j f`` for ``v_j = d_j u``."""
    n = prob.grid.dim
    checks = []
    residuals = []
    for j in range(n):
        vj = derivative(u, j)
        dcoef = [[None if c is None else derivative(c, j) for c in row] for row in prob.delta_coeffs]
        # sum_k d_k(d_j a_kl d_l u) = -apply_perturbation(u, coeffs=d_j a)
        rhs = derivative(f, j) - prob.apply_perturbation(u, dcoef)
        res = barron_norm(prob.apply_L(vj) - rhs, 0)
        residuals.append(res)
        checks.append(check_le("derivative_identity", res, 10 * tol, param=j))
    return {"residuals": residuals, "checks": checks, "passed": all(c.passed for c in checks)}
