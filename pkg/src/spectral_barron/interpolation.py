"""K-functionals of the couple ``(B^r, B^t)`` and the embeddings they control.

On the lattice both norms are weighted sums over the same cells, so the
infimum over splits ``f = g + h`` decouples cell by cell:

    K(rho, f) = sum_k min(<xi_k>^r, rho <xi_k>^t) |f_hat_k| h^n.

Sums are accumulated with :func:`math.fsum` (correctly rounded), which makes
comparisons against explicit splits exact rather than approximate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .checks import Check, check_le
from .errors import PreconditionError
from .spectral import SpectralFunction, barron_norm, eval_spatial, interpolation_check, tail_split

DEFAULT_RHOS = np.logspace(-4, 2, 61)


def _cell_terms(f: SpectralFunction, r: float, t: float, rho: float):
    h = f.grid.cell_volume
    a = (f.grid.weight(r) * np.abs(f.coeffs) * h).ravel()
    b = rho * (f.grid.weight(t) * np.abs(f.coeffs) * h).ravel()
    return a, b


def k_functional_exact(f: SpectralFunction, rho: float, r: float, t: float) -> float:
    """``inf_{g + h = f} ||g||_{B^r} + rho ||h||_{B^t}`` on the lattice."""
    if not r < t:
        raise PreconditionError(f"need r < t, got r={r}, t={t}")
    if not rho > 0:
        raise PreconditionError(f"rho must be positive, got {rho}")
    a, b = _cell_terms(f, r, t, rho)
    return math.fsum(np.minimum(a, b))


def threshold_split_costs(f: SpectralFunction, rho: float, r: float, t: float) -> tuple[np.ndarray, np.ndarray]:
    """Costs of the splits ``g = chi_{<xi> > mu} f`` for every distinct level ``mu``.

    Returns the levels (including one below all cells) and the costs.
    """
    a, b = _cell_terms(f, r, t, rho)
    br = f.grid.bracket.ravel()
    levels = np.concatenate([[0.0], np.unique(br)])
    costs = np.array([math.fsum(np.where(br > mu, a, b)) for mu in levels])
    return levels, costs


def proportional_split_costs(f: SpectralFunction, rho: float, r: float, t: float,
                             rng: np.random.Generator, count: int = 64) -> np.ndarray:
    """Costs of random splits ``g = lam f``, ``h = (1 - lam) f`` with cellwise ``lam in [0, 1]``.

    The cost of a cell, ``lam a + (1 - lam) b``, is written as
    ``min(a, b) + weight * |a - b|`` where ``weight`` is the share sent to
    the more expensive side.
    """
    a, b = _cell_terms(f, r, t, rho)
    lo = np.minimum(a, b)
    gap = np.abs(a - b)
    a_worse = a > b
    out = np.empty(count)
    for i in range(count):
        lam = rng.random(a.size)
        share = np.where(a_worse, lam, 1.0 - lam)
        out[i] = math.fsum(np.concatenate([lo, share * gap]))
    return out


def k_bruteforce(f: SpectralFunction, rho: float, r: float, t: float, rng=None, count: int = 64) -> float:
    """Minimum over threshold and random proportional splits (an upper bound for ``K``)."""
    rng = np.random.default_rng(0) if rng is None else rng
    _, thr = threshold_split_costs(f, rho, r, t)
    prop = proportional_split_costs(f, rho, r, t, rng, count)
    return float(min(thr.min(), prop.min()))


@dataclass(frozen=True, eq=False)
class KFunctionalCurve:
    f: SpectralFunction
    r: float
    t: float
    samples: tuple

    @property
    def rhos(self) -> np.ndarray:
        return np.array([p[0] for p in self.samples])

    @property
    def values(self) -> np.ndarray:
        return np.array([p[1] for p in self.samples])

    def concavity_checks(self, tol: float = 1e-12) -> list[Check]:
        """Midpoint concavity ``K((a + b)/2) >= (K(a) + K(b))/2`` on consecutive samples."""
        out = []
        for (r1, k1), (r2, k2) in zip(self.samples, self.samples[1:]):
            mid = k_functional_exact(self.f, 0.5 * (r1 + r2), self.r, self.t)
            out.append(check_le("k_concavity", 0.5 * (k1 + k2), mid, tol, param=0.5 * (r1 + r2)))
        return out

    def envelope_checks(self, tol: float = 1e-12) -> list[Check]:
        nr, nt = barron_norm(self.f, self.r), barron_norm(self.f, self.t)
        return [check_le("k_envelope", k, min(nr, rho * nt), tol * max(1.0, nr), param=rho)
                for rho, k in self.samples]


def k_curve(f: SpectralFunction, r: float, t: float, rhos=DEFAULT_RHOS) -> KFunctionalCurve:
    return KFunctionalCurve(f, r, t, tuple((float(p), k_functional_exact(f, p, r, t)) for p in rhos))


def k_bound_check(f: SpectralFunction, r: float, s: float, t: float, rhos=DEFAULT_RHOS) -> dict:
    """Interpolation-embedding bounds for ``B^s`` inside ``(B^r, B^t)_{theta, 1}``.

    With ``theta = (s - r)/(t - r)``:

    * ``rho < 1``: ``K(rho, f) <= cost(split at mu) <= (mu^{-(s-r)} + rho mu^{t-s}) ||f||_{B^s}
      = 2 rho^theta ||f||_{B^s}`` where ``mu = rho^{-1/(t-r)}``;
    * ``rho >= 1``: ``K(rho, f) <= ||f||_{B^r}``.
    """
    if not r < s < t:
        raise PreconditionError(f"need r < s < t, got {(r, s, t)}")
    theta = (s - r) / (t - r)
    ns, nr = barron_norm(f, s), barron_norm(f, r)
    checks: list[Check] = []
    rows = []
    for rho in np.asarray(rhos, dtype=float):
        k = k_functional_exact(f, rho, r, t)
        if rho < 1:
            mu = rho ** (-1.0 / (t - r))
            bound = 2 * rho ** theta * ns
            mu_bound = (mu ** (-(s - r)) + rho * mu ** (t - s)) * ns
            tol = 1e-12 * max(bound, 1e-300)
            checks.append(check_le("k_theta_bound", k, bound, tol, param=float(rho)))
            checks.append(check_le("k_mu_split_bound", k, mu_bound, tol, param=float(rho)))
            if mu > 1:
                g, h = tail_split(f, mu)
                cost = barron_norm(g, r) + rho * barron_norm(h, t)
                checks.append(check_le("k_split_cost", k, cost, tol, param=float(rho)))
                checks.append(check_le("k_split_cost_bound", cost, mu_bound, tol, param=float(rho)))
        else:
            bound = nr
            checks.append(check_le("k_large_rho_bound", k, bound, 1e-12 * max(bound, 1e-300), param=float(rho)))
        rows.append({"rho": float(rho), "K": k, "bound": float(bound)})
    lhs, rhs = interpolation_check(f, r, s, t)
    checks.append(check_le("interpolation_inequality", lhs, rhs, 1e-12 * rhs, param=[r, s, t]))
    return {"theta": theta, "rows": rows, "checks": checks, "passed": all(c.passed for c in checks)}


def holder_certificate(f: SpectralFunction, pairs, atol: float = 1e-10) -> dict:
    """Check ``|f(x) - f(y)| <= 2 (2 pi)^-n K(|x - y|, f; B^0, B^1)`` for each pair.

    ``pairs`` is a sequence of ``(x, y)`` points (scalars allowed in 1-D).
    """
    pairs = list(pairs)
    if not pairs:
        raise PreconditionError("need at least one pair")
    n = f.grid.dim
    xs = np.array([np.atleast_1d(np.asarray(p[0], dtype=float)) for p in pairs]).reshape(len(pairs), n)
    ys = np.array([np.atleast_1d(np.asarray(p[1], dtype=float)) for p in pairs]).reshape(len(pairs), n)
    dist = np.linalg.norm(xs - ys, axis=1)
    if np.any(dist == 0):
        raise PreconditionError("pairs must have x != y")
    fx, fy = eval_spatial(f, xs if n > 1 else xs[:, 0]), eval_spatial(f, ys if n > 1 else ys[:, 0])
    lhs = np.abs(np.atleast_1d(fx) - np.atleast_1d(fy))
    c = 2 * (2 * np.pi) ** (-n)
    rhs = np.array([c * k_functional_exact(f, d, 0.0, 1.0) for d in dist])
    checks = [check_le("holder", l, r, atol, param=float(d)) for l, r, d in zip(lhs, rhs, dist)]
    ratios = np.where(rhs > 0, lhs / np.where(rhs > 0, rhs, 1.0), 0.0)
    violations = sum(not ch.passed for ch in checks)
    return {"checks": checks, "max_ratio": float(ratios.max()), "violations": violations,
            "passed": violations == 0, "count": len(pairs)}


def tail_bound_check(f: SpectralFunction, rho: float, s: float, t: float) -> Check:
    """``sum_{<xi> > rho} <xi>^s |f_hat| h^n <= rho^{-(t - s)} ||f||_{B^t}``."""
    if not rho > 1:
        raise PreconditionError(f"rho must exceed 1, got {rho}")
    if not s < t:
        raise PreconditionError("need s < t")
    g, _ = tail_split(f, rho)
    lhs = barron_norm(g, s)
    rhs = rho ** (-(t - s)) * barron_norm(f, t)
    return check_le("tail_bound", lhs, rhs, 1e-12 * max(rhs, 1e-300), param=float(rho))
