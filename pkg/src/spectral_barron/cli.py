"""Command-line experiment runner.

``barron <command> --config cfg.json [--out DIR] [--seed N] [--no-timings]``

Every run writes ``report.json`` (inputs, outputs, invariant checks and
optionally timings) and ``table.csv`` into the output directory.  Exit
codes: 0 all checks pass, 1 some check failed, 2 invalid configuration,
3 numerical failure (no contraction, singular system, no convergence).
"""
from __future__ import annotations

import argparse
import csv
import io as _io
import json
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import interpolation as interp
from . import io
from .catalog import CatalogFunction, oracle_norm, parse_catalog_id
from .checks import Check, check_close, check_le
from .errors import (BarronError, CertificateError, ConvergenceError, GridError, NotAContractionError,
                     PreconditionError, SingularSystemError)
from .grid import FreqGrid
from .multipliers import bessel, fractional_inverse, heat, resolvent, resolvent_norm_bound
from .operators import assemble_T, eigs, opnorm_weighted
from .radon import radon_direct, radon_isometry
from .solvers import (AnisotropicProblem, derivative_identity_check, solve_anisotropic, solve_contraction,
                      solve_direct, solve_nonlocal, verify_higher_regularity)
from .spectral import (DualElement, SpectralFunction, barron_norm, dual_norm, eval_spatial, interpolation_check,
                       multiply, pairing, peetre_ratio, product_bound)

COMMANDS = ("norm", "op", "solve", "eig", "kfun", "radon", "verify")
DEFAULT_GRID = {"dim": 1, "cutoff": 10.0, "points_per_axis": 201}
DEFAULT_GRID_2D = {"dim": 2, "cutoff": 12.0, "points_per_axis": 481}
NUMERIC_ERRORS = (NotAContractionError, SingularSystemError, ConvergenceError, CertificateError)


class ConfigError(PreconditionError):
    """The experiment configuration is invalid."""


@dataclass
class ExperimentConfig:
    command: str
    grid: FreqGrid | None
    params: dict
    out: Path
    seed: int = 0
    base_dir: Path = field(default_factory=Path.cwd)

    def inputs(self) -> dict:
        d = {"command": self.command, "seed": self.seed, **self.params}
        if self.grid is not None:
            d["grid"] = self.grid.to_dict()
        return d


@dataclass
class Outcome:
    outputs: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    artifacts: dict = field(default_factory=dict)  # file name -> text
    table: list | None = None  # (header, rows) override for table.csv


# --- configuration ------------------------------------------------------------------

def load_config(command: str, path: str | None, overrides: dict, out: str | None, seed: int | None) -> ExperimentConfig:
    raw: dict = {}
    base = Path.cwd()
    if path is not None:
        p = Path(path)
        if not p.is_file():
            raise ConfigError(f"config file not found: {p}")
        try:
            raw = json.loads(p.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{p}: invalid JSON ({exc})") from None
        if not isinstance(raw, dict):
            raise ConfigError("config must be a JSON object")
        base = p.resolve().parent
    raw.update({k: v for k, v in overrides.items() if v is not None})
    schema = str(raw.pop("schema", "1"))
    if schema != "1":
        raise ConfigError(f"unsupported config schema {schema!r}")
    cmd = raw.pop("command", command)
    if cmd != command:
        raise ConfigError(f"config is for command {cmd!r}, not {command!r}")
    grid_spec = raw.pop("grid", None)
    if grid_spec is None:
        grid_spec = DEFAULT_GRID_2D if command == "radon" else DEFAULT_GRID
    if not isinstance(grid_spec, dict):
        raise ConfigError("grid must be an object {dim, cutoff, points_per_axis}")
    grid = FreqGrid.from_dict(grid_spec)
    cfg_seed = raw.pop("seed", 0)
    seed_val = cfg_seed if seed is None else seed
    if int(seed_val) != seed_val:
        raise ConfigError("seed must be an integer")
    out_path = Path(out) if out is not None else Path(raw.pop("out", "barron-out"))
    raw.pop("out", None)
    return ExperimentConfig(command, grid, raw, out_path, int(seed_val), base)


def resolve_function(spec, cfg: ExperimentConfig, name: str) -> SpectralFunction:
    fn = resolve_catalog_or_file(spec, cfg, name)
    if isinstance(fn, CatalogFunction):
        return SpectralFunction(cfg.grid, fn.sample(cfg.grid))
    if fn.grid != cfg.grid:
        raise ConfigError(f"{name}: file grid {fn.grid} differs from the configured grid {cfg.grid}")
    return fn


def resolve_catalog_or_file(spec, cfg: ExperimentConfig, name: str):
    if spec is None:
        raise ConfigError(f"missing required field {name!r}")
    if isinstance(spec, dict):
        if "file" in spec:
            spec = spec["file"]
        elif "catalog" in spec:
            return parse_catalog_id(spec["catalog"], cfg.grid.dim)
        else:
            raise ConfigError(f"{name}: expected a catalog id, a file path or {{file|catalog: ...}}")
    if not isinstance(spec, str):
        raise ConfigError(f"{name}: expected a string, got {type(spec).__name__}")
    if spec.endswith(".json"):
        p = Path(spec)
        if not p.is_absolute():
            p = cfg.base_dir / p if (cfg.base_dir / p).exists() else p
        return io.load_function(p)
    return parse_catalog_id(spec, cfg.grid.dim)


def _catalog(spec, cfg, name) -> CatalogFunction:
    fn = resolve_catalog_or_file(spec, cfg, name)
    if not isinstance(fn, CatalogFunction):
        raise ConfigError(f"{name} must be a catalog id (analytic form needed)")
    return fn


def _num(params, key, default=None, kind=float):
    v = params.get(key, default)
    if v is None:
        raise ConfigError(f"missing required field {key!r}")
    try:
        return kind(v)
    except (TypeError, ValueError):
        raise ConfigError(f"field {key!r} must be {kind.__name__}, got {v!r}") from None


def _complex(params, key, default):
    v = params.get(key, default)
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    try:
        return complex(v)
    except (TypeError, ValueError):
        raise ConfigError(f"field {key!r} must be a number or [re, im]") from None


def _orders(params, key, default):
    v = params.get(key, default)
    vals = v if isinstance(v, list) else [v]
    try:
        vals = [float(x) for x in vals]
    except (TypeError, ValueError):
        raise ConfigError(f"field {key!r} must be a number or list of numbers") from None
    if any(x < 0 for x in vals):
        raise ConfigError(f"field {key!r} must be non-negative")
    return vals


# --- command handlers ------------------------------------------------------------------

def cmd_norm(cfg: ExperimentConfig, rng) -> Outcome:
    spec = cfg.params.get("function", "gaussian:a=0.5")
    f = resolve_function(spec, cfg, "function")
    orders = _orders(cfg.params, "s", [0.0, 1.0, 2.0])
    p = _num(cfg.params, "p", 1.0)
    if not p >= 1:
        raise ConfigError("p must lie in [1, inf]")
    out = Outcome()
    norms = [{"s": s, "p": p, "value": barron_norm(f, s, p)} for s in orders]
    out.outputs["norms"] = norms
    fn = resolve_catalog_or_file(spec, cfg, "function") if isinstance(spec, str) and not spec.endswith(".json") else None
    if fn is not None and p == 1:
        oracle = []
        for s in orders:
            try:
                oracle.append({"s": s, "oracle": oracle_norm(fn, s)})
            except BarronError:
                pass
        out.outputs["oracle"] = oracle
    srt = sorted(orders)
    for a, b in zip(srt, srt[1:]):
        out.checks.append(check_le("norm_monotone", barron_norm(f, a, p), barron_norm(f, b, p),
                                   1e-12 * barron_norm(f, b, p), param=[a, b]))
    pts = rng.uniform(-10, 10, size=(64, f.grid.dim))
    sup = float(np.max(np.abs(eval_spatial(f, pts if f.grid.dim > 1 else pts[:, 0]))))
    bnd = (2 * np.pi) ** (-f.grid.dim) * barron_norm(f, 0)
    out.checks.append(check_le("sup_bound", sup, bnd, 1e-12 * max(bnd, 1.0)))
    out.table = (["s", "p", "value"], [[r["s"], r["p"], r["value"]] for r in norms])
    return out


def cmd_op(cfg: ExperimentConfig, rng) -> Outcome:
    kind = cfg.params.get("kind")
    if kind not in ("bessel", "resolvent", "heat", "fracinv"):
        raise ConfigError(f"op kind must be one of bessel, resolvent, heat, fracinv; got {kind!r}")
    param = _num(cfg.params, "param")
    f = resolve_function(cfg.params.get("in", cfg.params.get("function")), cfg, "in")
    out = Outcome()
    if kind == "bessel":
        h = bessel(f, param)
        if param >= 0:
            a, b = barron_norm(h, 0), barron_norm(f, 2 * param)
            out.checks.append(check_close("bessel_isometry", a, b, 1e-12 * max(b, 1e-300), param=param))
    elif kind == "resolvent":
        h = resolvent(f, param)
        if param > 0:
            out.checks.append(check_le("resolvent_bound", barron_norm(param * h), barron_norm(f),
                                       1e-12 * barron_norm(f), param=param))
    elif kind == "heat":
        if param < 0:
            raise ConfigError("heat time must be >= 0")
        h = heat(f, param)
        out.checks.append(check_le("heat_contraction", barron_norm(h), barron_norm(f), 1e-12 * barron_norm(f),
                                   param=param))
    else:
        if not 0 < param < 1:
            raise ConfigError("fracinv parameter must lie in (0, 1)")
        h = fractional_inverse(f, param)
        ref = bessel(f, -param)
        nf = barron_norm(f)
        out.checks.append(check_le("fracinv_vs_bessel", barron_norm(h - ref), 1e-4 * nf, param=param))
        out.checks.append(check_close("fracinv_isometry", barron_norm(h, 2 * param), nf, 1e-4 * nf, param=param))
    name = cfg.params.get("out_file", "output.json")
    out.artifacts[name] = io.dumps(io.function_to_dict(h))
    out.outputs = {"kind": kind, "param": param, "norm_in_B0": barron_norm(f), "norm_out_B0": barron_norm(h),
                   "output_file": name}
    return out


def _build_anisotropic(cfg: ExperimentConfig) -> AnisotropicProblem:
    n = cfg.grid.dim
    mu = _num(cfg.params, "mu", 1.0)
    A0 = np.asarray(cfg.params.get("A0", np.eye(n).tolist()), dtype=float)
    delta = cfg.params.get("delta")
    if delta is None:
        coeffs = tuple((None,) * n for _ in range(n))
    else:
        if not (isinstance(delta, list) and len(delta) == n and all(isinstance(r, list) and len(r) == n for r in delta)):
            raise ConfigError(f"delta must be an {n}x{n} array of catalog ids or null")
        coeffs = tuple(tuple(None if d is None else resolve_function(d, cfg, "delta") for d in row) for row in delta)
    return AnisotropicProblem(cfg.grid, mu, A0, coeffs)


def cmd_solve(cfg: ExperimentConfig, rng) -> Outcome:
    kind = cfg.params.get("type", "schrodinger")
    tol = _num(cfg.params, "tol", 1e-10)
    s = _num(cfg.params, "s", 0.0)
    f = resolve_function(cfg.params.get("f", "gaussian:a=0.5"), cfg, "f")
    out = Outcome()
    if kind == "schrodinger":
        lam = _num(cfg.params, "lambda", 1.0)
        V = resolve_function(cfg.params.get("V"), cfg, "V") * lam
        u, rep = solve_contraction(V, f, s, tol)
        out.outputs["report"] = rep.to_dict()
        out.checks.extend(rep.checks)
        order = int(_num(cfg.params, "order", 0))
        if order > 0:
            hr = verify_higher_regularity(u, V, f, order, tol)
            out.outputs["regularity_constants"] = hr["constants"]
            out.checks.extend(hr["checks"])
        if cfg.params.get("cross_check", False):
            ud, drep = solve_direct(V, 1.0, f)
            out.checks.append(check_le("direct_agreement", barron_norm(u - ud), 1e-7))
    elif kind == "nonlocal":
        lam = _complex(cfg.params, "lambda", 1.0)
        V = resolve_function(cfg.params.get("V"), cfg, "V")
        kernel = _catalog(cfg.params.get("kernel", "gaussian:a=0.5,amp=0"), cfg, "kernel")
        u, rep = solve_nonlocal(V, lam, kernel, f, tol)
        out.outputs["report"] = rep.to_dict()
        out.checks.extend(rep.checks[:2])
    elif kind == "anisotropic":
        prob = _build_anisotropic(cfg)
        u, rep = solve_anisotropic(prob, f, s, tol, residual_order=max(s, 1.0))
        out.outputs["report"] = rep.to_dict()
        out.checks.extend(rep.checks)
        di = derivative_identity_check(prob, u, f, tol)
        out.outputs["derivative_residuals"] = di["residuals"]
        out.checks.extend(di["checks"])
    else:
        raise ConfigError(f"solve type must be schrodinger, nonlocal or anisotropic; got {kind!r}")
    out.artifacts["solution.json"] = io.dumps(io.function_to_dict(u))
    out.outputs["solution_file"] = "solution.json"
    out.outputs["solution_norms"] = {f"B{k}": barron_norm(u, k) for k in (0, 2)}
    return out


def cmd_eig(cfg: ExperimentConfig, rng) -> Outcome:
    V = resolve_catalog_or_file(cfg.params.get("V"), cfg, "V")
    M = assemble_T(V, cfg.grid)
    pairs = eigs(M)
    radius = opnorm_weighted(M)
    out = Outcome()
    vals = [mu for mu, _ in pairs]
    top = max((abs(v) for v in vals), default=0.0)
    out.checks.append(check_le("spectral_radius_vs_opnorm", top, radius, 1e-9))
    out.checks.append(check_le("opnorm_vs_kappa", radius, M.kappa, 1e-12 * max(1.0, M.kappa)))
    out.outputs = {"eigenvalues": [[v.real, v.imag, abs(v)] for v in vals], "opnorm": radius, "kappa": M.kappa,
                   "potential_lattice": M.info["potential_lattice"]}
    nvec = int(_num(cfg.params, "vectors", 0))
    for i, (_, vec) in enumerate(pairs[:nvec]):
        out.artifacts[f"eigvec_{i:03d}.json"] = io.dumps(io.function_to_dict(vec))
    out.table = (["re", "im", "abs"], [[v.real, v.imag, abs(v)] for v in vals])
    return out


def cmd_kfun(cfg: ExperimentConfig, rng) -> Outcome:
    f = resolve_function(cfg.params.get("function", "gaussian:a=0.5"), cfg, "function")
    r, s, t = (_num(cfg.params, k, d) for k, d in (("r", 0.0), ("s", 1.0), ("t", 2.0)))
    if not r < s < t:
        raise ConfigError("need r < s < t")
    rep = interp.k_bound_check(f, r, s, t)
    out = Outcome(outputs={"theta": rep["theta"], "rows": rep["rows"]}, checks=list(rep["checks"]))
    out.table = (["rho", "K", "bound"], [[row["rho"], row["K"], row["bound"]] for row in rep["rows"]])
    return out


def cmd_radon(cfg: ExperimentConfig, rng) -> Outcome:
    fn = _catalog(cfg.params.get("function", "gaussian:a=0.5"), cfg, "function")
    if cfg.grid.dim != 2:
        raise ConfigError("radon needs a planar grid")
    angles = int(_num(cfg.params, "angles", 256))
    if angles < 2 or angles % 2:
        raise ConfigError("angles must be a positive even integer")
    source = cfg.params.get("source", "quadrature")
    gap_tol = _num(cfg.params, "gap_tol", 1e-3)
    out = Outcome()
    results = []
    for s in _orders(cfg.params, "s", [0.0, 1.0]):
        res = radon_isometry(fn, s, cfg.grid, angles, source=source)
        results.append(res)
        out.checks.append(check_le("radon_isometry_gap", res["gap"], gap_tol, param=s, lhs_norm=res["lhs"],
                                   rhs_norm=res["rhs"]))
    out.outputs["isometry"] = results
    if source == "quadrature":
        sino = radon_direct(fn, angles)
        out.checks.append(check_le("sinogram_symmetry", sino.symmetry_defect(), 1e-10))
        buf = _io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["angle_index", "phi", "offset", "value"])
        for a in range(angles):
            phi = 2 * math.pi * a / angles
            for off, val in zip(sino.offsets, sino.values[a]):
                w.writerow([a, repr(phi), repr(float(off)), repr(float(val))])
        out.artifacts["sinogram.csv"] = buf.getvalue()
    return out


def cmd_verify(cfg: ExperimentConfig, rng) -> Outcome:
    """Seeded invariant battery on the configured (default 1-D) grid."""
    from .catalog import BoxSpectrum, Gaussian, SingleMode

    g = cfg.grid
    n = g.dim
    out = Outcome()
    C = out.checks
    gauss = SpectralFunction(g, Gaussian(n, 0.5, 1.0).sample(g))
    box = SpectralFunction(g, BoxSpectrum(n, min(5.0, g.cutoff / 2), 1.0).sample(g))
    mode = SpectralFunction(g, SingleMode(n, tuple([g.axis[g.center_index[0] + 2]] * n), 1.5).sample(g))
    catalog = {"gaussian": gauss, "box": box, "singlemode": mode}

    def rand_fn():
        c = rng.standard_normal(g.shape) + 1j * rng.standard_normal(g.shape)
        return SpectralFunction(g, c * np.exp(-g.sq_norm / (2 * rng.uniform(0.5, 4.0) ** 2)))

    for name, f in catalog.items():
        for sigma in (0.25, 0.5, 1.0, 2.0):
            a, b = barron_norm(bessel(f, sigma)), barron_norm(f, 2 * sigma)
            C.append(check_close("bessel_isometry", a, b, 1e-12 * b, param=[name, sigma]))
        for s in (0.0, 1.0):
            C.append(interp_tail(f, 3.0, s, s + 2))
    for i in range(20):
        f, h = rand_fn(), rand_fn()
        for s in (0.0, 0.5, 1.0, 2.0):
            p, _ = multiply(f, h)
            bnd = product_bound(f, h, s)
            C.append(check_le("product_bound", barron_norm(p, s), bnd, 1e-12 * bnd, param=[i, s]))
        gd = DualElement(g, rng.standard_normal(g.shape) + 1j * rng.standard_normal(g.shape), order=1.0)
        lhs, rhs = abs(pairing(gd, f)), dual_norm(gd) * barron_norm(f, 1.0)
        C.append(check_le("duality", lhs, rhs, 1e-12 * rhs, param=i))
        pts = rng.uniform(-10, 10, size=(16, n))
        sup = float(np.max(np.abs(eval_spatial(f, pts if n > 1 else pts[:, 0]))))
        bnd0 = (2 * np.pi) ** (-n) * barron_norm(f)
        C.append(check_le("sup_bound", sup, bnd0, 1e-12 * bnd0, param=i))
        l, r = interpolation_check(f, 0.0, 1.0, 2.0)
        C.append(check_le("interpolation", l, r, 1e-12 * r, param=i))
    flat = g.points.reshape(-1, n)
    idx = rng.integers(0, len(flat), size=(200, 2))
    pr = peetre_ratio(flat[idx[:, 0]], flat[idx[:, 1]], 2.0)
    C.append(check_le("peetre", float(pr.max()), 1.0, 1e-12))
    worst = max(resolvent_norm_bound(g, t) for t in np.logspace(-3, 3, 50))
    C.append(check_le("resolvent_bound_family", worst, 1.0, 0.0))
    a = heat(heat(gauss, 0.3), 0.7)
    C.append(check_le("heat_semigroup", barron_norm(a - heat(gauss, 1.0)), 1e-14 * barron_norm(gauss), 0.0))
    # solvers on a small potential
    V = gauss * 0.05
    u, rep = solve_contraction(V, gauss, 0.0, 1e-10)
    C.extend(rep.checks)
    C.extend(verify_higher_regularity(u, V, gauss, 2, 1e-10)["checks"])
    if g.size <= 512:
        ud, _ = solve_direct(V, 1.0, gauss)
        C.append(check_le("direct_agreement", barron_norm(u - ud), 1e-7))
        M = assemble_T(V, g)
        top = max(abs(mu) for mu, _ in eigs(M))
        C.append(check_le("spectral_inclusion", top, M.kappa, 1e-9))
    # K-functionals and Hölder certificates
    for name, f in catalog.items():
        kb = interp.k_bound_check(f, 0.0, 0.5, 1.0)
        C.append(_summarize(f"k_bounds[{name}]", kb["checks"]))
        for rho in (1e-3, 0.1, 1.0):
            kex = interp.k_functional_exact(f, rho, 0.0, 2.0)
            kbf = interp.k_bruteforce(f, rho, 0.0, 2.0, rng, count=8)
            C.append(check_le("k_closed_form_optimal", kex, kbf, 0.0, param=[name, rho]))
            C.append(check_le("k_bruteforce_gap", kbf - kex, 1e-12 * barron_norm(f), 0.0, param=[name, rho]))
        xy = rng.uniform(-5, 5, size=(50, 2, n))
        pairs = [(p[0] if n > 1 else p[0][0], p[1] if n > 1 else p[1][0]) for p in xy]
        hc = interp.holder_certificate(f, pairs)
        C.append(_summarize(f"holder[{name}]", hc["checks"]))
    out.outputs = {"grid": g.to_dict(), "checks_run": len(C), "contraction_iterations": rep.iterations}
    return out


def interp_tail(f, rho, s, t) -> Check:
    return interp.tail_bound_check(f, rho, s, t)


def _summarize(name: str, checks: list[Check]) -> Check:
    """Collapse a family of checks into the one with the smallest slack."""
    worst = min(checks, key=lambda c: c.slack)
    return Check(name, all(c.passed for c in checks), worst.lhs, worst.rhs, worst.slack, worst.param,
                 {"count": len(checks)})


HANDLERS = {"norm": cmd_norm, "op": cmd_op, "solve": cmd_solve, "eig": cmd_eig, "kfun": cmd_kfun,
            "radon": cmd_radon, "verify": cmd_verify}


# --- reports ---------------------------------------------------------------------------

def emit_table(report: dict) -> str:
    """Flat CSV for a report.

    ``kfun`` reports give ``rho, K, bound`` rows, ``eig`` reports give
    ``re, im, abs`` rows sorted by decreasing modulus; every other report
    gives one ``name, param, lhs, rhs, pass`` row per check.
    """
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cmd = report.get("command")
    outputs = report.get("outputs") or {}
    if cmd == "kfun":
        w.writerow(["rho", "K", "bound"])
        for row in outputs.get("rows", []):
            w.writerow([repr(row["rho"]), repr(row["K"]), repr(row["bound"])])
    elif cmd == "eig":
        w.writerow(["re", "im", "abs"])
        rows = sorted(outputs.get("eigenvalues", []), key=lambda r: -r[2])
        for re_, im_, ab in rows:
            w.writerow([repr(re_), repr(im_), repr(ab)])
    else:
        w.writerow(["name", "param", "lhs", "rhs", "pass"])
        for c in report.get("invariant_checks", []):
            param = c.get("param")
            w.writerow([c["name"], "" if param is None else json.dumps(param), c["lhs"], c["rhs"],
                        "true" if c["pass"] else "false"])
    return buf.getvalue()


def run(cfg: ExperimentConfig, timings: bool = True) -> tuple[int, dict]:
    """Dispatch ``cfg`` and return ``(exit_code, report)``; artifacts are written to ``cfg.out``."""
    rng = np.random.default_rng(cfg.seed)
    t0 = time.perf_counter()
    report = {"schema": "1", "command": cfg.command, "seed": cfg.seed, "rng": "numpy.default_rng(PCG64)",
              "inputs": cfg.inputs(), "outputs": {}, "invariant_checks": []}
    code = 0
    outcome = Outcome()
    try:
        outcome = HANDLERS[cfg.command](cfg, rng)
    except NUMERIC_ERRORS as exc:
        code = 3
        report["status"] = "numeric_failure"
        report["error"] = {"type": type(exc).__name__, "message": str(exc), "details": getattr(exc, "details", {})}
    except (PreconditionError, GridError) as exc:
        code = 2
        report["status"] = "invalid_config"
        report["error"] = {"type": type(exc).__name__, "message": str(exc), "details": getattr(exc, "details", {})}
    else:
        report["outputs"] = outcome.outputs
        report["invariant_checks"] = [c.to_dict() for c in outcome.checks]
        code = 0 if all(c.passed for c in outcome.checks) else 1
        report["status"] = "pass" if code == 0 else "check_failure"
    if timings:
        report["timings"] = {"total_seconds": time.perf_counter() - t0}
    cfg.out.mkdir(parents=True, exist_ok=True)
    for name, text in outcome.artifacts.items():
        (cfg.out / name).write_text(text)
    (cfg.out / "report.json").write_text(io.dumps(report))
    if outcome.table is not None and code in (0, 1):
        header, rows = outcome.table
        buf = _io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows([[repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in r] for r in rows])
        (cfg.out / "table.csv").write_text(buf.getvalue())
    else:
        (cfg.out / "table.csv").write_text(emit_table(report))
    return code, report


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="barron", description="Spectral Barron space experiments.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", help="JSON experiment configuration")
    ap.add_argument("--out", help="output directory (op: a path ending in .json names the output function)")
    ap.add_argument("--seed", type=int, help="seed for randomized checks")
    ap.add_argument("--no-timings", action="store_true", help="omit timings so reports are byte-reproducible")
    ap.add_argument("--kind", help="op: bessel, resolvent, heat or fracinv")
    ap.add_argument("--param", type=float, help="op: sigma, lambda, t or alpha")
    ap.add_argument("--in", dest="infile", help="op: input function (JSON file or catalog id)")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {"kind": args.kind, "param": args.param, "in": args.infile}
    out = args.out
    if args.command == "op" and out is not None and out.endswith(".json"):
        overrides["out_file"] = Path(out).name
        out = str(Path(out).parent)
    try:
        cfg = load_config(args.command, args.config, overrides, out, args.seed)
    except (PreconditionError, GridError) as exc:
        print(f"barron: invalid configuration: {exc}", file=sys.stderr)
        return 2
    code, report = run(cfg, timings=not args.no_timings)
    if code == 2:
        print(f"barron: invalid configuration: {report['error']['message']}", file=sys.stderr)
    elif code == 3:
        print(f"barron: numerical failure: {report['error']['message']}", file=sys.stderr)
    elif code == 1:
        failed = [c["name"] for c in report["invariant_checks"] if not c["pass"]]
        print(f"barron: {len(failed)} check(s) failed: {', '.join(sorted(set(failed)))}", file=sys.stderr)
    else:
        print(f"barron {cfg.command}: {len(report['invariant_checks'])} checks passed -> {cfg.out}")
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
