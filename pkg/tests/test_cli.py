import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from spectral_barron import Gaussian, barron_norm, make_grid, sample
from spectral_barron.cli import emit_table, main
from spectral_barron.io import load_function, save_function


def write_cfg(path, **cfg):
    path.write_text(json.dumps({"schema": "1", **cfg}))
    return str(path)


def report(out):
    return json.loads((out / "report.json").read_text())


def test_norm_command(tmp_path):
    out = tmp_path / "o"
    cfg = write_cfg(tmp_path / "c.json", function="gaussian:a=0.5", s=[0, 2],
                    grid={"dim": 1, "cutoff": 12.0, "points_per_axis": 481})
    assert main(["norm", "--config", cfg, "--out", str(out)]) == 0
    rep = report(out)
    vals = [r["value"] for r in rep["outputs"]["norms"]]
    assert vals == pytest.approx([2 * np.pi, 4 * np.pi], rel=1e-6)
    rows = list(csv.reader((out / "table.csv").open()))
    assert rows[0] == ["s", "p", "value"] and len(rows) == 3
    assert set(rep) >= {"inputs", "outputs", "invariant_checks", "timings"}
    assert all({"name", "pass", "lhs", "rhs", "slack"} <= set(c) for c in rep["invariant_checks"])


def test_op_writes_function(tmp_path):
    g = make_grid(1, 10.0, 201)
    f = sample(Gaussian(1, 0.5), g)
    src = tmp_path / "f.json"
    save_function(f, src)
    dst = tmp_path / "res" / "x.json"
    code = main(["op", "--kind", "bessel", "--param", "1", "--in", str(src), "--out", str(dst)])
    assert code == 0
    h = load_function(dst)
    assert barron_norm(h) == pytest.approx(barron_norm(f, 2), rel=1e-12)
    assert (tmp_path / "res" / "report.json").exists()


@pytest.mark.parametrize("kind,param", [("resolvent", 2.0), ("heat", 0.5), ("fracinv", 0.5)])
def test_op_kinds(tmp_path, kind, param):
    code = main(["op", "--kind", kind, "--param", str(param), "--in", "gaussian:a=0.5", "--out", str(tmp_path)])
    assert code == 0
    assert all(c["pass"] for c in report(tmp_path)["invariant_checks"])


def test_solve_schrodinger(tmp_path):
    cfg = write_cfg(tmp_path / "c.json", type="schrodinger", V="gaussian:a=0.5,amp=0.05", f="gaussian:a=0.5",
                    order=3, cross_check=True)
    assert main(["solve", "--config", cfg, "--out", str(tmp_path / "o"), "--no-timings"]) == 0
    rep = report(tmp_path / "o")
    assert rep["outputs"]["report"]["iterations"] <= 9
    assert "timings" not in rep
    u = load_function(tmp_path / "o" / "solution.json")
    assert barron_norm(u) > 0


def test_solve_nonlocal_and_anisotropic(tmp_path):
    cfg = write_cfg(tmp_path / "n.json", type="nonlocal", V="gaussian:a=0.5,amp=0.05",
                    kernel="gaussian:a=0.5,amp=0.03", f="gaussian:a=0.5")
    assert main(["solve", "--config", cfg, "--out", str(tmp_path / "n")]) == 0
    cfg = write_cfg(tmp_path / "a.json", type="anisotropic", grid={"dim": 2, "cutoff": 8.0, "points_per_axis": 65},
                    A0=[[1, 0], [0, 1]], delta=[["gaussian:a=0.5,amp=0.0640619", None],
                                                [None, "gaussian:a=0.5,amp=0.0640619"]],
                    f="gaussian:a=1")
    assert main(["solve", "--config", cfg, "--out", str(tmp_path / "a")]) == 0
    assert max(report(tmp_path / "a")["outputs"]["derivative_residuals"]) <= 1e-9


def test_exit_code_numeric_failure(tmp_path, capsys):
    cfg = write_cfg(tmp_path / "c.json", type="schrodinger", V="gaussian:a=0.5,amp=1.5", f="gaussian:a=0.5")
    assert main(["solve", "--config", cfg, "--out", str(tmp_path)]) == 3
    rep = report(tmp_path)
    assert rep["error"]["type"] == "NotAContractionError"
    assert "kappa=1.5" in capsys.readouterr().err


@pytest.mark.parametrize("cfg", [
    {"grid": {"dim": 1, "cutoff": 10.0, "points_per_axis": 200}},
    {"schema": "2"},
    {"function": "nosuch:a=1"},
    {"s": [-1]},
])
def test_exit_code_invalid_config(tmp_path, cfg):
    path = tmp_path / "c.json"
    path.write_text(json.dumps(cfg))
    assert main(["norm", "--config", str(path), "--out", str(tmp_path / "o")]) == 2


def test_missing_config_file(tmp_path):
    assert main(["norm", "--config", str(tmp_path / "nope.json")]) == 2


def test_exit_code_check_failure(tmp_path):
    # gap_tol = 0 cannot be met by quadrature
    cfg = write_cfg(tmp_path / "c.json", function="gaussian:a=0.5", s=[0], angles=16, gap_tol=0.0,
                    grid={"dim": 2, "cutoff": 8.0, "points_per_axis": 65})
    assert main(["radon", "--config", cfg, "--out", str(tmp_path / "o")]) == 1
    assert (tmp_path / "o" / "sinogram.csv").exists()


def test_eig_and_kfun_tables(tmp_path):
    cfg = write_cfg(tmp_path / "e.json", V="gaussian:a=0.5,amp=0.3", vectors=2,
                    grid={"dim": 1, "cutoff": 8.0, "points_per_axis": 41})
    assert main(["eig", "--config", cfg, "--out", str(tmp_path / "e")]) == 0
    rows = list(csv.reader((tmp_path / "e" / "table.csv").open()))
    assert rows[0] == ["re", "im", "abs"] and len(rows) == 42
    mods = [float(r[2]) for r in rows[1:]]
    assert mods[0] == max(mods)
    assert (tmp_path / "e" / "eigvec_001.json").exists()
    cfg = write_cfg(tmp_path / "k.json", function="gaussian:a=0.5")
    assert main(["kfun", "--config", cfg, "--out", str(tmp_path / "k")]) == 0
    rows = list(csv.reader((tmp_path / "k" / "table.csv").open()))
    assert rows[0] == ["rho", "K", "bound"] and len(rows) == 62


def test_emit_table_variants():
    assert emit_table({"command": "norm"}) == "name,param,lhs,rhs,pass\n"
    kf = {"command": "kfun", "outputs": {"rows": [{"rho": 0.5, "K": 1.0, "bound": 2.0}]}}
    assert emit_table(kf).splitlines() == ["rho,K,bound", "0.5,1.0,2.0"]
    eg = {"command": "eig", "outputs": {"eigenvalues": [[0.1, 0.0, 0.1], [0.0, 0.3, 0.3]]}}
    assert emit_table(eg).splitlines()[1] == "0.0,0.3,0.3"
    chk = {"command": "verify", "invariant_checks": [{"name": "a", "param": [1, 2], "lhs": 1, "rhs": 2, "pass": True}]}
    assert emit_table(chk).splitlines()[1] == 'a,"[1, 2]",1,2,true'


def test_verify_deterministic(tmp_path):
    outs = []
    for i in range(2):
        out = tmp_path / str(i)
        assert main(["verify", "--seed", "42", "--no-timings", "--out", str(out)]) == 0
        outs.append((out / "report.json").read_bytes())
    assert outs[0] == outs[1]
    other = tmp_path / "x"
    main(["verify", "--seed", "7", "--no-timings", "--out", str(other)])
    assert (other / "report.json").read_bytes() != outs[0]


def test_console_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "spectral_barron.cli", "norm", "--out", str(tmp_path)],
                         capture_output=True, text=True)
    assert res.returncode == 0, res.stderr
    assert "checks passed" in res.stdout
