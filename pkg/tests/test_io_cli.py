import json
import subprocess
import sys

import numpy as np
import pytest

from qball import cli, io, spherical
from qball.lattice import RadialFunction
from qball.qcore import QContext


def run(*args, cwd=None):
    return subprocess.run([sys.executable, "-m", "qball.cli", *args], capture_output=True, text=True, cwd=cwd)


@pytest.fixture
def f0_record(tmp_path):
    p = tmp_path / "f0.json"
    p.write_text(json.dumps({"q": 0.5, "n": 1, "K": 8, "coeffs": [1, 0, 0, 0, 0, 0, 0, 0]}))
    return p


def test_radial_record_round_trip(tmp_path):
    ctx = QContext(0.6, 2, K=16)
    f = RadialFunction(ctx, np.linspace(-1, 1, 16) / 3)
    path = tmp_path / "f.json"
    io.dump_json(io.radial_to_record(f), str(path))
    g = io.load_record(str(path))
    assert g.ctx == ctx and np.array_equal(g.coeffs, f.coeffs)


def test_spectral_record_round_trip(tmp_path):
    ctx = QContext(0.6, 2)
    F = spherical.forward(RadialFunction.basis(ctx, 2), 64)
    path = tmp_path / "F.json"
    io.dump_json(io.spectral_to_record(F), str(path))
    G = io.load_record(str(path))
    assert G.M == 64 and np.array_equal(G.values, F.values)


@pytest.mark.parametrize("rec,path", [
    ({"q": 0.5, "n": 1, "K": 3, "coeffs": [1, "x", 0]}, "$.coeffs[1]"),
    ({"q": 0.5, "n": 1, "K": 4, "coeffs": [1, 0, 0]}, "$.K"),
    ({"q": 0.5, "K": 1, "coeffs": [1]}, "$.n"),
    ({"q": 1.5, "n": 1, "K": 1, "coeffs": [1]}, "$"),
    ({"q": 0.5, "n": 1.5, "K": 1, "coeffs": [1]}, "$.n"),
    ({"q": 0.5, "n": 1, "h": 2.0, "M": 64, "values": [0.0] * 65}, "$.h"),
    ({"q": 0.5, "n": 1, "h": 1.3862943611198906, "M": 64, "values": [0.0] * 64}, "$.values"),
])
def test_schema_errors_carry_path(rec, path):
    with pytest.raises(io.SchemaError) as e:
        if "values" in rec:
            io.record_to_spectral(rec)
        else:
            io.record_to_radial(rec)
    assert e.value.path == path
    assert str(e.value).startswith(path + ":")


def test_verify_eigen_exit_zero():
    r = run("verify", "--suite", "eigen", "--q", "0.5", "--n", "1")
    assert r.returncode == 0
    lines = r.stdout.splitlines()
    assert any(l.startswith("eigen eigenrelation q=0.5,n=1") and l.endswith("PASS") for l in lines)


def test_verify_plancherel_hard_point():
    r = run("verify", "--suite", "plancherel", "--q", "0.9", "--n", "3", "--M", "4096")
    assert r.returncode == 0, r.stdout + r.stderr


def test_verify_bad_q():
    r = run("verify", "--q", "1.5")
    assert r.returncode == 2
    assert "q must lie in (0,1)" in r.stderr


@pytest.mark.parametrize("args", [["verify", "--n", "0"], ["verify", "--alpha", "-1"], ["table", "nope"],
                                  ["table", "phi", "--M", "63"], ["transform", "spherical"]])
def test_usage_errors(args):
    assert run(*args).returncode == 2


def test_verify_failure_names_identity(capsys):
    # a zero tolerance turns every inexact identity into a failure
    code = cli.main(["verify", "--suite", "eigen", "--q", "0.5", "--tol", "0"])
    out, err = capsys.readouterr()
    assert code == 1
    assert "FAILED eigen" in err and "lhs" in err and "rhs" in err


def test_table_lambda():
    r = run("table", "lambda", "--q", "0.5", "--n", "1", "--rho-nodes", "5")
    assert r.returncode == 0
    rows = [l.split(",") for l in r.stdout.splitlines()]
    assert rows[0] == ["rho", "lambda"] and len(rows) == 6
    vals = [float(v) for _, v in rows[1:]]
    assert vals[0] == pytest.approx(-4 / 9, rel=1e-15) and vals[-1] == pytest.approx(-4.0, rel=1e-15)


def test_table_phi_single_node():
    r = run("table", "phi", "--q", "0.5", "--n", "1", "--k-max", "2", "--rho-nodes", "1")
    rows = [l.split(",") for l in r.stdout.splitlines()]
    assert rows[0] == ["rho", "k", "phi"]
    assert rows[2][:2] == ["0.0", "1"] and float(rows[2][2]) == pytest.approx(0.666667, abs=1e-6)


def test_table_empty_grid_header_only():
    r = run("table", "phi", "--rho-nodes", "0")
    assert r.returncode == 0 and r.stdout == "rho,k,phi\n"


@pytest.mark.parametrize("kind", ["b-symbol", "norms", "weights", "berezin-f0"])
def test_other_tables(kind):
    r = run("table", kind, "--q", "0.5", "--n", "2", "--k-max", "3", "--rho-nodes", "3", "--format", "json")
    assert r.returncode == 0
    assert isinstance(json.loads(r.stdout), list)


def test_table_berezin_f0_value():
    r = run("table", "berezin-f0", "--q", "0.5", "--n", "1", "--alpha", "1", "--k-max", "2")
    rows = [l.split(",") for l in r.stdout.splitlines()]
    assert rows[2] == ["1", "0.0146484375"]


def test_tables_are_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run("table", "phi", "--q", "0.7", "--n", "2", "--k-max", "6", "--out", str(a))
    run("table", "phi", "--q", "0.7", "--n", "2", "--k-max", "6", "--out", str(b))
    assert a.read_bytes() == b.read_bytes() and a.stat().st_size > 0


def test_transform_berezin(f0_record):
    r = run("transform", "berezin", "--alpha", "1", "--input", str(f0_record))
    assert r.returncode == 0
    rec = json.loads(r.stdout)
    assert rec["coeffs"][1] == 0.0146484375
    assert rec["context"]["q"] == 0.5


def test_transform_spherical_constant(f0_record):
    r = run("transform", "spherical", "--input", str(f0_record), "--M", "64")
    rec = json.loads(r.stdout)
    assert len(rec["values"]) == 65
    assert np.allclose(rec["values"], 0.75, rtol=1e-15)


def test_transform_round_trip(tmp_path):
    src = tmp_path / "f.json"
    coeffs = [0.5, -1.0, 0.25, 2.0] + [0.0] * 12
    src.write_text(json.dumps({"q": 0.6, "n": 2, "K": 16, "coeffs": coeffs}))
    spec = tmp_path / "F.json"
    assert run("transform", "spherical", "--input", str(src), "--out", str(spec)).returncode == 0
    r = run("transform", "inverse", "--input", str(spec), "--Kout", "16")
    assert r.returncode == 0
    assert np.max(np.abs(np.array(json.loads(r.stdout)["coeffs"]) - coeffs)) < 1e-8


def test_transform_schema_error(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"q": 0.5, "n": 1, "K": 3, "coeffs": [1, "x", 0]}))
    r = run("transform", "berezin", "--input", str(p))
    assert r.returncode == 2 and "$.coeffs[1]" in r.stderr


def test_transform_parameter_mismatch(f0_record):
    r = run("transform", "berezin", "--input", str(f0_record), "--q", "0.6")
    assert r.returncode == 2 and "does not match" in r.stderr


def test_transform_kind_mismatch(f0_record):
    r = run("transform", "inverse", "--input", str(f0_record))
    assert r.returncode == 2


def test_unwritable_output(f0_record, tmp_path):
    r = run("transform", "berezin", "--input", str(f0_record), "--out", str(tmp_path / "missing" / "x.json"))
    assert r.returncode == 2 and "I/O error" in r.stderr
