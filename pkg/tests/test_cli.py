"""Command-line front end: reports, verification suites, demos, determinism."""

import json
import subprocess
import sys

import pytest

from neclab import boolfn
from neclab.boolfn import BooleanFunction
from neclab.cli import main


def run_cli(args, out_path):
    rc = main(args + ["--out", str(out_path)])
    return rc, out_path.read_bytes()


def write_parity_table(path, n):
    f = BooleanFunction(n, lambda x: sum(x) & 1)
    path.write_text(boolfn.format_table_text(f), encoding="ascii")
    return path


def test_bounds_isa4_vc_table(tmp_path):
    rc, data = run_cli(["bounds", "--family", "isa", "--n", "4", "--method", "vc"],
                       tmp_path / "r.txt")
    assert rc == 0
    text = data.decode()
    assert "total:   8.000000" in text
    assert "unavailable" in text  # remainder block exceeds the exact-search cap


def test_bounds_parity_table_singletons(tmp_path):
    table = write_parity_table(tmp_path / "par.tt", 8)
    rc, data = run_cli(["bounds", "--family", "none", "--table", str(table),
                        "--partition", "singletons", "--method", "standard",
                        "--format", "json"], tmp_path / "r.json")
    assert rc == 0
    rep = json.loads(data)
    assert rep["total"] == pytest.approx(8 / 4)
    assert all(b["status"] == "exact" for b in rep["per_block"])


def test_bounds_constant_function_all_methods(tmp_path):
    f = BooleanFunction.from_table(3, 0)
    table = tmp_path / "zero.tt"
    table.write_text(boolfn.format_table_text(f), encoding="ascii")
    for method in ("standard", "vc", "nondet"):
        rc, data = run_cli(["bounds", "--family", "none", "--table", str(table),
                            "--partition", "singletons", "--method", method,
                            "--format", "json", "--s", "1"], tmp_path / "r.json")
        assert rc == 0
        assert json.loads(data)["total"] == 0


def test_bounds_json_schema(tmp_path):
    rc, data = run_cli(["bounds", "--family", "mp", "--n", "2", "--method", "standard",
                        "--format", "json"], tmp_path / "r.json")
    assert rc == 0
    rep = json.loads(data)
    assert set(rep) == {"method", "family", "params", "per_block", "total", "theorem"}
    assert all(set(b) == {"block", "value", "status"} for b in rep["per_block"])


def test_bounds_cap_exit_code(tmp_path):
    # exact vc search on a huge family without a witness partition errors out
    rc = main(["bounds", "--family", "ad", "--n", "2", "--s", "2",
               "--method", "nondet", "--out", str(tmp_path / "x.txt")])
    assert rc == 0  # per-block caps degrade to unavailable, not an error
    rc = main(["bounds", "--family", "none", "--method", "standard",
               "--out", str(tmp_path / "y.txt")])
    assert rc == 2  # --family none without --table


def test_verify_empty_corpus_vacuous_pass(tmp_path):
    rc, data = run_cli(["verify", "boolfn", "--no-builtins", "--format", "json"],
                       tmp_path / "v.json")
    assert rc == 0
    rep = json.loads(data)
    assert rep["passed"] == 0 and rep["failed"] == 0 and rep["checks"] == []


def test_verify_commcx_passes(tmp_path):
    rc, data = run_cli(["verify", "commcx", "--format", "json"], tmp_path / "v.json")
    assert rc == 0
    rep = json.loads(data)
    assert rep["failed"] == 0 and rep["passed"] > 0


def test_demo_superdense(tmp_path):
    rc, data = run_cli(["demo", "superdense"], tmp_path / "d.txt")
    assert rc == 0
    text = data.decode()
    for b1 in (0, 1):
        for b2 in (0, 1):
            assert f"send ({b1},{b2}) -> decoded ({b1},{b2})" in text


def test_demo_pqg_retry_transcript(tmp_path):
    rc, data = run_cli(["demo", "pqg-retry", "--seed", "1"], tmp_path / "d.txt")
    assert rc == 0
    text = data.decode()
    assert "success" in text and "final fidelity" in text


def test_demo_formula_protocol(tmp_path):
    rc, data = run_cli(["demo", "formula-protocol"], tmp_path / "d.txt")
    assert rc == 0
    assert data.decode().count("bob outputs") == 8


@pytest.mark.parametrize("argv", [
    ["bounds", "--family", "isa", "--n", "4", "--method", "vc", "--format", "json"],
    ["bounds", "--family", "mp", "--n", "2", "--method", "standard"],
    ["verify", "formula", "--seed", "5", "--format", "json"],
    ["demo", "pqg-retry", "--seed", "3"],
])
def test_byte_reproducible(argv, tmp_path):
    _, first = run_cli(list(argv), tmp_path / "a.out")
    _, second = run_cli(list(argv), tmp_path / "b.out")
    assert first == second


def test_verify_failure_exits_nonzero(tmp_path, monkeypatch):
    from neclab import verify as verify_mod

    def broken_suite(seed):
        return [verify_mod.CheckResult("always fails", False, "injected")]

    monkeypatch.setattr(verify_mod, "suite_commcx", broken_suite)
    rc = main(["verify", "commcx", "--out", str(tmp_path / "v.txt")])
    assert rc == 1
    assert "FAIL always fails" in (tmp_path / "v.txt").read_text()


def test_module_entrypoint_runs():
    proc = subprocess.run([sys.executable, "-m", "neclab", "demo", "superdense"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "decoded (1,1)" in proc.stdout
