import csv
import json
import subprocess

import pytest

import irs_opsim as m


def run(cli, *args):
    return subprocess.run([cli, *args], capture_output=True, text=True)


def test_list(cli):
    out = run(cli, "list")
    assert out.returncode == 0
    for name in m.builtin_scenario_names():
        assert name in out.stdout


def test_analytic_matches_module(cli):
    out = run(cli, "analytic", "--law", "theorem1", "--set", "N=8", "K=1000", "snr_db=0", "Q=1", "zeta=0.01")
    assert out.returncode == 0
    assert float(out.stdout) == pytest.approx(m.rate_theorem1(0.0, 8, 1000, q=1, zeta=0.01), rel=1e-9)


def test_run_outputs_and_determinism(cli, tmp_path):
    args = ["run", "--scenario", "fig3", "--trials", "2", "--set", "slots=5"]
    assert run(cli, *args, "--out", str(tmp_path / "a")).returncode == 0
    assert run(cli, *args, "--out", str(tmp_path / "b")).returncode == 0
    a = (tmp_path / "a" / "fig3.csv").read_text()
    assert a == (tmp_path / "b" / "fig3.csv").read_text()
    rows = list(csv.DictReader(a.splitlines()))
    assert tuple(rows[0].keys()) == m.CSV_COLUMNS
    assert {r["comparator"] for r in rows} >= {"sim:qpilot", "analytic:theorem1"}
    manifest = json.loads((tmp_path / "a" / "fig3.manifest.json").read_text())
    assert manifest["csv"] == "fig3.csv"
    assert manifest["columns"] == list(m.CSV_COLUMNS)
    assert manifest["scenario"]["name"] == "fig3"
    assert manifest["assumptions"]


def test_scenario_files_validate(cli, scenarios_dir):
    files = sorted(scenarios_dir.glob("*.json"))
    assert files
    for f in files:
        out = run(cli, "validate", "--config", str(f))
        assert out.returncode == 0, out.stderr


def test_exit_codes(cli, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "name": "bad",\n  "scheme": "qpilot",\n  "Q": 100,\n  "zeta": 0.01\n}\n')
    out = run(cli, "validate", "--config", str(bad))
    assert out.returncode == 2
    assert "bad.json:" in out.stderr
    assert run(cli, "run", "--scenario", "nope").returncode == 2
    assert run(cli, "list", "--frobnicate").returncode == 2
