import csv
import io
import json
import math
import subprocess
import sys

import pytest

import entropylab.cli as cli
import entropylab.entropy as ent
from entropylab.cli import (EXIT_NONCONVERGED, EXIT_OK, EXIT_USAGE, EXIT_VERIFY, RunConfig,
                            UsageError, main, render, verification_checks, worker_count)
from entropylab.orthopoly import PollaczekParams


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_entropy_csv(capsys):
    code, out, _ = run(capsys, "entropy", "--lambda", "1", "--a", "0", "--n-list", "200")
    assert code == EXIT_OK
    assert "\r" not in out
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 1
    assert abs(float(rows[0]["E"]) + 1) < 0.02
    assert {"n", "E", "F", "G", "E_alt", "predicted_E", "predicted_G", "E_residual",
            "G_residual", "F_limit_residual"} <= set(rows[0])


def test_entropy_row_count_and_digits(capsys):
    code, out, _ = run(capsys, "entropy", "--lambda", "5", "--a", "5", "--n-max", "12")
    assert code == EXIT_OK
    lines = out.strip().split("\n")
    assert len(lines) == 13
    e = lines[1].split(",")[1]
    assert float(e) == float(format(float(e), ".17g"))


def test_entropy_json(capsys):
    code, out, _ = run(capsys, "entropy", "--lambda", "1", "--a", "1", "--n-list", "3,5",
                       "--format", "json", "--no-cross-check")
    assert code == EXIT_OK
    rows = [json.loads(line) for line in out.splitlines()]
    assert [r["n"] for r in rows] == [3, 5]
    assert rows[0]["E_alt"] is None


def test_render_csv_format():
    text = render([{"n": 1, "x": 0.1, "ok": True}], "csv")
    assert text == "n,x,ok\n1,0.10000000000000001,1\n"
    assert render([{"x": math.nan}], "json") == '{"x": null}\n'


@pytest.mark.parametrize("argv", [
    ["entropy", "--lambda", "-1"],
    ["entropy", "--n-max", "6000"],
    ["entropy", "--tol", "1e-20"],
    ["bogus"],
    ["entropy", "--n-list", "a,b"],
    ["mrs", "--lambda", "0.5", "--a", "0"],
])
def test_usage_errors(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == EXIT_USAGE


def test_run_config_invariants():
    with pytest.raises(UsageError):
        RunConfig(command="entropy", n_max=0)
    with pytest.raises(UsageError):
        RunConfig(command="entropy", tol=1e-14)
    cfg = RunConfig(command="entropy", n_list=(5, 2, 5))
    assert cfg.degrees == [2, 5]


def test_nonconvergence_exit_code(capsys, monkeypatch):
    real = ent.density_components

    def fake(n, params, cfg=None):
        m, e, g, err, _ = real(n, params, cfg)
        return m, e, g, err, False

    monkeypatch.setattr(ent, "density_components", fake)
    code, out, _ = run(capsys, "entropy", "--n-list", "4", "--no-cross-check")
    assert code == EXIT_NONCONVERGED
    assert out.strip().split("\n")[1].endswith(",0")


def test_mrs_command(capsys):
    code, out, _ = run(capsys, "mrs", "--lambda", "1.5", "--a", "0", "--n-max", "5")
    assert code == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 5
    for r in rows:
        assert abs(float(r["alpha_n"]) - float(r["closed_form"])) < 1e-12


def test_identities_command(capsys):
    code, out, _ = run(capsys, "identities", "--lambda", "5", "--a", "5", "--n-max", "20")
    assert code == EXIT_OK
    assert "gamma_shape" in out and "G_constant_chain" in out


def test_equilibrium_command(tmp_path, capsys):
    target = tmp_path / "eq.csv"
    code, _, _ = run(capsys, "equilibrium", "--lambda", "5", "--a", "5", "--n-list", "40",
                     "--output", str(target))
    assert code == EXIT_OK
    rows = list(csv.DictReader(target.open()))
    assert len(rows) == 65
    assert float(rows[0]["phi"]) == 0.0
    assert float(rows[-1]["phi"]) == pytest.approx(math.pi, abs=1e-6)


def test_figures_deterministic(tmp_path, capsys):
    outs = []
    for name in ("a", "b"):
        d = tmp_path / name
        code, _, _ = run(capsys, "figures", "--n-max", "8", "--output", str(d))
        assert code == EXIT_OK
        outs.append({p.name: p.read_bytes() for p in d.iterdir()})
    assert outs[0] == outs[1]
    series = outs[0]["entropy_series.csv"].decode().strip().split("\n")
    assert len(series) == 1 + 6 * 8


def test_thread_count_does_not_change_output(capsys, monkeypatch):
    monkeypatch.setenv("ENTROPYLAB_THREADS", "1")
    _, one, _ = run(capsys, "entropy", "--lambda", "2", "--a", "1", "--n-max", "6")
    monkeypatch.setenv("ENTROPYLAB_THREADS", "4")
    _, four, _ = run(capsys, "entropy", "--lambda", "2", "--a", "1", "--n-max", "6")
    assert one == four
    monkeypatch.setenv("ENTROPYLAB_THREADS", "x")
    with pytest.raises(UsageError):
        worker_count()


def test_verify_default(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == EXIT_OK
    assert "FAIL" not in out


def test_verify_out_of_range_skips(capsys):
    code, out, _ = run(capsys, "verify", "--lambda", "0.6", "--a", "1")
    assert code == EXIT_OK
    assert "SKIP" in out


def test_verify_loose_tolerance():
    checks = verification_checks(PollaczekParams(1, 1), tol=1e-3)
    gated = [c for c in checks if c.tolerance > 0]
    assert all(c.tolerance >= 1e-3 for c in gated)


def test_verify_reports_failure(capsys, monkeypatch):
    monkeypatch.setattr(cli.ent, "gamma_shape_closed_form", lambda p: 0.0)
    code, out, _ = run(capsys, "verify", "--lambda", "1", "--a", "1")
    assert code == EXIT_VERIFY
    assert "FAIL  gamma-shape" in out


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "entropylab", "mrs", "--lambda", "1",
                          "--a", "1", "--n-max", "2"], capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.startswith("n,alpha_n")
