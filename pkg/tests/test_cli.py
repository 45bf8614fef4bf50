"""Command-line interface: exit codes, precedence, deterministic output.

Commands run in-process through main(argv); every invocation writes into
a pytest-provided temporary directory.
"""

from __future__ import annotations

import json
import os

import pytest

from musselbed.cli import (EXIT_HYPOTHESIS, EXIT_IO, EXIT_NUMERICAL,
                           EXIT_OK, EXIT_USAGE, main)

BASE = ["--r", "2", "--alpha", "0.1", "--gamma", "0.5"]


def _run(argv):
    return main(argv)


def test_tau_star_report_contains_reference_delay(tmp_path, capsys):
    code = _run(["tau-star", *BASE, "--out", str(tmp_path)])
    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert "2.35445346214" in out
    report = json.loads((tmp_path / "tau_star_report.json").read_text())
    assert report["tau_star"] == pytest.approx(2.35445346214238, abs=1e-9)
    assert report["crossing_modes"] == [0]
    table = (tmp_path / "critical_delays.csv").read_text().splitlines()
    assert table[0] == "n,j,omega,tau,transversality"
    assert len(table) == 2


def test_classify_reports_boundary_stable_without_coexistence(tmp_path,
                                                              capsys):
    code = _run(["classify", "--r", "0.5", "--alpha", "0.1", "--gamma",
                 "0.5", "--out", str(tmp_path)])
    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert "bare-sediment state (0, 1): stable" in out
    report = json.loads((tmp_path / "classify_report.json").read_text())
    assert report["bare_state_stability"] == "stable"
    assert report["hypotheses"]["h1"] is False
    assert "equilibrium" not in report


def test_classify_reports_coexistence_analysis(tmp_path):
    code = _run(["classify", *BASE, "--out", str(tmp_path)])
    assert code == EXIT_OK
    report = json.loads((tmp_path / "classify_report.json").read_text())
    assert report["equilibrium"]["m"] == pytest.approx(0.125, abs=1e-9)
    assert report["pattern_analysis"]["verdict"] == "stable"


def test_missing_config_exits_io_without_partial_output(tmp_path):
    out_dir = tmp_path / "results"
    code = _run(["tau-star", "--config", str(tmp_path / "absent.json"),
                 "--out", str(out_dir)])
    assert code == EXIT_IO
    assert not out_dir.exists()


def test_malformed_config_reports_line_and_column(tmp_path, capsys):
    cfg = tmp_path / "broken.json"
    cfg.write_text('{"params": {"r": 2.0,,}}')
    code = _run(["classify", "--config", str(cfg), "--out", str(tmp_path)])
    assert code == EXIT_USAGE
    err = capsys.readouterr().err
    assert "line 1 column" in err


def test_hypothesis_violation_exit_code(tmp_path):
    code = _run(["tau-star", "--r", "0.5", "--alpha", "0.1", "--gamma",
                 "0.5", "--out", str(tmp_path)])
    assert code == EXIT_HYPOTHESIS


def test_invalid_parameter_exit_code(tmp_path):
    code = _run(["classify", "--r", "2", "--alpha", "-0.1", "--gamma",
                 "0.5", "--out", str(tmp_path)])
    assert code == EXIT_USAGE


def test_missing_required_parameters_exit_code(tmp_path):
    code = _run(["classify", "--r", "2", "--out", str(tmp_path)])
    assert code == EXIT_USAGE


def test_precedence_config_then_set_then_flag(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"params": {"r": 1.5, "alpha": 0.1,
                                          "gamma": 0.5}}))
    out_a = tmp_path / "a"
    code = _run(["classify", "--config", str(cfg),
                 "--set", "params.r=2.0", "--out", str(out_a)])
    assert code == EXIT_OK
    got = json.loads((out_a / "classify_report.json").read_text())
    assert got["params"]["r"] == 2.0

    out_b = tmp_path / "b"
    code = _run(["classify", "--config", str(cfg),
                 "--set", "params.r=2.0", "--r", "3.0", "--out",
                 str(out_b)])
    assert code == EXIT_OK
    got = json.loads((out_b / "classify_report.json").read_text())
    assert got["params"]["r"] == 3.0


def test_unknown_config_parameter_is_rejected(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"params": {"r": 2.0, "alpha": 0.1,
                                          "gamma": 0.5, "bogus": 1}}))
    code = _run(["classify", "--config", str(cfg), "--out",
                 str(tmp_path / "out")])
    assert code == EXIT_USAGE


def test_repeated_runs_are_byte_identical(tmp_path):
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    for out in (out_a, out_b):
        assert _run(["tau-star", *BASE, "--out", str(out)]) == EXIT_OK
    for name in ("tau_star_report.json", "critical_delays.csv"):
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes()


def test_hopf_curve_outputs_window(tmp_path, capsys):
    code = _run(["hopf-curve", "--r", "2", "--alpha", "0.45", "--gamma",
                 "8", "--out", str(tmp_path)])
    assert code == EXIT_OK
    report = json.loads((tmp_path / "hopf_report.json").read_text())
    rs = [pt["r"] for pt in report["points"]]
    assert rs[0] == pytest.approx(1.0865, abs=1e-3)
    assert rs[1] == pytest.approx(1.7286, abs=1e-3)


def test_normal_form_report_values(tmp_path):
    code = _run(["normal-form", *BASE, "--out", str(tmp_path)])
    assert code == EXIT_OK
    report = json.loads((tmp_path / "normal_form_report.json").read_text())
    assert report["c1"]["re"] == pytest.approx(-2.2491276, abs=1e-5)
    assert report["c1"]["im"] == pytest.approx(-2.0316433, abs=1e-5)
    assert report["direction"] == "forward"
    assert report["orbit_stability"] == "stable"
    assert report["mu2"] > 0.0
    assert report["beta2"] < 0.0


def test_simulate_ode_writes_expected_files(tmp_path, capsys):
    code = _run(["simulate", *BASE, "--tau", "3.6", "--ode",
                 "--t-end", "150", "--out", str(tmp_path)])
    assert code == EXIT_OK
    names = sorted(os.listdir(tmp_path))
    assert names == ["fields.csv", "orbit_summary.json",
                     "plot_timeseries.py", "timeseries.csv"]
    header = (tmp_path / "timeseries.csv").read_text().splitlines()[0]
    assert header == "t,mean_m,mean_a,min_m,max_m,energy"
    summary = json.loads((tmp_path / "orbit_summary.json").read_text())
    assert set(summary) >= {"is_periodic", "period", "amplitude_m",
                            "spatial_inhomogeneity"}


def test_verify_subcommand_reports_all_checks_passing(tmp_path, capsys):
    code = _run(["verify", *BASE, "--draws", "5", "--out", str(tmp_path)])
    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert "FAIL" not in out
    matrix = (tmp_path / "verify_matrix.csv").read_text().splitlines()
    assert matrix[0] == "check,status,detail"
    assert len(matrix) == 6
    assert all(",pass," in line for line in matrix[1:])
