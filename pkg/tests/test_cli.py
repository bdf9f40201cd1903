import csv
import subprocess
import sys

import pytest

from windguide.cli import EXIT_CODES, TRAJECTORY_HEADER, main

FAST = ["--set", "scenario.flight_time=8", "--set", "sweep.d_psi0_deg=120"]


def rows(path):
    with open(path, newline="") as handle:
        return list(csv.reader(handle))


def test_validate_config_writes_nothing(tmp_path, capsys):
    assert main(["validate-config", "--out", str(tmp_path / "out")]) == 0
    assert not (tmp_path / "out").exists()
    assert "config ok" in capsys.readouterr().out


def test_run_writes_trajectory_and_metrics(tmp_path):
    assert main(["run", "--out", str(tmp_path), "--set", "scenario.flight_time=10"]) == 0
    traj = rows(tmp_path / "trajectory.csv")
    assert tuple(traj[0]) == TRAJECTORY_HEADER
    assert len(traj) == 1 + 11
    metrics = rows(tmp_path / "metrics.csv")
    assert metrics[0] == ["kind", "psi0_deg", "omega_w", "p_bar_avg", "p_bar_avg_reference", "benefit"]
    assert len(metrics) == 2 and metrics[1][0] == "adjusted"


def test_nine_significant_digits(tmp_path):
    main(["run", "--out", str(tmp_path), "--set", "scenario.flight_time=4"])
    for cell in rows(tmp_path / "trajectory.csv")[1]:
        digits = cell.lstrip("-").split("e")[0].replace(".", "").lstrip("0")
        assert len(digits) <= 9 and "," not in cell


def test_frequency_sweep_eight_rows(tmp_path):
    assert main(["frequency-sweep", "--out", str(tmp_path)] + FAST) == 0
    sweep = rows(tmp_path / "sweep.csv")
    assert len(sweep) == 9
    assert sweep[0][:2] == ["omega_w", "p_bar_reference"]
    assert [float(r[0]) for r in sweep[1:]] == sorted(float(r[0]) for r in sweep[1:])
    svg = (tmp_path / "benefit.svg").read_text()
    assert svg.lstrip().startswith("<?xml") and "<svg" in svg


def test_heading_sweep(tmp_path):
    assert main(["heading-sweep", "--out", str(tmp_path)] + FAST) == 0
    assert len(rows(tmp_path / "sweep.csv")) == 1 + 3


def test_seeded_runs_byte_identical(tmp_path):
    args = ["--seed", "42", "--set", "wind.kind=sinusoidal+stochastic", "--set", "wind.ou_sigma=1.0"] + FAST
    for name in ("a", "b"):
        assert main(["frequency-sweep", "--out", str(tmp_path / name)] + args) == 0
        assert main(["run", "--out", str(tmp_path / name / "run")] + args) == 0
    for rel in ("sweep.csv", "metrics.csv", "benefit.svg", "run/trajectory.csv", "run/metrics.csv"):
        assert (tmp_path / "a" / rel).read_bytes() == (tmp_path / "b" / rel).read_bytes()


def test_env_var_output_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("WINDGUIDE_OUT", str(tmp_path / "env"))
    assert main(["run", "--set", "scenario.flight_time=4"]) == 0
    assert (tmp_path / "env" / "metrics.csv").exists()
    assert main(["run", "--out", str(tmp_path / "flag"), "--set", "scenario.flight_time=4"]) == 0
    assert (tmp_path / "flag" / "metrics.csv").exists()


def test_config_error_reports_key_and_line(tmp_path, capsys):
    cfg = tmp_path / "bad.ini"
    cfg.write_text("[wind]\nw_m = 2\ngusty = yes\n")
    assert main(["validate-config", "--config", str(cfg)]) == EXIT_CODES["config-error"]
    err = capsys.readouterr().err
    assert err.startswith("windguide: error[config-error]:")
    assert "wind.gusty" in err and "line 3" in err


def test_missing_config_is_io_error(tmp_path, capsys):
    assert main(["run", "--config", str(tmp_path / "nope.ini")]) == EXIT_CODES["io-error"]
    assert "error[io-error]" in capsys.readouterr().err


def test_simulation_error(tmp_path, capsys):
    code = main(["run", "--out", str(tmp_path), "--set", "scenario.flight_time=4",
                 "--set", "scenario.v0=-5"])
    assert code == EXIT_CODES["simulation-error"]
    assert "error[simulation-error]" in capsys.readouterr().err


def test_usage_error():
    with pytest.raises(SystemExit) as info:
        main(["fly"])
    assert info.value.code == EXIT_CODES["usage-error"]


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "windguide", "validate-config"],
                          capture_output=True, text=True, cwd=tmp_path)
    assert proc.returncode == 0 and "config ok" in proc.stdout
