import csv
import json

import numpy as np
import pytest
import yaml

from kdv_reservoir.cli import main
from kdv_reservoir.config import load_config
from kdv_reservoir.reservoir import encode_case
from kdv_reservoir.solver import read_trajectory_csv


def _write_yaml(path, raw):
    path.write_text(yaml.safe_dump(raw, sort_keys=False))
    return path


def test_simulate_writes_initial_condition(coarse_config_file, tmp_path, capsys):
    out = tmp_path / "traj.csv"
    code = main(["simulate", "--config", str(coarse_config_file), "--case", "0,0",
                 "--t-end", "2", "--every", "1", "--out", str(out)])
    assert code == 0
    x, t, u = read_trajectory_csv(out)
    np.testing.assert_array_equal(t, [0.0, 1.0, 2.0])
    cfg = load_config(coarse_config_file).gate
    u0 = encode_case(cfg, (False, False))
    np.testing.assert_allclose(x, cfg.grid.x, rtol=1e-9)
    np.testing.assert_allclose(u[0], u0.values, rtol=1e-9, atol=1e-12)
    assert "drift" in capsys.readouterr().out


def test_simulate_rejects_bad_case(coarse_config_file, tmp_path):
    out = tmp_path / "traj.csv"
    assert main(["simulate", "--config", str(coarse_config_file), "--case", "1,0,1",
                 "--out", str(out)]) == 1
    assert main(["simulate", "--config", str(coarse_config_file), "--case", "maybe,0",
                 "--out", str(out)]) == 1
    assert not out.exists()


def test_malformed_config_exits_1_without_output(tmp_path, capsys):
    bad = tmp_path / "bad.yaml"
    bad.write_text("grid: {x_min: -64, x_max: [\n")
    out = tmp_path / "report.json"
    assert main(["gate", "--config", str(bad), "--out", str(out)]) == 1
    assert not out.exists()
    assert "bad.yaml:" in capsys.readouterr().err


def test_usage_error_exits_1(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["sweep", "--param", "gravity", "--range", "1:2:1", "--out", "x.csv"])
    assert exc.value.code == 1


def test_gate_report_is_deterministic(coarse_config_file, tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["gate", "--config", str(coarse_config_file), "--out", str(a)]) == 0
    printed = capsys.readouterr().out
    assert "accuracy 100%" in printed
    assert main(["gate", "--config", str(coarse_config_file), "--out", str(b), "--threads", "2"]) == 0
    assert a.read_bytes() == b.read_bytes()
    report = json.loads(a.read_text())
    assert report["status"] == "ok" and report["accuracy"] == 1.0
    assert report["determinant"] < 0
    assert report["config"]["grid"]["n_points"] == 1024


def test_gate_timings_flag(coarse_config_file, tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["gate", "--config", str(coarse_config_file), "--out", str(out), "--timings"]) == 0
    assert json.loads(out.read_text())["timings"]["simulation_s"] > 0


def test_gate_singular_before_collision(experiment, tmp_path, capsys):
    # before any collision every case reads the bare soliton tail, so X is singular;
    # this needs the reference grid, coarse grids leave cond just under the threshold
    raw = yaml.safe_load(yaml.safe_dump(experiment.echo()))
    raw["detection"]["times"] = [1.0, 2.0, 3.0, 4.0]
    cfg = _write_yaml(tmp_path / "early.yaml", raw)
    out = tmp_path / "r.json"
    assert main(["gate", "--config", str(cfg), "--out", str(out)]) == 2
    report = json.loads(out.read_text())
    assert report["status"] == "error"
    assert "w_out" not in report


def test_sweep_detection_point(coarse_config_file, tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    assert main(["sweep", "--config", str(coarse_config_file), "--param", "x_D",
                 "--range", "30:70:5", "--out", str(out)]) == 0
    with open(out) as fh:
        rows = list(csv.DictReader(fh))
    assert [float(r["value"]) for r in rows] == [30.0 + 5 * i for i in range(9)]
    at50 = next(r for r in rows if float(r["value"]) == 50.0)
    assert at50["status"] == "ok" and float(at50["accuracy"]) == 1.0


def test_sweep_empty_range(coarse_config_file, tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    assert main(["sweep", "--config", str(coarse_config_file), "--param", "x_D",
                 "--range", "70:30:5", "--out", str(out)]) == 1
    assert not out.exists()


def test_sweep_zero_amplitude_is_singular(coarse_config_file, tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    assert main(["sweep", "--config", str(coarse_config_file), "--param", "epsilon_true",
                 "--range", "0,0.25", "--out", str(out)]) == 0
    with open(out) as fh:
        rows = {float(r["value"]): r for r in csv.DictReader(fh)}
    assert rows[0.0]["status"] == "singular"
    assert rows[0.25]["status"] == "ok"


def test_convert_units_table(tmp_path, capsys):
    out = tmp_path / "units.json"
    assert main(["convert-units", "--out", str(out)]) == 0
    text = capsys.readouterr().out
    line = next(l for l in text.splitlines() if l.startswith("shallow-water speed"))
    assert "NO" in line
    rows = json.loads(out.read_text())
    assert all(r["matches"] for r in rows if r["quantity"] != "shallow-water speed")


def test_convert_single_value(capsys):
    assert main(["convert-units", "--value", "1.3333333333333333", "--kind", "velocity"]) == 0
    assert float(capsys.readouterr().out) == pytest.approx(4 / 3)
    assert main(["convert-units", "--value", "433", "--kind", "wavenumber", "--to-adimensional"]) == 0
    assert float(capsys.readouterr().out) == pytest.approx(0.433)
    assert main(["convert-units", "--value", "1"]) == 1
