import json
import os

import pytest

from susylab.cli import main

SMALL_OSC = {
    "scenario_id": "cli-osc",
    "superpotential": {"variant": "oscillator", "omega": 2.0},
    "grid": {"domain_kind": "full_line", "x_min": -10.0, "x_max": 10.0, "n_points": 1201},
    "levels": 2,
    "phase": "unbroken",
}


@pytest.fixture()
def config_file(tmp_path):
    path = tmp_path / "osc.json"
    path.write_text(json.dumps(SMALL_OSC))
    return str(path)


def test_scenario_run_builtin_writes_report(tmp_path, capsys):
    out = tmp_path / "winding.json"
    code = main(["--json", str(out), "scenario", "run", "winding"])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["scenario_id"] == "winding"
    assert "winding: PASS" in capsys.readouterr().out.replace("verdict", "")


def test_scenario_run_config_file(config_file, tmp_path):
    out = tmp_path / "r.json"
    code = main(["--json", str(out), "scenario", "run", config_file])
    assert code == 0
    assert json.loads(out.read_text())["scenario_id"] == "cli-osc"


def test_unknown_builtin_exits_two(config_file):
    with pytest.raises(SystemExit) as exc:
        main(["scenario", "run", "definitely-not-a-scenario"])
    assert exc.value.code == 2


def test_verdict_failure_exits_one_after_emitting_report(tmp_path):
    bad = dict(SMALL_OSC, tolerances={"residual": 1e-18})
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    out = tmp_path / "failed-report.json"
    assert main(["--json", str(out), "scenario", "run", str(path)]) == 1
    assert json.loads(out.read_text())["verdicts"]["relations"] is False


def test_numerical_failure_exits_three(tmp_path):
    wrong_phase = dict(SMALL_OSC, phase="broken")
    path = tmp_path / "wrong.json"
    path.write_text(json.dumps(wrong_phase))
    assert main(["scenario", "run", str(path)]) == 3


def test_partners_with_csv(config_file, tmp_path):
    csv_dir = tmp_path / "curves"
    code = main(["--csv-dir", str(csv_dir), "partners", "--config", config_file])
    assert code == 0
    files = sorted(os.listdir(csv_dir))
    assert files == ["potential_minus.csv", "potential_plus.csv", "superpotential.csv"]
    lines = (csv_dir / "potential_minus.csv").read_text().strip().split("\n")
    assert len(lines) == 1201 + 1  # header + one row per grid point


def test_spectrum_levels_override(config_file, tmp_path):
    out = tmp_path / "spec.json"
    code = main(["--json", str(out), "spectrum", "--config", config_file, "--levels", "3"])
    assert code == 0
    report = json.loads(out.read_text())
    assert len(report["spectra"]["minus"]["energies"]) == 3


def test_gozzi_subcommand(config_file):
    assert main(["gozzi", "--config", config_file]) == 0


def test_deform_lambda_override(config_file, tmp_path):
    out = tmp_path / "d.json"
    code = main(["--json", str(out), "deform", "--config", config_file,
                 "--lambda", "1.0,10.0"])
    assert code == 0
    report = json.loads(out.read_text())
    assert [e["lambda"] for e in report["deformation"]["entries"]] == [1.0, 10.0]


def test_winding_subcommand(tmp_path):
    out = tmp_path / "w.json"
    assert main(["--json", str(out), "winding", "--n", "3"]) == 0
    report = json.loads(out.read_text())
    assert [s["rounded"] for s in report["winding"]["states"]] == [0, 1, 2, 3]


def test_missing_config_file_exits_two():
    with pytest.raises(SystemExit) as exc:
        main(["gozzi", "--config", "/nonexistent/config.json"])
    assert exc.value.code == 2


def test_config_outputs_block_drives_file_writes(tmp_path):
    cfg = dict(
        SMALL_OSC,
        outputs={
            "report_path": str(tmp_path / "auto" / "report.json"),
            "csv_dir": str(tmp_path / "auto" / "curves"),
        },
    )
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    assert main(["scenario", "run", str(path)]) == 0
    assert (tmp_path / "auto" / "report.json").exists()
    assert (tmp_path / "auto" / "curves" / "psi_minus_0.csv").exists()


def test_run_all_writes_one_report_per_scenario(tmp_path):
    out_dir = tmp_path / "reports"
    code = main(["--json", str(out_dir), "scenario", "run-all"])
    assert code == 0
    names = sorted(os.listdir(out_dir))
    assert names == [
        "deform-sweep.json", "ho-unbroken.json", "radial-broken.json",
        "radial-unbroken-1.json", "radial-unbroken-2.json", "winding.json",
    ]
