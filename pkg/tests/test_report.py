import json

import numpy as np
import pytest

from susylab.report import canonical_json, emit_report, strip_timing, write_curve_csv, write_curves


def test_floats_are_rounded_to_twelve_significant_digits():
    text = canonical_json({"x": 1.0 / 3.0})
    assert json.loads(text)["x"] == 0.333333333333


def test_keys_are_sorted():
    text = canonical_json({"b": 1, "a": 2})
    assert text.index('"a"') < text.index('"b"')


def test_numpy_scalars_and_arrays_are_plain_json():
    text = canonical_json({
        "i": np.int64(3),
        "f": np.float64(0.5),
        "arr": np.array([1.0, 2.0]),
        "flag": True,
    })
    data = json.loads(text)
    assert data == {"i": 3, "f": 0.5, "arr": [1.0, 2.0], "flag": True}


def test_complex_values_split_into_parts():
    data = json.loads(canonical_json({"z": 3.0 + 4.0j}))
    assert data["z"] == {"real": 3.0, "imag": 4.0}


def test_non_finite_floats_become_strings():
    data = json.loads(canonical_json({"bad": float("nan"), "big": float("inf")}))
    assert data["bad"] == "nan" and data["big"] == "inf"


def test_emit_and_strip_timing(tmp_path):
    report = {"a": 1.0, "timing": {"elapsed_seconds": 0.123}}
    path = tmp_path / "out" / "report.json"
    text = emit_report(report, str(path))
    assert path.read_text() == text
    assert "timing" not in strip_timing(report)
    assert canonical_json(strip_timing(report)) == canonical_json({"a": 1.0})


def test_canonical_json_is_deterministic():
    report = {"values": [0.1 + 0.2, 1e-17, -0.0], "name": "x"}
    assert canonical_json(report) == canonical_json(json.loads(canonical_json(report)) | {})


def test_curve_csv_shape(tmp_path):
    path = tmp_path / "curve.csv"
    x = np.linspace(0, 1, 11)
    write_curve_csv(str(path), ["x", "value"], [x, x**2])
    lines = path.read_text().strip().split("\n")
    assert lines[0] == "x,value"
    assert len(lines) == 12
    with pytest.raises(ValueError):
        write_curve_csv(str(path), ["x", "y"], [x, x[:-1]])


def test_write_curves_creates_named_files(tmp_path):
    x = np.linspace(0, 1, 5)
    paths = write_curves(str(tmp_path / "curves"), {
        "potential_minus": (["x", "value"], [x, x]),
        "psi_minus_0": (["x", "value"], [x, x**2]),
    })
    names = sorted(p.split("/")[-1] for p in paths)
    assert names == ["potential_minus.csv", "psi_minus_0.csv"]
