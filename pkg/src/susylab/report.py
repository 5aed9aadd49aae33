"""Deterministic report serialization and CSV curve dumps.

Reports are emitted as JSON with sorted keys and floating-point values
rounded to 12 significant digits, so identical runs produce byte-identical
files (the volatile ``timing`` block aside).
"""
from __future__ import annotations

import json
import os

import numpy as np

SCHEMA_VERSION = 1


def _sanitize(obj):
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not np.isfinite(x):
            return repr(x)
        if x == 0.0:
            return 0.0
        return float(f"{x:.12g}")
    if isinstance(obj, (complex, np.complexfloating)):
        return {"real": _sanitize(obj.real), "imag": _sanitize(obj.imag)}
    if isinstance(obj, np.ndarray):
        return [_sanitize(v) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    if obj is None or isinstance(obj, str):
        return obj
    return str(obj)


def canonical_json(report: dict) -> str:
    return json.dumps(_sanitize(report), sort_keys=True, indent=2) + "\n"


def emit_report(report: dict, path: str) -> str:
    """Write the canonical JSON report; returns the serialized text."""
    text = canonical_json(report)
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return text


def strip_timing(report: dict) -> dict:
    return {k: v for k, v in report.items() if k != "timing"}


def write_curve_csv(path: str, header: list[str], columns: list) -> None:
    """One curve file: a header row then n_points rows of '%.12g' values."""
    cols = [np.asarray(c) for c in columns]
    n = cols[0].shape[0]
    if any(c.shape != (n,) for c in cols):
        raise ValueError("all curve columns must share the grid length")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for i in range(n):
            fh.write(",".join(f"{float(c[i]):.12g}" for c in cols) + "\n")


def write_curves(csv_dir: str, curves: dict) -> list[str]:
    """Write every named curve as <name>.csv with columns (x, ...).

    ``curves`` maps name -> (header, columns). Returns the written paths.
    """
    os.makedirs(csv_dir, exist_ok=True)
    written = []
    for name, (header, columns) in curves.items():
        path = os.path.join(csv_dir, f"{name}.csv")
        write_curve_csv(path, header, columns)
        written.append(path)
    return written
