"""Serialization: JSON reports, CSV time series and the field interchange format.

A field file is a CSV with header ``x,value`` and one row per grid point,
next to a sidecar JSON header ``{"n": ..., "period": ...}`` with the same stem.
"""
from __future__ import annotations

import csv
import dataclasses
import hashlib
import json
import math
from pathlib import Path

import numpy as np

from .spectral import Field, TorusGrid, TWO_PI

CSV_COLUMNS = (
    "N", "t", "norm_B1_inf1", "norm_ux_B0_inf1", "norm_ux_log", "norm_C01", "norm_E_B1",
    "yxi_min", "yxi_max", "blowup_flag",
)

DIAGNOSTIC_COLUMNS = (
    "N", "t", "norm_F_B1", "commutator_weighted", "commutator_ratio", "yxi_var_min",
    "yxi_var_max", "lagrangian_B1", "remainder_D", "proxy", "uncovered_fraction",
)


class FieldFileError(ValueError):
    pass


def fmt(x) -> str:
    """Shortest round-trip text for a float; integers and flags pass through."""
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def to_jsonable(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return to_jsonable(dataclasses.asdict(obj))
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    return obj


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_json(path: Path, obj) -> Path:
    path = Path(path)
    path.write_text(dumps(obj))
    return path


def sha256_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def write_manifest(output_dir: Path, command: str, params: dict, inputs=()) -> Path:
    """Record resolved parameters and content hashes of every input file."""
    hashes = {str(p): sha256_bytes(Path(p).read_bytes()) for p in inputs}
    from . import __version__
    body = {"command": command, "params": to_jsonable(params), "inputs": hashes,
            "version": __version__}
    body["input_hash"] = sha256_bytes(json.dumps(body, sort_keys=True).encode())
    return write_json(Path(output_dir) / "manifest.json", body)


def _write_rows(path: Path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])
    return path


def report_rows(report):
    for run in report.runs:
        s = run.series
        for i, t in enumerate(s["t"]):
            yield (run.N, t, s["B1_inf1"][i], s["ux_B0_inf1"][i], s["ux_log_B0"][i], s["C01"][i],
                   s["E_B1_inf1"][i], s["yxi_min"][i], s["yxi_max"][i], run.blown_up)


def diagnostic_rows(report):
    for run in report.runs:
        s = run.series
        for i, t in enumerate(s["t"]):
            yield (run.N, t, s["F_B1_inf1"][i], s["commutator_weighted"][i],
                   s["commutator_ratio"][i], s["yxi_var_min"][i], s["yxi_var_max"][i],
                   s["lagrangian_B1"][i], s["remainder_D"][i], s["proxy"][i], s["uncovered"][i])


def write_report(report, output_dir: Path) -> dict:
    """Write report.json, report.csv and diagnostics.csv into ``output_dir``."""
    out = Path(output_dir)
    return {
        "json": write_json(out / "report.json", report),
        "csv": _write_rows(out / "report.csv", CSV_COLUMNS, report_rows(report)),
        "diagnostics": _write_rows(out / "diagnostics.csv", DIAGNOSTIC_COLUMNS,
                                   diagnostic_rows(report)),
    }


def write_table(path: Path, rows: list, columns) -> Path:
    return _write_rows(path, columns, ([r[c] for c in columns] for r in rows))


# -- field files -------------------------------------------------------------------


def sidecar_path(path: Path) -> Path:
    return Path(path).with_suffix(".json")


def write_field(path: Path, u: Field) -> Path:
    path = Path(path)
    _write_rows(path, ("x", "value"), zip(u.grid.points, u.values))
    write_json(sidecar_path(path), {"n": u.grid.n, "period": u.grid.period})
    return path


def read_field(path: Path) -> Field:
    path = Path(path)
    header_path = sidecar_path(path)
    try:
        header = json.loads(header_path.read_text())
        n = int(header["n"])
        period = float(header["period"])
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise FieldFileError(f"bad or missing field header {header_path}: {exc}") from exc
    if not math.isclose(period, TWO_PI, rel_tol=1e-12):
        raise FieldFileError(f"only period 2*pi is supported, got {period}")
    try:
        grid = TorusGrid(n)
    except ValueError as exc:
        raise FieldFileError(str(exc)) from exc
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            head = next(reader)
            if [h.strip() for h in head] != ["x", "value"]:
                raise FieldFileError(f"expected header x,value, got {head}")
            rows = [(float(a), float(b)) for a, b in reader]
    except (OSError, ValueError, StopIteration) as exc:
        raise FieldFileError(f"cannot parse field file {path}: {exc}") from exc
    if len(rows) != n:
        raise FieldFileError(f"header says n={n} but file has {len(rows)} rows")
    data = np.array(rows)
    if not np.allclose(data[:, 0], grid.points, atol=1e-9, rtol=0):
        raise FieldFileError("x column does not match the uniform grid")
    if not np.all(np.isfinite(data[:, 1])):
        raise FieldFileError("field values must be finite")
    return Field(grid, data[:, 1])
