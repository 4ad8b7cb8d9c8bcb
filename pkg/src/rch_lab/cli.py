"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 input or numerical setup failure,
3 a verdict failed.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import reporting
from .inflation import (
    ConfigurationError, InflationConfig, build_initial_data, commutator_diag, config_from_dict,
    grid_for, initial_data_norms, initial_data_table, run_sweep,
)
from .littlewood_paley import BesovIndex, FilterBankError, besov_log_norm, besov_norm, build_filter_bank
from .model import CoefficientError, compute_coefficients
from .solver import SolverConfig, integrate
from .spectral import Field, GridError, TorusGrid, differentiate

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_VERDICT = 0, 1, 2, 3

log = logging.getLogger("rch_lab")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _parse_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def parse_overrides(items) -> dict:
    out = {}
    for item in items or ():
        if "=" not in item:
            raise UsageError(f"override must look like key=value, got {item!r}")
        key, value = item.split("=", 1)
        out[key.strip()] = _parse_value(value.strip())
    return out


def parse_n_list(text: str) -> list:
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return list(range(int(lo), int(hi) + 1))
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"bad --n-list {text!r}") from exc


def load_config(path) -> dict:
    if path is None:
        return {}
    try:
        cfg = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigurationError("config file must hold a JSON object")
    return cfg


def _prepare_output(args) -> Path:
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


# -- commands -------------------------------------------------------------------------


def cmd_coeffs(args) -> int:
    coeffs = compute_coefficients(args.omega)
    text = reporting.dumps(coeffs.as_dict())
    sys.stdout.write(text)
    out = _prepare_output(args)
    (out / "coeffs.json").write_text(text)
    reporting.write_manifest(out, "coeffs", {"omega": args.omega})
    return EXIT_OK


def cmd_initial_data(args) -> int:
    grid = grid_for(args.N)
    bank = build_filter_bank(grid)
    u0 = build_initial_data(args.N, grid, bank)
    out = _prepare_output(args)
    reporting.write_field(out / f"u0_N{args.N}.csv", u0)
    norms = initial_data_norms(u0, bank)
    reporting.write_json(out / f"u0_N{args.N}_norms.json", {"N": args.N, "n": grid.n, **norms})
    reporting.write_manifest(out, "initial-data", {"N": args.N, "n": grid.n})
    sys.stdout.write(reporting.dumps({"N": args.N, **norms}))
    return EXIT_OK


SOLVE_DEFAULTS = {
    "n": 64, "omega": 0.0, "dt": 1e-3, "t_end": 1.0, "snapshot_stride": 10,
    "dealias_fraction": 2.0 / 3.0, "blowup_threshold": 1e6,
    # list of [k, cos amplitude, sin amplitude]
    "modes": [[1, 0.1, 0.0]],
}


def _solve_initial(params, field_file):
    if field_file is not None:
        return reporting.read_field(field_file)
    grid = TorusGrid(int(params["n"]))
    x = grid.points
    values = np.zeros_like(x)
    for k, a, b in params["modes"]:
        values += a * np.cos(k * x) + b * np.sin(k * x)
    return Field(grid, values)


def cmd_solve(args) -> int:
    params = dict(SOLVE_DEFAULTS)
    params.update(load_config(args.config))
    params.update(parse_overrides(args.set))
    unknown = set(params) - set(SOLVE_DEFAULTS)
    if unknown:
        raise ConfigurationError(f"unknown solve keys: {sorted(unknown)}")
    u0 = _solve_initial(params, args.field)
    coeffs = compute_coefficients(params["omega"])
    cfg = SolverConfig(dt=float(params["dt"]), t_end=float(params["t_end"]),
                       dealias_fraction=float(params["dealias_fraction"]),
                       blowup_threshold=float(params["blowup_threshold"]),
                       snapshot_stride=int(params["snapshot_stride"]))
    traj = integrate(u0, coeffs, cfg)
    out = _prepare_output(args)
    rows = []
    for t, u in zip(traj.times, traj.states):
        ux = differentiate(u)
        energy = 2.0 * math.pi * float(np.mean(u.values**2 + ux.values**2))
        rows.append({"t": t, "mean": u.mean(), "energy_H1": energy,
                     "u_sup": u.max_abs(), "ux_sup": ux.max_abs()})
    reporting.write_table(out / "solve_summary.csv", rows, ("t", "mean", "energy_H1", "u_sup", "ux_sup"))
    if traj.states:
        reporting.write_field(out / "final_state.csv", traj.states[-1])
    reporting.write_json(out / "solve.json", {
        "params": params, "blown_up": traj.blown_up, "blowup_time": traj.blowup_time,
        "final_time": traj.times[-1] if traj.times else None, "snapshots": len(traj.times),
    })
    inputs = [p for p in (args.config, args.field) if p]
    if args.field:
        inputs.append(reporting.sidecar_path(args.field))
    reporting.write_manifest(out, "solve", params, inputs)
    return EXIT_OK


def _inflation_config(args, default_n_list) -> InflationConfig:
    raw = load_config(args.config)
    raw.update(parse_overrides(args.set))
    if args.n_list:
        raw["N_list"] = parse_n_list(args.n_list)
    raw.setdefault("N_list", default_n_list)
    if args.omega is not None:
        raw["omega"] = args.omega
    if getattr(args, "workers", None):
        raw["workers"] = args.workers
    return config_from_dict(raw)


def cmd_inflate(args) -> int:
    cfg = _inflation_config(args, list(InflationConfig().N_list))
    out = _prepare_output(args)
    reporting.write_manifest(out, "inflate", reporting.to_jsonable(cfg), [args.config] if args.config else [])
    report = run_sweep(cfg)
    reporting.write_report(report, out)
    for run in report.runs:
        status = "FAILED" if run.failed else "ok"
        log.info("N=%d peak ratio %s, y_xi in [%s, %s] %s", run.N, run.peak_ratio,
                 run.yxi_min, run.yxi_max, status)
    sys.stdout.write(reporting.dumps({"verdicts": report.verdicts, "fits": report.fits}))
    failed = any(r.failed for r in report.runs) or not report.passed
    return EXIT_VERDICT if failed else EXIT_OK


def cmd_sweep(args) -> int:
    Ns = parse_n_list(args.n_list) if args.n_list else list(range(6, 12))
    out = _prepare_output(args)
    reporting.write_manifest(out, "sweep", {"N_list": Ns})
    table = initial_data_table(Ns)
    reporting.write_json(out / "scaling.json", table)
    reporting.write_table(out / "scaling.csv", table["rows"],
                          ("N", "n", "B1_inf1", "log_B1", "ux2_B0_inf1", "E_B1_inf1", "C01"))
    sys.stdout.write(reporting.dumps({"fits": table["fits"], "verdicts": table["verdicts"]}))
    return EXIT_VERDICT if any(v is False for v in table["verdicts"].values()) else EXIT_OK


def cmd_diag(args) -> int:
    u = reporting.read_field(args.field)
    bank = build_filter_bank(u.grid)
    ux = differentiate(u)
    cd = commutator_diag(u, bank)
    result = {
        "n": u.grid.n,
        "j_max": bank.j_max,
        "partition_residual": bank.partition_residual(),
        "norms": {
            "B0_inf1": besov_norm(u, BesovIndex(0.0), bank),
            "B1_inf1": besov_norm(u, BesovIndex(1.0), bank),
            "B0_inf_inf": besov_norm(u, BesovIndex(0.0, r=math.inf), bank),
            "B0_22": besov_norm(u, BesovIndex(0.0, p=2, r=2), bank),
            "log_B0": besov_log_norm(u, 0.0, bank),
            "log_B1": besov_log_norm(u, 1.0, bank),
            "ux_B0_inf1": besov_norm(ux, BesovIndex(0.0), bank),
        },
        "commutator": cd,
    }
    out = _prepare_output(args)
    reporting.write_json(out / "diagnostics.json", result)
    reporting.write_manifest(out, "diag", {"field": str(args.field)},
                             [args.field, reporting.sidecar_path(args.field)])
    sys.stdout.write(reporting.dumps(result))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rch-lab", description="Rotation Camassa-Holm norm-inflation laboratory")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--output-dir", default="rch-output")
        return sp

    sp = common(sub.add_parser("coeffs", help="model coefficients for a rotation speed"))
    sp.add_argument("--omega", type=float, required=True)
    sp.set_defaults(func=cmd_coeffs)

    sp = common(sub.add_parser("initial-data", help="write the initial datum for one N"))
    sp.add_argument("--N", type=int, required=True)
    sp.set_defaults(func=cmd_initial_data)

    sp = common(sub.add_parser("solve", help="integrate from a field file or a mode list"))
    sp.add_argument("--config")
    sp.add_argument("--field", help="field CSV (sidecar JSON header next to it)")
    sp.add_argument("--set", action="append", metavar="KEY=VALUE")
    sp.set_defaults(func=cmd_solve)

    for name, helptext, func in (
        ("inflate", "run the norm-inflation experiment", cmd_inflate),
        ("sweep", "initial-data scaling table across N", cmd_sweep),
    ):
        sp = common(sub.add_parser(name, help=helptext))
        sp.add_argument("--config")
        sp.add_argument("--n-list", help="comma list or lo..hi")
        sp.add_argument("--omega", type=float)
        sp.add_argument("--workers", type=int)
        sp.add_argument("--set", action="append", metavar="KEY=VALUE")
        sp.set_defaults(func=func)

    sp = common(sub.add_parser("diag", help="Besov and commutator diagnostics of a field file"))
    sp.add_argument("--field", required=True)
    sp.set_defaults(func=cmd_diag)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"rch-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConfigurationError, CoefficientError, reporting.FieldFileError, GridError,
            FilterBankError, ValueError, OSError) as exc:
        print(f"rch-lab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
