"""Command-line front end: every experiment as a reproducible CSV run.

Output contract (consumed by the plotting companion and by spreadsheets):
the first line of every CSV is a manifest comment

    # {"command": ..., "config": {...resolved config...}, "version": ...}

followed by a header row and data rows. Floats are written with 12
significant digits, NaN as an empty cell. Runs are seedless and
deterministic: the same resolved config produces byte-identical output.

Configuration precedence is defaults < --config file (JSON) < explicit
flags. Grid-valued options (--lambda / --kappa on the sweep commands)
accept a single number or "min:max:count" for a uniform grid; in a config
file they may also be a list of values.

Failures print one machine-readable JSON line to stderr and exit nonzero.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys

import numpy as np

from . import __version__
from .basis import BasisSpec
from .models import JunctionParams, ModelParams, build_grm, build_grm_rwa
from .perturbation import ResonanceSpec, effective_coupling, path_sum_coupling
from .spectrum import default_cutoff, default_scan_window, eigendecompose, error_grid
from .dynamics import junction_experiment

DEFAULTS = {
    "scan-resonance": {
        "n": 3,
        "n0": 0,
        "rwa": False,
        "lambda": 0.05,
        "kappa": "0.005:0.1:20",
        "cutoff": None,
        "window_min": None,
        "window_max": None,
    },
    "error-grid": {
        "n": 3,
        "n0": 0,
        "rwa": False,
        "lambda": "0.005:0.1:11",
        "kappa": "0.005:0.1:11",
        "cutoff": None,
        "window_min": None,
        "window_max": None,
    },
    "path-sum": {
        "n": "3,4,5,6",
        "n0": 0,
        "rwa": False,
        "lambda": "0.01:0.05:5",
        "kappa": "0.01:0.05:5",
    },
    "evolve-junction": {
        "n": 4,
        "lambda": 0.05,
        "kappa": 0.01,
        "mu": 10.0,
        "theta": math.pi / 6,
        "rwa": False,
        "cutoff": 8,
        "horizon": 10.0,
        "samples": None,
    },
    "spectrum": {
        "n": 3,
        "n0": 0,
        "rwa": False,
        "lambda": 0.05,
        "kappa": 0.01,
        "cutoff": None,
        "window_min": None,
        "window_max": None,
        "points": 200,
        "levels": 12,
    },
}


def parse_grid(value) -> list[float]:
    """A grid option: number, list of numbers, or "min:max:count"."""
    if isinstance(value, (int, float)):
        return [float(value)]
    if isinstance(value, (list, tuple)):
        return [float(v) for v in value]
    parts = str(value).split(":")
    if len(parts) == 1:
        return [float(parts[0])]
    if len(parts) != 3:
        raise ValueError(
            f"grid spec {value!r} must be a number or min:max:count"
        )
    lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    if count < 1:
        raise ValueError(f"grid count must be >= 1, got {count}")
    return [float(x) for x in np.linspace(lo, hi, count)]


def parse_int_list(value) -> list[int]:
    if isinstance(value, int):
        return [value]
    if isinstance(value, (list, tuple)):
        return [int(v) for v in value]
    return [int(tok) for tok in str(value).split(",") if tok.strip()]


def format_cell(value) -> str:
    """One CSV cell: 12 significant digits, NaN/None empty, -0 as 0."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    x = float(value)
    if math.isnan(x):
        return ""
    if x == 0.0:
        return "0"
    return "%.12g" % x


def resolve_config(command: str, config_path: str | None, cli_args: dict) -> dict:
    cfg = dict(DEFAULTS[command])
    if config_path is not None:
        with open(config_path) as fh:
            file_cfg = json.load(fh)
        if not isinstance(file_cfg, dict):
            raise ValueError(f"config file {config_path} must hold a JSON object")
        for key in file_cfg:
            if key not in cfg:
                raise ValueError(
                    f"unknown config key {key!r} for command {command!r}"
                )
        cfg.update(file_cfg)
    cfg.update(cli_args)
    return cfg


def resolved_window(cfg: dict, spec: ResonanceSpec) -> tuple[float, float]:
    lo, hi = cfg["window_min"], cfg["window_max"]
    default = default_scan_window(spec)
    return (
        default[0] if lo is None else float(lo),
        default[1] if hi is None else float(hi),
    )


def grid_window(cfg: dict, spec: ResonanceSpec) -> tuple[float, float] | None:
    """Explicit window for grid scans, or None for per-cell auto windows."""
    if cfg["window_min"] is None and cfg["window_max"] is None:
        return None
    return resolved_window(cfg, spec)


def cmd_scan_resonance(cfg: dict):
    spec = ResonanceSpec(n=int(cfg["n"]), n0=int(cfg["n0"]), rwa=bool(cfg["rwa"]))
    lambdas = parse_grid(cfg["lambda"])
    kappas = parse_grid(cfg["kappa"])
    cutoff = default_cutoff(spec) if cfg["cutoff"] is None else int(cfg["cutoff"])
    window = grid_window(cfg, spec)
    cfg.update({"lambda": lambdas, "kappa": kappas, "cutoff": cutoff})
    if window is not None:
        cfg.update({"window_min": window[0], "window_max": window[1]})
    cells = error_grid(
        spec,
        np.array(lambdas),
        np.array(kappas),
        basis=BasisSpec(1, cutoff),
        window=window,
    )
    header = [
        "lambda", "kappa", "n", "n0", "rwa",
        "omega_pert", "omega_num", "delta_pert", "delta_num",
        "cutoff", "reason",
    ]
    rows = []
    for c in cells:
        reason = c.flag[len("failed: "):] if c.flag.startswith("failed:") else ""
        rows.append([
            c.lam, c.kappa, spec.n, spec.n0, spec.rwa,
            c.omega_pert, c.omega_num, c.delta_pert, c.delta_num,
            cutoff, reason,
        ])
    return header, rows, None


def cmd_error_grid(cfg: dict):
    spec = ResonanceSpec(n=int(cfg["n"]), n0=int(cfg["n0"]), rwa=bool(cfg["rwa"]))
    lambdas = parse_grid(cfg["lambda"])
    kappas = parse_grid(cfg["kappa"])
    cutoff = default_cutoff(spec) if cfg["cutoff"] is None else int(cfg["cutoff"])
    window = grid_window(cfg, spec)
    cfg.update({"lambda": lambdas, "kappa": kappas, "cutoff": cutoff})
    if window is not None:
        cfg.update({"window_min": window[0], "window_max": window[1]})
    cells = error_grid(
        spec,
        np.array(lambdas),
        np.array(kappas),
        basis=BasisSpec(1, cutoff),
        window=window,
    )
    header = ["lambda", "kappa", "err_omega_pct", "err_delta_pct", "flags"]
    rows = [
        [c.lam, c.kappa, c.err_omega_pct, c.err_delta_pct, c.flag] for c in cells
    ]
    return header, rows, None


def cmd_path_sum(cfg: dict):
    orders = parse_int_list(cfg["n"])
    lambdas = parse_grid(cfg["lambda"])
    kappas = parse_grid(cfg["kappa"])
    n0 = int(cfg["n0"])
    rwa = bool(cfg["rwa"])
    cfg.update({"n": orders, "lambda": lambdas, "kappa": kappas})
    header = [
        "n", "n0", "rwa", "lambda", "kappa",
        "coupling_closed", "coupling_path_sum", "rel_diff",
    ]
    rows = []
    for n in orders:
        spec = ResonanceSpec(n=n, n0=n0, rwa=rwa)
        for lam in lambdas:
            for kappa in kappas:
                params = ModelParams(omega_c=1.0 / n, lam=lam, kappa=kappa)
                summed = path_sum_coupling(spec, params)
                if n0 == 0:
                    closed = effective_coupling(spec, lam, kappa)
                    scale = max(abs(closed), abs(summed))
                    rel = abs(closed - summed) / scale if scale else 0.0
                else:
                    closed = rel = None
                rows.append([n, n0, rwa, lam, kappa, closed, summed, rel])
    return header, rows, None


def cmd_evolve_junction(cfg: dict):
    n = int(cfg["n"])
    params = JunctionParams(
        cell=ModelParams(
            omega_c=1.0 / n, lam=float(cfg["lambda"]), kappa=float(cfg["kappa"])
        ),
        J=0.0,
        theta=float(cfg["theta"]),
        rwa=bool(cfg["rwa"]),
    )
    traj = junction_experiment(
        params,
        ResonanceSpec(n=n),
        mu=float(cfg["mu"]),
        horizon=float(cfg["horizon"]),
        samples=None if cfg["samples"] is None else int(cfg["samples"]),
        cutoff=int(cfg["cutoff"]),
    )
    cfg["samples"] = len(traj.times)
    ts = traj.timescales
    resolved = traj.meta["resolved_params"]
    derived = {
        "omega_c": resolved.cell.omega_c,
        "omega_eff": traj.meta["omega_eff"],
        "J": resolved.J,
        "t_H": ts.t_H,
        "T_H": ts.T_H,
        "t_R": ts.t_R,
        "T_R": ts.T_R,
    }
    header = ["t_over_TH", "n1", "n2", "n3", "q1", "q2", "q3", "norm"]
    rows = [
        [
            t / ts.T_H,
            traj.photon_expect[0, k], traj.photon_expect[1, k],
            traj.photon_expect[2, k],
            traj.qubit_expect[0, k], traj.qubit_expect[1, k],
            traj.qubit_expect[2, k],
            traj.norm[k],
        ]
        for k, t in enumerate(traj.times)
    ]
    return header, rows, derived


def cmd_spectrum(cfg: dict):
    spec = ResonanceSpec(n=int(cfg["n"]), n0=int(cfg["n0"]), rwa=bool(cfg["rwa"]))
    cutoff = default_cutoff(spec) if cfg["cutoff"] is None else int(cfg["cutoff"])
    window = resolved_window(cfg, spec)
    points = int(cfg["points"])
    if points < 2:
        raise ValueError(f"points must be >= 2, got {points}")
    levels = min(int(cfg["levels"]), 2 * (cutoff + 1))
    cfg.update(
        {"cutoff": cutoff, "window_min": window[0], "window_max": window[1],
         "levels": levels}
    )
    basis = BasisSpec(1, cutoff)
    build = build_grm_rwa if spec.rwa else build_grm
    lam, kappa = float(cfg["lambda"]), float(cfg["kappa"])
    header = ["omega_c"] + [f"e_{k}" for k in range(levels)]
    rows = []
    for omega_c in np.linspace(window[0], window[1], points):
        h = build(ModelParams(omega_c=float(omega_c), lam=lam, kappa=kappa), basis)
        w = eigendecompose(h).eigenvalues[:levels]
        rows.append([float(omega_c)] + [float(e) for e in w])
    return header, rows, None


COMMANDS = {
    "scan-resonance": cmd_scan_resonance,
    "error-grid": cmd_error_grid,
    "path-sum": cmd_path_sum,
    "evolve-junction": cmd_evolve_junction,
    "spectrum": cmd_spectrum,
}


def write_csv(stream, command: str, cfg: dict, header, rows, derived=None):
    manifest = {"command": command, "config": cfg, "version": __version__}
    if derived is not None:
        manifest["derived"] = derived
    stream.write("# " + json.dumps(manifest, sort_keys=True) + "\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_cell(v) for v in row])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grmsim",
        description="Multiphoton resonances and chiral photon transfer in "
        "coupled qubit-resonator cells.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, flags):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="JSON file with config keys")
        p.add_argument("-o", "--out", help="output CSV path (default stdout)")
        for flag, kwargs in flags:
            p.add_argument(flag, default=argparse.SUPPRESS, **kwargs)
        return p

    grid_kw = {"help": "number or min:max:count grid"}
    add("scan-resonance", "sweep couplings, compare scan vs closed forms", [
        ("--n", {"type": int, "help": "resonance order (3..6)"}),
        ("--n0", {"type": int, "help": "photon offset of the resonant pair"}),
        ("--rwa", {"action": "store_true", "help": "drop counter-rotating terms"}),
        ("--lambda", {**grid_kw}),
        ("--kappa", {**grid_kw}),
        ("--cutoff", {"type": int, "help": "photon cutoff (default n0+n+12)"}),
        ("--window-min", {"type": float, "help": "scan window lower edge"}),
        ("--window-max", {"type": float, "help": "scan window upper edge"}),
    ])
    add("error-grid", "percentage errors of the closed forms on a grid", [
        ("--n", {"type": int}),
        ("--n0", {"type": int}),
        ("--rwa", {"action": "store_true"}),
        ("--lambda", {**grid_kw}),
        ("--kappa", {**grid_kw}),
        ("--cutoff", {"type": int}),
        ("--window-min", {"type": float}),
        ("--window-max", {"type": float}),
    ])
    add("path-sum", "path-sum oracle vs closed-form couplings", [
        ("--n", {"help": "comma-separated resonance orders"}),
        ("--n0", {"type": int}),
        ("--rwa", {"action": "store_true"}),
        ("--lambda", {**grid_kw}),
        ("--kappa", {**grid_kw}),
    ])
    add("evolve-junction", "evolve |g,n>|g,0>|g,0> through the 3-cell ring", [
        ("--n", {"type": int}),
        ("--lambda", {"type": float}),
        ("--kappa", {"type": float}),
        ("--mu", {"type": float, "help": "t_R/t_H ratio fixing J"}),
        ("--theta", {"type": float, "help": "hopping phase (radians)"}),
        ("--rwa", {"action": "store_true"}),
        ("--cutoff", {"type": int}),
        ("--horizon", {"type": float, "help": "duration in units of T_H"}),
        ("--samples", {"type": int, "help": "override the sample count"}),
    ])
    add("spectrum", "low-lying spectrum across the scan window", [
        ("--n", {"type": int}),
        ("--n0", {"type": int}),
        ("--rwa", {"action": "store_true"}),
        ("--lambda", {"type": float}),
        ("--kappa", {"type": float}),
        ("--cutoff", {"type": int}),
        ("--window-min", {"type": float}),
        ("--window-max", {"type": float}),
        ("--points", {"type": int}),
        ("--levels", {"type": int, "help": "eigenvalue columns to emit"}),
    ])
    return parser


def main(argv=None) -> int:
    args = vars(build_parser().parse_args(argv))
    command = args.pop("command")
    config_path = args.pop("config", None)
    out_path = args.pop("out", None)
    try:
        cfg = resolve_config(command, config_path, args)
        header, rows, derived = COMMANDS[command](cfg)
        if out_path is None:
            write_csv(sys.stdout, command, cfg, header, rows, derived)
        else:
            with open(out_path, "w", newline="") as fh:
                write_csv(fh, command, cfg, header, rows, derived)
    except Exception as exc:
        print(
            json.dumps({"error": type(exc).__name__, "message": str(exc)}),
            file=sys.stderr,
        )
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
