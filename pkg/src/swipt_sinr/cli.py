"""Command-line front end: validate configs, run scenarios, sweep parameters.

Subcommands
-----------
``validate``  check a config file, print violations, exit 0 iff valid.
``run``       run one scenario and write histogram, analytical pdf curve,
              comparison report, and run manifest into an output directory.
``sweep``     run one scenario across a list of parameter values and write
              per-point outputs plus a summary table.

Exit codes: 0 success, 1 validation failure, 2 runtime failure.

Outputs are plain comma-separated tables (histograms, curves, sweep
summaries) and JSON documents (reports, manifests).  All floats are
written with full round-trip precision.  Data files (histogram, curve,
report, summary) are byte-identical across reruns with the same seed and
config for any worker count; only the manifest carries a timestamp.
"""

import argparse
import datetime
import json
import os
import sys

import numpy as np

from . import __version__
from . import montecarlo as mc
from . import system

__all__ = ["main"]

_SCENARIO_FLAGS = {
    "uplink-perfect": "uplink_perfect",
    "uplink-imperfect": "uplink_imperfect",
    "downlink-perfect": "downlink_perfect",
    "downlink-imperfect": "downlink_imperfect",
}

SWEEP_AXES = ("N_r", "alpha", "rho", "K")

WORKERS_ENV = "SWIPT_SINR_WORKERS"


def _fmt(value):
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _write_json(path, payload):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _load_and_validate(config_path):
    cfg = system.load_config(config_path)
    errors = system.validate_config(cfg)
    return cfg, errors


def _default_workers(value):
    if value is not None:
        return value
    env = os.environ.get(WORKERS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValueError(f"{WORKERS_ENV} must be an integer, got {env!r}")
    return 1


def _manifest(cfg, scenario, samples, workers):
    return {
        "config": system.config_to_dict(cfg),
        "scenario": scenario,
        "seed": cfg.seed,
        "samples": samples,
        "workers": workers,
        "code_version": __version__,
        "rng_algorithm": mc.RNG_ALGORITHM,
        "block_size": mc.BLOCK_SIZE,
        "timestamp_utc": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }


def _run_one(cfg, scenario, samples, workers, out_dir):
    """Run one scenario end to end and write the four output files."""
    os.makedirs(out_dir, exist_ok=True)
    emp = mc.run_scenario(cfg, scenario, samples, workers=workers)
    law, notes = mc.analytical_scalar_law(cfg, scenario)
    report = mc.compare(emp, law, scenario=scenario, flags=notes)

    hist_rows = [
        (float(emp.bin_edges[i]), float(emp.bin_edges[i + 1]), float(emp.bin_mass[i]))
        for i in range(emp.bin_mass.size)
    ]
    _write_csv(
        os.path.join(out_dir, "histogram.csv"),
        ("bin_left_sinr_linear", "bin_right_sinr_linear", "probability_mass"),
        hist_rows,
    )

    lo = float(emp.samples[0]) if emp.n else 0.0
    hi = float(emp.samples[-1]) if emp.n else 1.0
    grid = np.linspace(max(lo, 1e-12), hi, 512)
    pdf = law.pdf(grid)
    _write_csv(
        os.path.join(out_dir, "curve.csv"),
        ("sinr_linear", "sinr_db", "pdf_per_linear_sinr"),
        [
            (float(x), float(10.0 * np.log10(x)), float(p))
            for x, p in zip(grid, pdf)
        ],
    )

    _write_json(os.path.join(out_dir, "report.json"), report.to_dict())
    return report


def cmd_validate(args):
    try:
        cfg, errors = _load_and_validate(args.config)
    except (OSError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    if errors:
        for err in errors:
            print(f"invalid: {err}")
        return 1
    print("config ok")
    return 0


def cmd_run(args):
    try:
        cfg, errors = _load_and_validate(args.config)
        if errors:
            for err in errors:
                print(f"invalid: {err}", file=sys.stderr)
            return 1
        workers = _default_workers(args.workers)
    except (OSError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    if args.seed is not None:
        cfg = system.with_fields(cfg, seed=args.seed)
    samples = args.samples if args.samples is not None else cfg.mc_samples
    scenario = _SCENARIO_FLAGS[args.scenario]
    try:
        report = _run_one(cfg, scenario, samples, workers, args.out)
        _write_json(
            os.path.join(args.out, "manifest.json"),
            _manifest(cfg, scenario, samples, workers),
        )
    except Exception as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 2
    print(
        f"{scenario}: n={report.n_samples} ks={report.ks_distance:.6f} "
        f"emp_mean={report.emp_mean:.6f}"
        + (f" law_mean={report.law_mean:.6f}" if report.law_mean is not None else "")
    )
    for flag in report.validity_flags:
        print(f"note: {flag}")
    return 0


def _apply_axis(cfg, axis, value):
    if axis == "N_r":
        v = int(value)
        # The transmit count tracks the receive count; full selection follows.
        return system.with_fields(cfg, N_r=v, N_t=v, N_sel=v)
    if axis == "K":
        return system.with_fields(cfg, K=int(value))
    if axis == "alpha":
        return system.with_fields(cfg, alpha=float(value))
    if axis == "rho":
        return system.with_fields(cfg, rho=float(value))
    raise ValueError(f"unknown sweep axis {axis!r}")


def cmd_sweep(args):
    try:
        cfg, errors = _load_and_validate(args.config)
        if errors:
            for err in errors:
                print(f"invalid: {err}", file=sys.stderr)
            return 1
        workers = _default_workers(args.workers)
        values = [v for v in (s.strip() for s in args.values.split(",")) if v]
        if not values:
            print("sweep error: empty value list", file=sys.stderr)
            return 1
    except (OSError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    if args.seed is not None:
        cfg = system.with_fields(cfg, seed=args.seed)
    samples = args.samples if args.samples is not None else cfg.mc_samples
    scenario = _SCENARIO_FLAGS[args.scenario]
    os.makedirs(args.out, exist_ok=True)

    rows = []
    for value in values:
        try:
            point = _apply_axis(cfg, args.axis, value)
            point_errors = system.validate_config(point)
            if point_errors:
                raise ValueError("; ".join(point_errors))
            out_dir = os.path.join(args.out, f"{args.axis}={value}")
            report = _run_one(point, scenario, samples, workers, out_dir)
            rows.append(
                (
                    value,
                    "ok",
                    report.ks_distance,
                    report.emp_mean,
                    report.emp_var,
                    report.law_mean if report.law_mean is not None else float("nan"),
                )
            )
        except Exception as exc:  # record per-point failure, keep sweeping
            print(f"point {args.axis}={value} failed: {exc}", file=sys.stderr)
            rows.append((value, "failed", float("nan"), float("nan"), float("nan"), float("nan")))
    _write_csv(
        os.path.join(args.out, "summary.csv"),
        (
            f"{args.axis}_value",
            "status",
            "ks_distance",
            "emp_mean_sinr_linear",
            "emp_var_sinr_linear",
            "law_mean_sinr_linear",
        ),
        rows,
    )
    if all(row[1] == "failed" for row in rows):
        return 2
    print(f"sweep complete: {len(rows)} points -> {args.out}/summary.csv")
    return 0


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="swipt-sinr",
        description="SINR distribution experiments for a full-duplex SWIPT MU-MIMO link",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_val = sub.add_parser("validate", help="validate a config file")
    p_val.add_argument("--config", required=True)
    p_val.set_defaults(func=cmd_validate)

    def add_run_args(p):
        p.add_argument("--config", required=True)
        p.add_argument(
            "--scenario", required=True, choices=sorted(_SCENARIO_FLAGS)
        )
        p.add_argument("--samples", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", required=True)
        p.add_argument(
            "--workers",
            type=int,
            default=None,
            help=f"worker processes (default: ${WORKERS_ENV} or 1)",
        )

    p_run = sub.add_parser("run", help="run one scenario")
    add_run_args(p_run)
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="run a scenario across parameter values")
    add_run_args(p_sweep)
    p_sweep.add_argument("--axis", required=True, choices=SWEEP_AXES)
    p_sweep.add_argument(
        "--values", required=True, help="comma-separated axis values, e.g. 4,6,8"
    )
    p_sweep.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
