"""Command line interface.

    icflow run <config>      integrate, fit the spherical flow, write CSV + summary
    icflow fit <csv>         power-law fits of diagnostics columns against Theta
    icflow check             run the invariant suites

The last line printed is always ``STATUS=<ok|fail> REASON=<...>``.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import checks
from .config import parse_config
from .errors import FlowError
from .flow import REACHED_STOP, run, write_checkpoint
from .io import emit_csv, read_csv
from .roundness import fit_decay_exponent, sphere_fit

log = logging.getLogger("icflow")

DEFAULT_FIT_COLUMNS = ("osc_u", "osc_support", "grad_phi_sq_max", "w_max", "scaled_hausdorff")


def _status(ok: bool, reason: str = "none") -> int:
    print(f"STATUS={'ok' if ok else 'fail'} REASON={reason}")
    return 0 if ok else 1


def cmd_run(args) -> int:
    path = Path(args.config)
    cfg = parse_config(path.read_text())
    csv_path = Path(args.csv or cfg.csv)
    if not csv_path.is_absolute() and args.csv is None:
        csv_path = path.parent / csv_path
    ckpt_dir = Path(cfg.checkpoint_dir) if cfg.checkpoint_dir else csv_path.parent
    if not ckpt_dir.is_absolute() and cfg.checkpoint_dir:
        ckpt_dir = path.parent / ckpt_dir

    initial = cfg.initial_surface()
    flow_cfg = cfg.flow_config()
    spec = flow_cfg.spec

    def checkpoint(state):
        ckpt_dir.mkdir(parents=True, exist_ok=True)
        write_checkpoint(ckpt_dir / f"checkpoint_{state.step_count:08d}.txt", state, spec, cfg.p)

    def progress(rec):
        log.info("t=%.6g Theta=%.6g osc_u=%.3e", rec.t, rec.theta, rec.osc_u)

    result = run(flow_cfg, initial, sinks=[progress], checkpoint=checkpoint)
    fit = None
    if len(result.samples) >= 3:
        fit = sphere_fit(result.samples, cfg.n, cfg.p)
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    emit_csv(result.records, csv_path, cfg.n, fit)

    summary = {
        "stop_reason": result.stop_reason,
        "message": result.message,
        "steps": result.steps,
        "samples": len(result.records),
        "t_final": result.final_state.t,
        "initial_mean_radius": result.r0,
        "csv": str(csv_path),
    }
    if fit is not None:
        summary.update(Q=[float(x) for x in fit.Q], R_star=fit.R_star,
                       final_hausdorff=float(fit.hausdorff[-1]),
                       final_scaled_hausdorff=float(fit.scaled_hausdorff[-1]))
    summary_path = csv_path.with_suffix(".summary.json")
    summary_path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    for key in sorted(summary):
        print(f"{key}: {summary[key]}")
    return _status(result.stop_reason == REACHED_STOP, result.stop_reason if result.stop_reason != REACHED_STOP else "none")


def cmd_fit(args) -> int:
    names, rows = read_csv(args.csv)
    columns = args.columns.split(",") if args.columns else [c for c in DEFAULT_FIT_COLUMNS if c in names]
    unknown = [c for c in columns if c not in names]
    if unknown:
        print(f"unknown column(s): {', '.join(unknown)}", file=sys.stderr)
        return _status(False, "UNKNOWN_COLUMN")
    theta = np.array([r["Theta"] for r in rows])
    keep = theta >= args.theta_min
    if args.last_decade and len(theta):
        keep &= theta >= theta.max() / 10
    fitted = 0
    for col in columns:
        q = np.array([r[col] for r in rows])
        mask = keep & np.isfinite(q) & (q > 0)
        try:
            slope, c = fit_decay_exponent(np.stack([theta[mask], q[mask]], axis=1))
        except FlowError as exc:
            print(f"{col} skipped: {exc}")
            continue
        fitted += 1
        print(f"{col} slope={slope!r} c={c!r} points={int(mask.sum())}")
    return _status(fitted > 0, "none" if fitted else "DEGENERATE_SERIES")


def cmd_check(args) -> int:
    failed = []
    for name, ok, detail in checks.run_suites(args.seed):
        print(f"{name}: {'ok' if ok else 'FAIL'} ({detail})")
        if not ok:
            failed.append(name)
    return _status(not failed, failed[0] if failed else "none")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="icflow", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="verb", required=True)

    p_run = sub.add_parser("run", help="integrate a configured flow")
    p_run.add_argument("config")
    p_run.add_argument("--csv", help="override the CSV path from the config")
    p_run.set_defaults(func=cmd_run)

    p_fit = sub.add_parser("fit", help="power-law fits of CSV columns against Theta")
    p_fit.add_argument("csv")
    p_fit.add_argument("--columns", help="comma separated column names")
    p_fit.add_argument("--theta-min", type=float, default=0.0)
    p_fit.add_argument("--last-decade", action="store_true", help="only rows with Theta >= max Theta / 10")
    p_fit.set_defaults(func=cmd_fit)

    p_check = sub.add_parser("check", help="run the invariant suites")
    p_check.add_argument("--seed", type=int, default=0)
    p_check.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code:
            print("STATUS=fail REASON=USAGE")
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except FlowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _status(False, exc.code)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _status(False, "IO_ERROR")


if __name__ == "__main__":
    sys.exit(main())
