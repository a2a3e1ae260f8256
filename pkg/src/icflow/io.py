"""CSV diagnostics log."""

from __future__ import annotations

import csv
import math
from pathlib import Path

CORE_COLUMNS = [
    "t", "Theta", "R_t", "u_min", "u_max", "osc_u", "rho_plus", "rho_minus",
    "osc_support", "v_max", "grad_phi_sq_max", "w_max", "H_min", "H_max",
    "pinch_d1", "pinch_d2", "pinch_d3", "hausdorff", "scaled_hausdorff",
]


def header(n: int) -> list:
    return CORE_COLUMNS + [f"center_{i}" for i in range(n + 1)] + ["dt"]


def _fmt(x) -> str:
    return repr(float(x))


def record_rows(records, fit=None):
    """Rows (lists of floats) in header order.

    With a sphere fit, ``osc_support`` is taken about the fitted center Q and
    R_t / hausdorff columns are filled; otherwise those are NaN and
    ``osc_support`` is about each sample's own center.
    """
    rows = []
    for i, rec in enumerate(records):
        pinch = list(rec.pinch.values())
        pinch = (pinch + [math.nan] * 3)[:3]
        if fit is not None:
            R_t, haus, scaled = fit.R_t[i], fit.hausdorff[i], fit.scaled_hausdorff[i]
            osc_sup = fit.osc_support_Q[i]
        else:
            R_t = haus = scaled = math.nan
            osc_sup = rec.osc_support
        rows.append([
            rec.t, rec.theta, R_t, rec.u_min, rec.u_max, rec.osc_u, rec.rho_plus,
            rec.rho_minus, osc_sup, rec.v_max, rec.grad_phi_sq_max, rec.w_max,
            rec.H_min, rec.H_max, *pinch, haus, scaled, *rec.center, rec.dt,
        ])
    return rows


def emit_csv(records, path, n: int, fit=None):
    path = Path(path)
    try:
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header(n))
            for row in record_rows(records, fit):
                writer.writerow([_fmt(x) for x in row])
    except OSError as exc:
        raise OSError(f"cannot write CSV {path}: {exc}") from exc


def read_csv(path):
    """Return ``(columns, rows)`` with rows as dicts of floats."""
    path = Path(path)
    try:
        with path.open(newline="") as fh:
            reader = csv.DictReader(fh)
            rows = [{k: float(v) for k, v in row.items()} for row in reader]
            return reader.fieldnames or [], rows
    except OSError as exc:
        raise OSError(f"cannot read CSV {path}: {exc}") from exc
