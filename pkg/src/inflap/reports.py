"""Deterministic report emission: canonical JSON, CSV rows, profile tables.

JSON is written by a small canonical serializer (sorted keys, fixed
separators, floats at 17 significant digits) so that two runs with the same
configuration produce byte-identical output; 17 significant digits make
every float round-trip bit-exactly through parse.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os

import numpy as np

from .profiles import BumpW1, BumpZ1, GaussianRho
from .scenarios import CheckReport

__all__ = [
    "REPORT_SCHEMA_VERSION",
    "dumps_canonical",
    "emit_report",
    "parse_report",
    "report_rows",
    "CSV_HEADER",
    "emit_profile_tables",
    "PROFILE_TABLE_RANGE",
]

REPORT_SCHEMA_VERSION = 1

CSV_HEADER = ("scenario", "check", "domain", "metric", "value", "threshold", "status")

#: plot range per emitted profile table; wide enough to show the supports
PROFILE_TABLE_RANGE = {"w1": (-4.0, 4.0), "z1": (-4.0, 4.0), "rho_star": (-4.0, 4.0)}

_PROFILES_BY_SCENARIO = {
    "ex1a": ("w1",),
    "ex1b": ("z1",),
    "ex2": ("rho_star",),
    "ex3": ("w1",),
    "properties": ("rho_star",),
}

_PROFILE_FACTORIES = {"w1": BumpW1, "z1": BumpZ1, "rho_star": GaussianRho}


def _format_float(x: float) -> str:
    # Non-finite values (empty sample sets yield -inf extrema) have no JSON
    # number form; emit them as strings so the output stays parseable.
    if not math.isfinite(x):
        return json.dumps(repr(x))
    return format(x, ".17g")


def dumps_canonical(obj) -> str:
    """Canonical JSON text: sorted keys, no whitespace, 17-digit floats."""
    if obj is None:
        return "null"
    if isinstance(obj, bool) or isinstance(obj, np.bool_):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _format_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        return dumps_canonical(obj.tolist())
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(dumps_canonical(v) for v in obj) + "]"
    if isinstance(obj, dict):
        items = []
        for key in sorted(obj):
            if not isinstance(key, str):
                raise TypeError(f"JSON object keys must be strings, got {key!r}")
            items.append(json.dumps(key) + ":" + dumps_canonical(obj[key]))
        return "{" + ",".join(items) + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__} canonically")


def _document(reports, with_timings: bool) -> dict:
    if isinstance(reports, CheckReport):
        reports = [reports]
    return {
        "schema_version": REPORT_SCHEMA_VERSION,
        "reports": [r.to_dict(with_timings=with_timings) for r in reports],
    }


def emit_report(reports, fmt: str = "json", with_timings: bool = True) -> bytes:
    """Serialize one report or a list of reports to JSON or CSV bytes."""
    if fmt == "json":
        return (dumps_canonical(_document(reports, with_timings)) + "\n").encode()
    if fmt == "csv":
        if isinstance(reports, CheckReport):
            reports = [reports]
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in reports:
            for row in report_rows(r):
                writer.writerow(row)
        return out.getvalue().encode()
    raise ValueError(f"unknown report format {fmt!r}")


def parse_report(data: bytes) -> dict:
    return json.loads(data.decode())


def _format_cell(v) -> str:
    if isinstance(v, float):
        return format(v, ".17g") if math.isfinite(v) else repr(v)
    return str(v)


def _row(scenario, check, domain, metric, value, threshold, status):
    return (scenario, check, domain, metric, _format_cell(value), _format_cell(threshold), status)


def report_rows(report: CheckReport) -> list[tuple]:
    """One CSV row per executed check of the report."""
    rows = []
    name = report.scenario
    s = report.sections
    if "residual" in s:
        domain = s["residual"]["domain"]
        for src in ("analytic", "fd"):
            r = s["residual"][src]
            rows.append(_row(
                name, f"residual_{src}", domain, "sup_residual",
                r["sup_residual"], r["tol"], "pass" if r["pass"] else "fail",
            ))
    if "conservation" in s:
        c = s["conservation"]
        rows.append(_row(
            name, "conservation", c.get("domain", ""), "max_dev",
            c["max_dev"], c["tol"], "pass" if c["pass"] else "fail",
        ))
    if "principle" in s:
        for key in sorted(s["principle"]):
            v = s["principle"][key]
            rows.append(_row(
                name, f"principle_{key}", v["domain"], "margin",
                v["margin"], "", "info",
            ))
    if "hull" in s:
        h = s["hull"]
        rows.append(_row(
            name, "hull", h["domain"], "max_outside_distance",
            h["max_outside_distance"], h["tol"],
            "contained" if h["contained"] else "outside",
        ))
    if "properties" in s:
        for key in sorted(s["properties"]):
            p = s["properties"][key]
            metric, value = next(
                (k, p[k]) for k in ("max_asymmetry", "max_relative_dot", "max_abs",
                                    "max_relative_error")
                if k in p
            )
            rows.append(_row(
                name, f"property_{key}", "", metric,
                value, p.get("tol", ""), "pass" if p["pass"] else "fail",
            ))
    rows.append(_row(
        name, "overall", "", "overall_pass", report.overall_pass, "",
        "pass" if report.overall_pass else "fail",
    ))
    return rows


def emit_profile_tables(dir_path: str, scenarios, grid_points: int = 2001) -> list[str]:
    """Write (t, value) CSV tables for the profiles a scenario set uses.

    The witness abscissas are merged into the grid so the tabulated extrema
    hit the analytic ones (±1/e for the bumps, 1 for the Gaussian peak).
    """
    kinds: list[str] = []
    for sc in scenarios:
        for kind in _PROFILES_BY_SCENARIO.get(sc, ()):
            if kind not in kinds:
                kinds.append(kind)
    os.makedirs(dir_path, exist_ok=True)
    written = []
    for kind in kinds:
        profile = _PROFILE_FACTORIES[kind]()
        lo, hi = PROFILE_TABLE_RANGE[kind]
        ts = np.unique(np.concatenate([
            np.linspace(lo, hi, grid_points),
            np.array([-2.0, -1.0, 0.0, 1.0, 2.0]),
        ]))
        path = os.path.join(dir_path, f"{kind}.csv")
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(("t", "value"))
            for t in ts:
                writer.writerow((_format_float(float(t)), _format_float(profile.value(float(t)))))
        written.append(path)
    return written
