"""Deterministic JSON reports.

Schema (``version`` 1) for a verification report::

    {"variety": str, "mode": "pipeline" | "duality",
     "status": "exact" | "discrepancy", "known": bool,
     "generators": [[int, ...], ...], "inequalities": [[int, ...], ...],
     "discrepancies": [{"table": str,
                        "printed_only": [...], "computed_only": [...],
                        "printed_only_orbits": [...], "computed_only_orbits": [...]}],
     "notes": [str, ...], "timing_s": float (only with timing)}

Rows use the printed frame and are sorted lexicographically, so the same input
always serializes to the same bytes.  Timing is opt-in for the same reason.
"""
from __future__ import annotations

import json
from typing import Any, Iterable

from .pipeline import ConeReport, matches_known

SCHEMA_VERSION = 1


def _rows(vs: Iterable[Iterable[int]]) -> list[list[int]]:
    return sorted(list(v) for v in vs)


def cone_report_dict(report: ConeReport, timing: bool = False) -> dict[str, Any]:
    lat = report.lattice
    out: dict[str, Any] = {
        "variety": report.variety,
        "mode": report.mode,
        "status": report.match_status,
        "known": matches_known(report),
        "generators": _rows(report.computed_rays),
        "inequalities": _rows(report.computed_facets),
        "discrepancies": [],
        "notes": list(report.notes),
    }
    for d in sorted(report.discrepancies, key=lambda d: d.table):
        p_orb, c_orb = d.orbit_summary(lat)
        out["discrepancies"].append({
            "table": d.table,
            "printed_only": _rows(d.printed_only),
            "computed_only": _rows(d.computed_only),
            "printed_only_orbits": _rows(p_orb),
            "computed_only_orbits": _rows(c_orb),
        })
    if timing:
        out["timing_s"] = round(report.timing, 3)
    return out


def dumps(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, default=str) + "\n"


def verification_payload(reports: list[ConeReport], timing: bool = False) -> dict[str, Any]:
    return {"version": SCHEMA_VERSION, "reports": [cone_report_dict(r, timing) for r in reports]}


def format_text(report: ConeReport) -> str:
    """One status line plus indented orbit representatives of each discrepancy."""
    lat = report.lattice
    known = " (known)" if report.discrepancies and matches_known(report) else ""
    lines = [
        f"{report.variety:<5} {report.mode:<8} {report.match_status}{known}: "
        f"{len(report.computed_rays)} generators, {len(report.computed_facets)} inequalities"
    ]
    for d in report.discrepancies:
        p_orb, c_orb = d.orbit_summary(lat)
        for label, orb in (("printed only", p_orb), ("computed only", c_orb)):
            for v in orb:
                lines.append(f"    {d.table}: {label} orbit {' '.join(map(str, v))}")
    return "\n".join(lines)
