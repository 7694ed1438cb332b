"""Deterministic text, CSV, JSON and SVG renderings of reports.

Percentages print with one decimal, watts / GB / minutes with two. JSON
keeps full float precision so that ``report_from_json`` recovers the exact
report and renders it back byte-identically.
"""

from __future__ import annotations

import csv
import io
import json
import re
from xml.sax.saxutils import escape, quoteattr

from .errors import UnsupportedFormatError
from .feasibility import (
    ComparisonReport,
    ComparisonRow,
    FeasibilityVerdict,
    Reason,
    VerdictKind,
)
from .thermal import PowerBreakdown
from .utilization import BudgetFlag, StageUsage, UtilizationReport
from .workload import AccountingKind

FORMATS = ("text-table", "csv", "json", "svg-bars")

CSV_COLUMNS = ("stage", "cpu_pct", "gpu_pct", "combined_share", "ram_gb")

ACCOUNTING_NOTE = ("Combined shares use single-budget accounting (one dominant resource per "
                   "stage, Overhead excluded); per-resource CPU/GPU totals are listed separately.")

_PALETTE = ("#3b6fb6", "#e08a2c", "#4f9d69", "#b5493b", "#8b6bb8", "#c2a23a", "#5aa6b0",
            "#9c6b4e")


def pct(x: float) -> str:
    return f"{x:.1f}"


def num2(x: float) -> str:
    return f"{x:.2f}"


def _minutes(m: float | None) -> str:
    return "Sustained" if m is None else num2(m)


def css_class(stage_name: str) -> str:
    return "stage-" + re.sub(r"[^A-Za-z0-9_-]", "-", stage_name)


# ---------------------------------------------------------------------------
# dict / JSON form

def utilization_to_dict(r: UtilizationReport) -> dict:
    return {
        "soc": r.soc,
        "scenario": r.scenario,
        "stages": [
            {
                "name": s.name,
                "kind": s.kind.value,
                "cpu_pct": s.cpu_pct,
                "gpu_pct": s.gpu_pct,
                "combined_share": s.combined_share,
                "ram_gb": s.ram_gb,
                "extra_power_w": s.extra_power_w,
            }
            for s in r.stages
        ],
        "cpu_total_pct": r.cpu_total_pct,
        "gpu_total_pct": r.gpu_total_pct,
        "combined_total_pct": r.combined_total_pct,
        "headroom_pct": r.headroom_pct,
        "ram_used_gb": r.ram_used_gb,
        "ram_os_reserved_gb": r.ram_os_reserved_gb,
        "ram_app_visible_gb": r.ram_app_visible_gb,
        "over_budget_flags": sorted(f.value for f in r.over_budget_flags),
        "is_estimate": r.is_estimate,
        "mode_capacity_applied": r.mode_capacity_applied,
    }


def utilization_from_dict(d: dict) -> UtilizationReport:
    stages = tuple(
        StageUsage(s["name"], AccountingKind(s["kind"]), s["cpu_pct"], s["gpu_pct"],
                   s["combined_share"], s["ram_gb"], s["extra_power_w"])
        for s in d["stages"]
    )
    return UtilizationReport(
        soc=d["soc"],
        scenario=d["scenario"],
        stages=stages,
        cpu_total_pct=d["cpu_total_pct"],
        gpu_total_pct=d["gpu_total_pct"],
        combined_total_pct=d["combined_total_pct"],
        headroom_pct=d["headroom_pct"],
        ram_used_gb=d["ram_used_gb"],
        ram_os_reserved_gb=d["ram_os_reserved_gb"],
        ram_app_visible_gb=d["ram_app_visible_gb"],
        over_budget_flags=frozenset(BudgetFlag(f) for f in d["over_budget_flags"]),
        is_estimate=d["is_estimate"],
        mode_capacity_applied=d.get("mode_capacity_applied", False),
    )


def _verdict_to_dict(v: FeasibilityVerdict) -> dict:
    return {"kind": v.kind.value, "minutes": v.minutes, "reasons": [str(r) for r in v.reasons]}


def _verdict_from_dict(d: dict) -> FeasibilityVerdict:
    return FeasibilityVerdict(VerdictKind(d["kind"]), d["minutes"],
                              tuple(Reason.parse(r) for r in d["reasons"]))


def comparison_to_dict(c: ComparisonReport) -> dict:
    return {
        "scenario": c.scenario,
        "baseline": c.baseline,
        "ratios": c.ratios,
        "rows": [
            {
                "soc": row.soc,
                "label": row.label,
                "utilization": utilization_to_dict(row.report),
                "power": {
                    "idle_w": row.power.idle_w,
                    "cpu_w": row.power.cpu_w,
                    "gpu_w": row.power.gpu_w,
                    "fixed_w": row.power.fixed_w,
                    "total_w": row.power.total_w,
                },
                "throttle_minutes": row.throttle_minutes,
                "verdict": _verdict_to_dict(row.verdict),
            }
            for row in c.rows
        ],
    }


def comparison_from_dict(d: dict) -> ComparisonReport:
    rows = tuple(
        ComparisonRow(
            report=utilization_from_dict(r["utilization"]),
            power=PowerBreakdown(**r["power"]),
            throttle_minutes=r["throttle_minutes"],
            verdict=_verdict_from_dict(r["verdict"]),
            label=r["label"],
        )
        for r in d["rows"]
    )
    return ComparisonReport(d["scenario"], d["baseline"], rows, d["ratios"])


def report_to_dict(report) -> dict:
    if isinstance(report, ComparisonReport):
        return {"type": "comparison", **comparison_to_dict(report)}
    if isinstance(report, UtilizationReport):
        return {"type": "utilization", **utilization_to_dict(report)}
    raise TypeError(f"cannot render {type(report).__name__}")


def report_from_json(document: str):
    """Inverse of ``render_report(report, "json")``."""
    d = json.loads(document)
    d.pop("generated_at", None)
    kind = d.pop("type")
    if kind == "comparison":
        return comparison_from_dict(d)
    if kind == "utilization":
        return utilization_from_dict(d)
    raise ValueError(f"unknown report type {kind!r}")


# ---------------------------------------------------------------------------
# renderers

def _text_table(rows: list[list[str]]) -> str:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    lines = []
    for n, r in enumerate(rows):
        cells = [r[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(r[1:], widths[1:])]
        lines.append("  ".join(cells).rstrip())
        if n == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def _utilization_text(r: UtilizationReport) -> str:
    rows = [["stage", "kind", "cpu %", "gpu %", "share %", "ram GB"]]
    for s in r.stages:
        share = "-" if s.combined_share is None else pct(s.combined_share)
        rows.append([s.name, s.kind.value, pct(s.cpu_pct), pct(s.gpu_pct), share, num2(s.ram_gb)])
    rows.append(["total", "", pct(r.cpu_total_pct), pct(r.gpu_total_pct),
                 pct(r.combined_total_pct), num2(r.ram_app_visible_gb)])
    out = [f"scenario {r.scenario} on {r.soc}", "", _text_table(rows)]
    out.append(f"headroom      {pct(r.headroom_pct)} %")
    out.append(f"ram used      {num2(r.ram_used_gb)} GB "
               f"(os {num2(r.ram_os_reserved_gb)} + app {num2(r.ram_app_visible_gb)})")
    flags = ", ".join(sorted(f.value for f in r.over_budget_flags)) or "none"
    out.append(f"flags         {flags}")
    if r.is_estimate:
        out.append("note          derived from estimated benchmark scores")
    out.append("")
    out.append(ACCOUNTING_NOTE)
    return "\n".join(out) + "\n"


def _comparison_text(c: ComparisonReport) -> str:
    header = ["", *[row.soc for row in c.rows]]
    rows = [header]
    first = c.rows[0].report
    for s in first.stages:
        if s.combined_share is None:
            continue
        cells = []
        for row in c.rows:
            share = _share_of(row.report, s.name)
            cells.append("-" if share is None else pct(share))
        rows.append([f"{s.name} %", *cells])
    rows.append(["headroom %", *[pct(r.report.headroom_pct) for r in c.rows]])
    rows.append(["cpu total %", *[pct(r.report.cpu_total_pct) for r in c.rows]])
    rows.append(["gpu total %", *[pct(r.report.gpu_total_pct) for r in c.rows]])
    rows.append(["ram used GB", *[num2(r.report.ram_used_gb) for r in c.rows]])
    rows.append(["power W", *[num2(r.power.total_w) for r in c.rows]])
    rows.append(["throttle min", *[_minutes(r.throttle_minutes) for r in c.rows]])
    rows.append(["verdict", *[r.verdict.kind.value for r in c.rows]])
    for kind in ("cpu_single", "cpu_multi", "gpu_compute", "mem_bw"):
        vals = []
        for row in c.rows:
            v = c.ratios.get(row.soc, {}).get(kind)
            vals.append("n/a" if v is None else f"{v:.2f}x")
        rows.append([f"{kind} vs {c.baseline}", *vals])
    out = [f"scenario {c.scenario}", "", _text_table(rows)]
    for row in c.rows:
        if row.label:
            out.append(f"{row.soc}: {row.label}")
        if row.report.is_estimate:
            out.append(f"{row.soc}: derived from estimated benchmark scores")
        if row.verdict.reasons:
            out.append(f"{row.soc}: " + ", ".join(str(x) for x in row.verdict.reasons))
    out.append("")
    out.append(ACCOUNTING_NOTE)
    return "\n".join(out) + "\n"


def _share_of(r: UtilizationReport, stage: str) -> float | None:
    for s in r.stages:
        if s.name == stage:
            return s.combined_share
    return None


def _csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerows(rows)
    return buf.getvalue()


def _utilization_csv(r: UtilizationReport) -> str:
    rows = [CSV_COLUMNS]
    for s in r.stages:
        share = "" if s.combined_share is None else pct(s.combined_share)
        rows.append((s.name, pct(s.cpu_pct), pct(s.gpu_pct), share, num2(s.ram_gb)))
    rows.append(("total", pct(r.cpu_total_pct), pct(r.gpu_total_pct),
                 pct(r.combined_total_pct), num2(r.ram_app_visible_gb)))
    return _csv(rows)


def comparison_csv_columns(c: ComparisonReport) -> list[str]:
    stages = [name for name, _ in c.rows[0].report.combined_shares]
    return ["soc", *stages, "headroom_pct", "cpu_total_pct", "gpu_total_pct", "ram_used_gb",
            "power_w", "throttle_min", "verdict"]


def _comparison_csv(c: ComparisonReport) -> str:
    cols = comparison_csv_columns(c)
    stages = cols[1:-7]
    rows = [cols]
    for row in c.rows:
        r = row.report
        shares = [_share_of(r, s) for s in stages]
        rows.append([row.soc, *["" if v is None else pct(v) for v in shares],
                     pct(r.headroom_pct), pct(r.cpu_total_pct), pct(r.gpu_total_pct),
                     num2(r.ram_used_gb), num2(row.power.total_w),
                     _minutes(row.throttle_minutes), row.verdict.kind.value])
    return _csv(rows)


def _svg(groups: list[tuple[str, list[tuple[str, float]], float]]) -> str:
    """Stacked horizontal bar per group: accounted stages then headroom."""
    left, right, bar_h, gap, top = 170.0, 980.0, 28.0, 22.0, 40.0
    stage_names: list[str] = []
    for _, segs, _ in groups:
        for name, _ in segs:
            if name not in stage_names:
                stage_names.append(name)
    span = max([100.0] + [sum(v for _, v in segs) + max(h, 0.0) for _, segs, h in groups])
    scale = (right - left) / span
    legend_y = top + len(groups) * (bar_h + gap) + 10.0
    height = legend_y + 20.0 * ((len(stage_names) + 1 + 2) // 3) + 20.0
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 1000 {height:.0f}" '
        f'width="1000" height="{height:.0f}" font-family="sans-serif" font-size="12">',
        "<style>",
    ]
    for i, name in enumerate(stage_names):
        out.append(f".{css_class(name)} {{ fill: {_PALETTE[i % len(_PALETTE)]}; }}")
    out.append(".headroom { fill: #d9d9d9; }")
    out.append("</style>")
    out.append('<text x="10" y="20" font-size="14">combined share per stage (%)</text>')
    for gi, (label, segs, headroom) in enumerate(groups):
        y = top + gi * (bar_h + gap)
        out.append(f'<g class="bar-group" data-soc={quoteattr(label)}>')
        out.append(f'<text x="10" y="{y + bar_h * 0.65:.1f}">{escape(label)}</text>')
        x = left
        for name, value in segs:
            w = max(value, 0.0) * scale
            out.append(f'<rect class="segment {css_class(name)}" x="{x:.2f}" y="{y:.1f}" '
                       f'width="{w:.2f}" height="{bar_h:.1f}">'
                       f"<title>{escape(name)}: {pct(value)}%</title></rect>")
            x += w
        w = max(headroom, 0.0) * scale
        out.append(f'<rect class="segment headroom" x="{x:.2f}" y="{y:.1f}" width="{w:.2f}" '
                   f'height="{bar_h:.1f}"><title>headroom: {pct(headroom)}%</title></rect>')
        out.append("</g>")
    for i, name in enumerate([*stage_names, "headroom"]):
        lx = 10.0 + (i % 3) * 330.0
        ly = legend_y + (i // 3) * 20.0
        cls = "headroom" if name == "headroom" else css_class(name)
        out.append(f'<rect class="legend-swatch {cls}" x="{lx:.1f}" y="{ly:.1f}" width="12" '
                   f'height="12"/><text x="{lx + 18:.1f}" y="{ly + 10:.1f}">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _groups(report) -> list:
    if isinstance(report, ComparisonReport):
        reports = [row.report for row in report.rows]
    else:
        reports = [report]
    return [(r.soc, list(r.combined_shares), r.headroom_pct) for r in reports]


def render_report(report, format: str = "text-table", stamp: str | None = None) -> str:
    """Render a ``UtilizationReport`` or ``ComparisonReport``.

    Output is a pure function of the inputs; ``stamp`` (e.g. a timestamp) is
    only written when given.
    """
    if format not in FORMATS:
        raise UnsupportedFormatError(f"unsupported format {format!r}; choose from {FORMATS}")
    if not isinstance(report, (ComparisonReport, UtilizationReport)):
        raise TypeError(f"cannot render {type(report).__name__}")
    if format == "json":
        d = report_to_dict(report)
        if stamp is not None:
            d["generated_at"] = stamp
        return json.dumps(d, indent=2, sort_keys=True) + "\n"
    if format == "svg-bars":
        doc = _svg(_groups(report))
        if stamp is not None:
            doc = doc.replace("<style>", f"<!-- generated {escape(stamp)} -->\n<style>", 1)
        return doc
    if format == "csv":
        body = (_comparison_csv(report) if isinstance(report, ComparisonReport)
                else _utilization_csv(report))
        return body if stamp is None else f"# generated {stamp}\n{body}"
    body = (_comparison_text(report) if isinstance(report, ComparisonReport)
            else _utilization_text(report))
    return body if stamp is None else f"{body}generated {stamp}\n"
