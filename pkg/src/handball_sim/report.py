"""Serialisation of metric reports: per-design files, the comparison table, figure series."""

from __future__ import annotations

import csv
import io
import json
from typing import Mapping, Sequence

import numpy as np

from handball_sim.engine import match_count_distribution
from handball_sim.formats import Design
from handball_sim.metrics import MetricsReport, diff_vs_reference

EMIT_FORMATS = ("csv", "json", "table", "figdata")
EXTENSIONS = {"csv": "csv", "json": "json", "table": "txt", "figdata": "csv"}
MISSING = "---"

SUMMARY_ROWS = (
    "Min. games",
    "Max. games",
    "Total games",
    "Average rank of #1",
    "Average rank of #2",
    "Average rank of #3",
    "Average rank of #4",
    "Proportion of wins for the highest ranked",
    "Expected quality of the final",
    "Expected competitive balance of the final",
)


def _fmt(value: float | int | None, digits: int = 6) -> str:
    if value is None:
        return MISSING
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{value:.{digits}f}"


def metric_rows(report: MetricsReport) -> list[tuple[str, float | None, float | None]]:
    """``(metric, value, standard error)`` rows of one report."""
    rows: list[tuple[str, float | None, float | None]] = []
    for k in range(4):
        rows.append((f"avg_rank_place_{k + 1}", report.avg_rank_place[k], report.avg_rank_place_se[k]))
    rows.append(("best_team_win", report.win_prob_best_p[0], report.win_prob_best_p_se[0]))
    rows.append(("final_quality", report.final_quality, report.final_quality_se))
    rows.append(("final_balance", report.final_balance, report.final_balance_se))
    top_two_se = None
    if report.top_two_final is not None:
        top_two_se = float(np.sqrt(report.top_two_final * (1 - report.top_two_final) / report.runs))
    rows.append(("top_two_final", report.top_two_final, top_two_se))
    for p in range(report.n_teams):
        rows.append((f"win_prob_best_p_{p + 1}", report.win_prob_best_p[p], report.win_prob_best_p_se[p]))
    for p in range(report.n_teams):
        if report.final_reach_prob_best_p is None:
            rows.append((f"final_reach_best_p_{p + 1}", None, None))
        else:
            rows.append((f"final_reach_best_p_{p + 1}", report.final_reach_prob_best_p[p],
                         report.final_reach_prob_best_p_se[p]))
    for t in range(report.n_teams):
        for k in range(4):
            prob = report.placement_prob[t, k]
            rows.append((f"placement_prob_team_{t + 1}_place_{k + 1}", prob, float(np.sqrt(prob * (1 - prob) / report.runs))))
    return rows


def report_csv(report: MetricsReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["metric", "value", "se", "n"])
    for name, value, se in metric_rows(report):
        writer.writerow([name, _fmt(value), _fmt(se), report.runs])
    return buf.getvalue()


def _rounded(value):
    if isinstance(value, dict):
        return {k: _rounded(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_rounded(v) for v in value]
    if isinstance(value, float):
        return round(value, 6)
    return value


def report_json(report: MetricsReport) -> str:
    return json.dumps(_rounded(report.to_dict()), indent=1) + "\n"


def summary_columns(designs: Sequence[Design], reports: Mapping[str, MetricsReport]) -> list[list]:
    columns = []
    for d in designs:
        rep = reports[d.name]
        dist = match_count_distribution(d.format)
        columns.append([
            min(dist), max(dist), d.format.total_matches(),
            *[float(x) for x in rep.avg_rank_place],
            rep.best_team_win_prob, rep.final_quality, rep.final_balance,
        ])
    return columns


def summary(designs: Sequence[Design], reports: Mapping[str, MetricsReport], emit: str = "csv") -> str:
    """Design-by-metric comparison table with rows in the order of SUMMARY_ROWS."""
    names = [d.name for d in designs]
    if emit == "json":
        cols = summary_columns(designs, reports)
        body = {"columns": names, "rows": {row: [c[i] for c in cols] for i, row in enumerate(SUMMARY_ROWS)} if names else {}}
        return json.dumps(_rounded(body), indent=1) + "\n"
    digits = 2 if emit == "table" else 6
    header = ["metric", *names]
    table = [header]
    if names:
        cols = summary_columns(designs, reports)
        for i, row in enumerate(SUMMARY_ROWS):
            table.append([row, *(_fmt(c[i], digits) for c in cols)])
    if emit == "table":
        widths = [max(len(r[j]) for r in table) for j in range(len(header))]
        lines = []
        for r in table:
            cells = [r[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(r[1:], widths[1:])]
            lines.append("  ".join(cells).rstrip())
        return "\n".join(lines) + "\n"
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(table)
    return buf.getvalue()


def figure_series(designs: Sequence[Design], reports: Mapping[str, MetricsReport]) -> str:
    """Long-format ``figure,series,x,y`` rows for the comparison plots.

    * ``win_best_p``: probability a top-p team wins, p = 1..12
    * ``win_best_p_vs_RR``: the same minus RR (needs RR in the set)
    * ``final_best_p``: probability a top-p team plays the final, p = 1..8
    * ``place_k_vs_KO``: per-rank probability of place k minus KO with the same seeding
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["figure", "series", "x", "y"])
    rr = reports.get("RR")
    for d in designs:
        rep = reports[d.name]
        for p in range(min(12, rep.n_teams)):
            writer.writerow(["win_best_p", d.name, p + 1, _fmt(float(rep.win_prob_best_p[p]))])
        if rr is not None and d.name != "RR":
            diff = diff_vs_reference(rep, rr, "win")
            for p in range(min(12, rep.n_teams)):
                writer.writerow(["win_best_p_vs_RR", d.name, p + 1, _fmt(float(diff[p]))])
        if rep.final_reach_prob_best_p is not None:
            for p in range(min(8, rep.n_teams)):
                writer.writerow(["final_best_p", d.name, p + 1, _fmt(float(rep.final_reach_prob_best_p[p]))])
        if d.policy is not None and d.format.id != "ko":
            ko = reports.get(f"KO/{d.policy.short}")
            if ko is not None:
                diff = diff_vs_reference(rep, ko, "placement")
                for k in range(4):
                    for t in range(rep.n_teams):
                        writer.writerow([f"place_{k + 1}_vs_KO", d.name, t + 1, _fmt(float(diff[t, k]))])
    return buf.getvalue()


def emit_report(report: MetricsReport, emit: str = "csv") -> str:
    """Content of a single design's report file."""
    if emit in ("csv", "figdata"):
        return report_csv(report)
    if emit == "json":
        return report_json(report)
    if emit == "table":
        lines = [f"{report.design}  ({report.model}, N={report.runs})"]
        for name, value, se in metric_rows(report)[:8]:
            lines.append(f"{name:<24} {_fmt(value, 2):>8}  (se {_fmt(se, 4)})")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown emit format {emit!r}")
