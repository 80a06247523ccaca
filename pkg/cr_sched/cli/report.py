# cr_sched/cli/report.py

"""
Run reports: computing every requested method for a scenario, emitting the
result as JSON or CSV, plot-ready grouped-bar data and location sweeps.
"""

import csv
import io
import math
import time
from pathlib import Path
from typing import Iterable, Optional, Sequence, TextIO

import numpy as np

from cr_sched.analytics import fairness_index, is_ratio_fair, selection_probabilities
from cr_sched.core.errors import DomainError, UnsupportedK
from cr_sched.core.logger import logger
from cr_sched.schemas import (
    Comparison,
    McReport,
    Method,
    QuadratureConfig,
    ReportRow,
    RunMetadata,
    RunReport,
    Scenario,
    SelectionProbabilities,
    SweepPoint,
    UserLink,
)
from cr_sched.simulator import mc_vs_analytic, run_monte_carlo

CSV_HEADER = ["user", "d_sd", "d_sp", "alpha", "p_closed", "p_quad", "p_mc", "ci95"]
PLOT_HEADER = ["scenario", "user", "series", "probability"]
SWEEP_FIELDS = ("d_sd", "d_sp")


def fmt(value: Optional[float]) -> str:
    """Fixed decimal notation with 10 significant digits; empty for missing values."""
    if value is None:
        return ""
    return np.format_float_positional(value, precision=10, unique=False, fractional=False, trim="k")


def methods_for(choice: str) -> list[Method]:
    if choice == "all":
        return [Method.CLOSED_FORM, Method.QUADRATURE, Method.MONTE_CARLO]
    return [Method(choice)]


def run_scenario(
    scenario: Scenario,
    methods: Sequence[Method],
    cfg: Optional[QuadratureConfig] = None,
    workers: Optional[int] = None,
    backend: Optional[str] = None,
    check: bool = False,
) -> tuple[RunReport, list[Comparison]]:
    """
    Compute the requested methods and assemble the RunReport.

    With check=True every available analytic vector is compared against the
    Monte Carlo frequencies (simulated even if not requested).
    """
    started = time.perf_counter()
    closed: Optional[SelectionProbabilities] = None
    quad: Optional[SelectionProbabilities] = None
    mc: Optional[McReport] = None

    if Method.CLOSED_FORM in methods:
        try:
            closed = selection_probabilities(scenario.alphas, Method.CLOSED_FORM, cfg=cfg)
        except UnsupportedK:
            if len(methods) == 1:
                raise
            logger.info("No closed form for K=%d, skipping that column", scenario.k)
    if Method.QUADRATURE in methods:
        quad = selection_probabilities(scenario.alphas, Method.QUADRATURE, cfg=cfg)
    if Method.MONTE_CARLO in methods or check:
        mc = run_monte_carlo(scenario, workers=workers, backend=backend)

    comparisons: list[Comparison] = []
    if check:
        for analytic in (closed, quad):
            if analytic is not None:
                comparisons.append(mc_vs_analytic(scenario, analytic.method, report=mc, cfg=cfg))
        if not comparisons:
            # Monte Carlo only: check against quadrature
            comparisons.append(mc_vs_analytic(scenario, Method.QUADRATURE, report=mc, cfg=cfg))

    report = build_report(
        scenario,
        methods,
        closed=closed,
        quad=quad,
        mc=mc if Method.MONTE_CARLO in methods or check else None,
        check_passed=all(c.passed for c in comparisons) if check else None,
        wall_time_s=time.perf_counter() - started,
    )
    return report, comparisons


def build_report(
    scenario: Scenario,
    methods: Sequence[Method],
    closed: Optional[SelectionProbabilities] = None,
    quad: Optional[SelectionProbabilities] = None,
    mc: Optional[McReport] = None,
    check_passed: Optional[bool] = None,
    wall_time_s: float = 0.0,
) -> RunReport:
    rows = []
    for i, link in enumerate(scenario.users):
        rows.append(
            ReportRow(
                user=i + 1,
                d_sd=link.d_sd,
                d_sp=link.d_sp,
                alpha=link.alpha,
                p_closed=closed.probs[i] if closed else None,
                p_quad=quad.probs[i] if quad else None,
                p_mc=mc.freqs[i] if mc else None,
                ci95=mc.ci95_halfwidth[i] if mc else None,
            )
        )
    reference = closed or quad or (SelectionProbabilities(probs=mc.freqs, method=Method.MONTE_CARLO) if mc else None)
    metadata = RunMetadata(
        label=scenario.label,
        seed=scenario.seed,
        trials=scenario.trials,
        beta=scenario.beta,
        power_mode=scenario.power_mode,
        methods=list(methods),
        sum_defect_closed=closed.sum_defect if closed else None,
        sum_defect_quad=quad.sum_defect if quad else None,
        closed_form_fallback=closed.fallback if closed else None,
        fairness_index=fairness_index(reference) if reference else None,
        ratio_fair=is_ratio_fair(scenario.users),
        check_passed=check_passed,
        cap_binding_rate=(sum(mc.cap_binding_counts) / mc.trials) if mc and mc.cap_binding_counts is not None else None,
        mean_snr_db=mc.mean_snr_db if mc else None,
        wall_time_s=wall_time_s,
    )
    return RunReport(rows=rows, metadata=metadata)


def report_to_csv(report: RunReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in report.rows:
        writer.writerow([row.user, fmt(row.d_sd), fmt(row.d_sp), fmt(row.alpha),
                         fmt(row.p_closed), fmt(row.p_quad), fmt(row.p_mc), fmt(row.ci95)])
    return buf.getvalue()


def report_to_json(report: RunReport) -> str:
    return report.model_dump_json(indent=2) + "\n"


def emit_report(report: RunReport, fmt_name: str = "json", out: Optional[Path] = None, stream: Optional[TextIO] = None) -> str:
    """Serialise a report and write it to out (a file) or stream (stdout by default)."""
    if fmt_name == "csv":
        text = report_to_csv(report)
    elif fmt_name == "json":
        text = report_to_json(report)
    else:
        raise DomainError(f"unknown output format {fmt_name!r}")
    if out is not None:
        Path(out).write_text(text, encoding="utf-8")
        logger.info("Report written to %s", out)
    elif stream is not None:
        stream.write(text)
    return text


def emit_plot_data(reports: Sequence[RunReport], path: Path) -> int:
    """
    Grouped-bar dataset: one row per (scenario, user, series) with series
    "analytic" (closed form, else quadrature) and "mc". Returns the row count.
    """
    if not reports:
        raise DomainError("emit_plot_data needs at least one report")
    written = 0
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(PLOT_HEADER)
        for n, report in enumerate(reports):
            label = report.metadata.label or f"scenario{n + 1}"
            for row in report.rows:
                analytic = row.p_closed if row.p_closed is not None else row.p_quad
                for series, value in (("analytic", analytic), ("mc", row.p_mc)):
                    if value is None:
                        continue
                    writer.writerow([label, row.user, series, fmt(value)])
                    written += 1
    logger.info("Wrote %d plot rows to %s", written, path)
    return written


def sweep(
    scenario: Scenario,
    user: int,
    field: str,
    values: Iterable[float],
    method: Method | str = Method.QUADRATURE,
    cfg: Optional[QuadratureConfig] = None,
) -> list[SweepPoint]:
    """
    Move one user's d_sd or d_sp (user is 0-based) along values and record
    every user's selection probability at each position.
    """
    if field not in SWEEP_FIELDS:
        raise DomainError(f"sweep field must be one of {SWEEP_FIELDS}, got {field!r}")
    if not 0 <= user < scenario.k:
        raise DomainError(f"user index {user} out of range for K = {scenario.k}")
    points = []
    for value in values:
        if not math.isfinite(value) or value <= 0:
            raise DomainError(f"sweep {field} values must be finite and > 0, got {value!r} for user {user + 1}")
        links = list(scenario.users)
        moved = links[user].model_dump(include={"d_sd", "d_sp"}) | {field: value}
        links[user] = UserLink(**moved, beta=scenario.beta)
        probs = selection_probabilities([link.alpha for link in links], method, cfg=cfg)
        points.append(SweepPoint(value=value, user=user + 1, field=field, probs=probs.probs, method=probs.method))
    return points


def sweep_to_csv(points: Sequence[SweepPoint]) -> str:
    if not points:
        raise DomainError("empty sweep")
    k = len(points[0].probs)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([points[0].field, *[f"p{i + 1}" for i in range(k)]])
    for point in points:
        writer.writerow([fmt(point.value), *[fmt(p) for p in point.probs]])
    return buf.getvalue()
