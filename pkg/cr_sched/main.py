# cr_sched/main.py

"""
Command-line entry point (`cr-sched`).

    cr-sched run <path|preset> [--method ...] [--trials N] [--seed S]
                 [--format json|csv] [--out FILE] [--check] [--power exact|approx]
    cr-sched plot-data [fig1 fig2 ...] --out FILE
    cr-sched sweep <path|preset> --user 2 --field d_sd --start 0.5 --stop 4 --steps 36
    cr-sched presets
"""

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from cr_sched.cli.presets import PRESET_NAMES
from cr_sched.cli.report import (
    SWEEP_FIELDS,
    emit_plot_data,
    emit_report,
    methods_for,
    run_scenario,
    sweep,
    sweep_to_csv,
)
from cr_sched.cli.scenario import load_scenario_file
from cr_sched.core.errors import CheckFailed, CrSchedError
from cr_sched.core.logger import logger, set_level

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_ERROR = 2
EXIT_UNEXPECTED = 3


def build_parser() -> argparse.ArgumentParser:
    """
    Factory for the argument parser with all subcommands.
    """
    parser = argparse.ArgumentParser(
        prog="cr-sched",
        description="Selection probabilities of opportunistic scheduling in underlay cognitive radio",
    )
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="warnings and errors only")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="compute selection probabilities for one scenario")
    run.add_argument("source", help="scenario JSON file or preset name (" + ", ".join(PRESET_NAMES) + ")")
    run.add_argument("--method", choices=["closed-form", "quadrature", "monte-carlo", "all"])
    run.add_argument("--trials", type=int)
    run.add_argument("--seed", type=int)
    run.add_argument("--format", dest="fmt", choices=["json", "csv"])
    run.add_argument("--out", type=Path, help="write the report here instead of stdout")
    run.add_argument("--check", action="store_true", help="exit 1 unless Monte Carlo matches the analytics within 3 sigma")
    run.add_argument("--power", choices=["exact", "approx"])
    run.add_argument("--record-snr", action="store_true", default=None)
    run.add_argument("--workers", type=int)
    run.add_argument("--backend", choices=["local", "celery"])

    plot = sub.add_parser("plot-data", help="grouped-bar CSV for presets (analytic and Monte Carlo)")
    plot.add_argument("presets", nargs="*", default=list(PRESET_NAMES), help="preset names (default: all)")
    plot.add_argument("--out", type=Path, required=True)
    plot.add_argument("--trials", type=int)
    plot.add_argument("--seed", type=int)
    plot.add_argument("--workers", type=int)

    sw = sub.add_parser("sweep", help="move one user and record every user's selection probability")
    sw.add_argument("source")
    sw.add_argument("--user", type=int, default=2, help="1-based user to move")
    sw.add_argument("--field", choices=SWEEP_FIELDS, default="d_sd")
    sw.add_argument("--start", type=float, default=0.5)
    sw.add_argument("--stop", type=float, default=4.0)
    sw.add_argument("--steps", type=int, default=36)
    sw.add_argument("--method", choices=["closed-form", "quadrature"], default="quadrature")
    sw.add_argument("--out", type=Path)

    sub.add_parser("presets", help="list the built-in scenarios")
    return parser


def _cmd_run(args: argparse.Namespace) -> int:
    overrides = {
        "trials": args.trials,
        "seed": args.seed,
        "method": args.method,
        "format": args.fmt,
        "power_mode": args.power,
        "record_snr": args.record_snr,
    }
    doc = load_scenario_file(args.source, overrides)
    scenario = doc.to_scenario()
    report, comparisons = run_scenario(
        scenario,
        methods_for(doc.method),
        workers=args.workers,
        backend=args.backend,
        check=args.check,
    )
    emit_report(report, doc.format, out=args.out, stream=sys.stdout)
    if args.check and not report.metadata.check_passed:
        failed = [(c.method.value, r.user + 1) for c in comparisons for r in c.rows if not r.passed]
        raise CheckFailed(f"Monte Carlo outside the 3-sigma bound for (method, user) {failed}")
    return EXIT_OK


def _cmd_plot_data(args: argparse.Namespace) -> int:
    reports = []
    for name in args.presets:
        doc = load_scenario_file(name, {"trials": args.trials, "seed": args.seed})
        report, _ = run_scenario(doc.to_scenario(), methods_for("all"), workers=args.workers)
        reports.append(report)
    emit_plot_data(reports, args.out)
    return EXIT_OK


def _cmd_sweep(args: argparse.Namespace) -> int:
    if args.steps < 1:
        raise CrSchedError("--steps must be >= 1")
    scenario = load_scenario_file(args.source).to_scenario()
    values = np.linspace(args.start, args.stop, args.steps).tolist()
    points = sweep(scenario, args.user - 1, args.field, values, args.method)
    text = sweep_to_csv(points)
    if args.out:
        args.out.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_presets(args: argparse.Namespace) -> int:
    for name in PRESET_NAMES:
        doc = load_scenario_file(name)
        scenario = doc.to_scenario()
        links = ", ".join(f"({u.d_sd:g}, {u.d_sp:g})" for u in scenario.users)
        alphas = ", ".join(f"{a:.6g}" for a in scenario.alphas)
        sys.stdout.write(f"{name}: {doc.description}; (d_sd, d_sp) = {links}; alpha = {alphas}\n")
    return EXIT_OK


_COMMANDS = {
    "run": _cmd_run,
    "plot-data": _cmd_plot_data,
    "sweep": _cmd_sweep,
    "presets": _cmd_presets,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.verbose:
        set_level("DEBUG")
    elif args.quiet:
        set_level("WARNING")

    try:
        return _COMMANDS[args.command](args)
    except CheckFailed as e:
        logger.warning("Check failed: %s", e)
        return EXIT_CHECK_FAILED
    except CrSchedError as e:
        logger.error("%s", e)
        print(f"cr-sched: error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except Exception as e:
        logger.exception("Unhandled exception occurred: %s", e)
        return EXIT_UNEXPECTED


if __name__ == "__main__":
    sys.exit(main())
