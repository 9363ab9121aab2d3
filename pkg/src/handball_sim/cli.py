"""Command-line entry point.

Examples::

    handball-sim --preset baseline --runs 100000 --seed 42 --out results/
    handball-sim --format g66 --seeding seeded --alpha 4 --beta 24 --runs 100000 --seed 7
    handball-sim --preset validation
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from pathlib import Path
from typing import Sequence

from handball_sim import presets, report
from handball_sim.formats import FORMATS, Design, SeedingPolicy, StructuralError, standard_designs
from handball_sim.metrics import MetricsReport
from handball_sim.montecarlo import SimulationConfig, convergence_trace, run_experiment
from handball_sim.strength import ParameterError, StrengthParams
from handball_sim.validation import run_validation

EXIT_USAGE = 2
EXIT_SIMULATION = 3


class UsageError(Exception):
    pass


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive, got {value}")
    return value


def _u64(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must fit in 64 unsigned bits, got {value}")
    return value


def _nonnegative(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value >= 0 or value == float("inf"):
        raise argparse.ArgumentTypeError(f"must be finite and nonnegative, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="handball-sim", description=__doc__.split("\n")[0])
    parser.add_argument("--preset", choices=presets.PRESETS)
    parser.add_argument("--format", default="all", choices=[*FORMATS, "all"], type=str.lower)
    parser.add_argument("--seeding", default="both", choices=["seeded", "random", "both"], type=str.lower)
    parser.add_argument("--alpha", type=_nonnegative, default=4.0)
    parser.add_argument("--beta", type=_nonnegative, default=24.0)
    parser.add_argument("--runs", type=_positive_int, default=None,
                        help=f"independent runs (default {presets.DEFAULT_RUNS})")
    parser.add_argument("--seed", type=_u64, default=0)
    parser.add_argument("--threads", type=_positive_int, default=None,
                        help="worker threads (default: available CPUs)")
    parser.add_argument("--out", type=Path, default=None, help="output directory (default: print to stdout)")
    parser.add_argument("--emit", choices=report.EMIT_FORMATS, default="csv")
    return parser


def select_designs(fmt: str, seeding: str) -> list[Design]:
    policies = [SeedingPolicy.SEEDED, SeedingPolicy.RANDOM] if seeding == "both" else [SeedingPolicy(seeding)]
    designs = []
    for d in standard_designs():
        if fmt != "all" and d.format.id != fmt:
            continue
        if d.policy is not None and d.policy not in policies:
            continue
        designs.append(d)
    return designs


def _write(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror or exc}") from exc


def write_results(designs: Sequence[Design], reports: dict[str, MetricsReport], emit: str, out: Path | None,
                  title: str = "") -> None:
    """Per-design reports plus the combined comparison file."""
    combined = report.figure_series(designs, reports) if emit == "figdata" else report.summary(designs, reports, emit)
    if out is None:
        if title:
            print(f"# {title}")
        sys.stdout.write(combined)
        return
    ext = report.EXTENSIONS[emit]
    for d in designs:
        _write(out / f"{d.slug}.{ext}", report.emit_report(reports[d.name], emit))
    name = "figdata" if emit == "figdata" else "summary"
    _write(out / f"{name}.{ext}", combined)


def _check_out(out: Path | None) -> None:
    if out is None:
        return
    probe = out
    while not probe.exists():
        probe = probe.parent
    if not probe.is_dir() or not os.access(probe, os.W_OK):
        raise UsageError(f"output path {out} is not writable")


def run_cli(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _check_out(args.out)
        if args.preset == "validation":
            return _validation(args)
        if args.preset == "convergence":
            return _convergence(args)
        if args.preset:
            bundle = presets.expand(args.preset, args.runs, args.seed, args.threads)
            for tag, config in bundle.configs:
                reports = run_experiment(config)
                out = args.out if args.out is None or len(bundle.configs) == 1 else args.out / tag
                write_results(config.designs, reports, args.emit, out, title=f"{tag} ({config.model_label})")
            return 0
        designs = select_designs(args.format, args.seeding)
        config = SimulationConfig(runs=args.runs or presets.DEFAULT_RUNS, seed=args.seed,
                                  params=StrengthParams(args.alpha, args.beta), designs=tuple(designs),
                                  threads=args.threads)
        write_results(designs, run_experiment(config), args.emit, args.out)
        return 0
    except (UsageError, ParameterError) as exc:
        print(f"handball-sim: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except StructuralError as exc:
        print(f"handball-sim: simulation error: {exc}", file=sys.stderr)
        return EXIT_SIMULATION


def _convergence(args: argparse.Namespace) -> int:
    bundle = presets.expand("convergence", args.runs, args.seed, args.threads)
    (_, config), = bundle.configs
    trace = convergence_trace(config, bundle.checkpoints)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["design", "runs", "best_team_win", "best_team_win_se", "top_two_final", "top_two_final_se"])
    for name, points in trace.items():
        for cp in points:
            writer.writerow([name, cp.runs, f"{cp.best_team_win:.6f}", f"{cp.best_team_win_se:.6f}",
                             f"{cp.top_two_final:.6f}", f"{cp.top_two_final_se:.6f}"])
    if args.out is None:
        sys.stdout.write(buf.getvalue())
    else:
        _write(args.out / "convergence.csv", buf.getvalue())
    return 0


def _validation(args: argparse.Namespace) -> int:
    checks = run_validation(args.runs or presets.DEFAULT_RUNS, args.seed, args.threads)
    text = "".join(c.line() + "\n" for c in checks)
    text += f"{sum(c.passed for c in checks)}/{len(checks)} checks passed\n"
    sys.stdout.write(text)
    if args.out is not None:
        _write(args.out / "validation.txt", text)
    return 0 if all(c.passed for c in checks) else 1


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
