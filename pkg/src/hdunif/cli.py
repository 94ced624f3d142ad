"""Command-line interface.

Subcommands:
  simulate <spec.json>   run a user-defined Monte Carlo grid
  figure <1|2|3>         run one of the three built-in experiments
  test <data.csv>        run a single uniformity test on a CSV of observations
  power                  tabulate an asymptotic power curve
  sphericity <data.csv>  run the three sphericity tests on a CSV

Results are written as CSV/JSON into an output directory (--out, else the
HDUNIF_OUTDIR environment variable, else ./results).  Exit codes: 0 success,
1 usage error, 2 data error.  Test decisions never affect the exit code.
"""

import argparse
import csv
import json
import math
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import stats
from .errors import HdunifError, UsageError
from .ingest import ingest_csv
from .montecarlo import (DEFAULT_MASTER_SEED, Cell, CellResult, ExperimentSpec,
                         figure_spec, run_grid)
from .power import power_curve
from .sphere import unit_vector

ENV_OUTDIR = "HDUNIF_OUTDIR"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="hdunif", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--out", default=None, help="output directory")
    sub = parser.add_subparsers(dest="command")

    sim = sub.add_parser("simulate", help="run a Monte Carlo grid from a JSON spec")
    sim.add_argument("spec", help="path to the experiment spec (JSON)")
    sim.add_argument("--seed", type=int, default=None, help="master seed override")
    sim.add_argument("--threads", type=int, default=1)

    fig = sub.add_parser("figure", help="run a built-in experiment grid")
    fig.add_argument("which", type=int, choices=(1, 2, 3))
    fig.add_argument("--seed", type=int, default=DEFAULT_MASTER_SEED)
    fig.add_argument("--threads", type=int, default=1)
    fig.add_argument("--replicates", type=int, default=None)
    fig.add_argument("--plot", action="store_true", help="also render an SVG")

    tst = sub.add_parser("test", help="run one uniformity test on a CSV")
    tst.add_argument("data", help="CSV of observations (rows)")
    mode = tst.add_mutually_exclusive_group()
    mode.add_argument("--theta", default=None, help="CSV file with the specified axis")
    mode.add_argument("--highdim", action="store_true",
                      help="standardized Rayleigh test (default)")
    mode.add_argument("--fixedp", action="store_true", help="chi-square Rayleigh test")
    tst.add_argument("--alpha", type=float, default=0.05)
    tst.add_argument("--impute", action="store_true", help="impute missing cells")
    tst.add_argument("--center", action="store_true", help="center columns first")

    pwr = sub.add_parser("power", help="tabulate an asymptotic power curve")
    pwr.add_argument("--curve", required=True, choices=("specified", "highdim", "fixedp"))
    pwr.add_argument("--alpha", type=float, default=0.05)
    pwr.add_argument("--tau-grid", required=True,
                     help="comma-separated tau values, e.g. 0,1.2,2.4")
    pwr.add_argument("--p", type=int, default=None, help="dimension (fixedp curve)")

    sph = sub.add_parser("sphericity", help="run the three sphericity tests on a CSV")
    sph.add_argument("data")
    sph.add_argument("--alpha", type=float, default=0.05)
    sph.add_argument("--no-impute", action="store_true")
    sph.add_argument("--no-center", action="store_true")
    return parser


def _outdir(args) -> Path:
    out = args.out or os.environ.get(ENV_OUTDIR) or "results"
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _fmt(x: float) -> str:
    if isinstance(x, float) and math.isnan(x):
        return ""
    return repr(float(x))


def write_results_csv(path: Path, results: Sequence[CellResult]) -> None:
    cols = ["n", "p", "family", "j", "ell", "test_id", "M", "rejections",
            "frequency", "se", "asymptotic_power", "seed"]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(cols)
        for res in results:
            c = res.cell
            for test_id, tf in res.per_test.items():
                writer.writerow([
                    c.n, c.p, c.family, "" if c.j is None else c.j, _fmt(c.ell),
                    test_id, c.replicates, tf.rejections, _fmt(tf.frequency),
                    _fmt(tf.se), _fmt(tf.asymptotic), res.master_seed,
                ])


def _outcome_record(outcome: stats.TestOutcome, n: int, p: int) -> dict:
    return {
        "test_id": outcome.test_id,
        "n": n,
        "p": p,
        "statistic": outcome.statistic,
        "critical": outcome.critical,
        "p_value": outcome.p_value,
        "reject": outcome.reject,
        "alpha": outcome.alpha,
    }


def _write_json(path: Path, payload) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def parse_spec_json(path: str) -> ExperimentSpec:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read spec {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON in {path}: {exc}") from exc
    try:
        cells = tuple(
            Cell(family=c["family"], n=int(c["n"]), p=int(c["p"]), ell=float(c["ell"]),
                 j=c.get("j"), alpha=float(c.get("alpha", 0.05)),
                 replicates=int(c.get("replicates", 2500)), tests=tuple(c["tests"]))
            for c in raw["cells"]
        )
        return ExperimentSpec(name=str(raw.get("name", "experiment")), cells=cells,
                              master_seed=int(raw.get("master_seed", DEFAULT_MASTER_SEED)))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad experiment spec {path}: {exc}") from exc


def _report_failures(outcome, stream=sys.stderr) -> None:
    for cell, message in outcome.failures:
        print(f"cell {cell.cell_id} failed: {message}", file=stream)


def _cmd_simulate(args) -> int:
    spec = parse_spec_json(args.spec)
    if args.seed is not None:
        spec = ExperimentSpec(name=spec.name, cells=spec.cells, master_seed=args.seed)
    outcome = run_grid(spec, threads=args.threads)
    _report_failures(outcome)
    outdir = _outdir(args)
    csv_path = outdir / f"{spec.name}.csv"
    write_results_csv(csv_path, outcome.results)
    _write_json(outdir / f"{spec.name}.json", {
        "name": spec.name,
        "master_seed": spec.master_seed,
        "cells_run": len(outcome.results),
        "cells_failed": len(outcome.failures),
    })
    print(f"wrote {csv_path}")
    return 0


def _cmd_figure(args) -> int:
    spec = figure_spec(args.which, replicates=args.replicates, master_seed=args.seed)
    outcome = run_grid(spec, threads=args.threads)
    _report_failures(outcome)
    outdir = _outdir(args)
    csv_path = outdir / f"figure{args.which}.csv"
    write_results_csv(csv_path, outcome.results)
    print(f"wrote {csv_path}")
    if args.plot:
        from .plotting import emit_plot

        svg_path = outdir / f"figure{args.which}.svg"
        emit_plot(list(outcome.results), str(svg_path), title=f"figure {args.which}")
        print(f"wrote {svg_path}")
    return 0


def _read_theta(path: str, p: int) -> np.ndarray:
    values: list[float] = []
    with open(path, encoding="utf-8") as fh:
        for row in csv.reader(fh):
            values.extend(float(tok) for tok in row if tok.strip())
    if len(values) != p:
        raise UsageError(f"theta file has {len(values)} entries, data has p={p}")
    return unit_vector(values)


def _cmd_test(args) -> int:
    report = ingest_csv(args.data, impute=args.impute, center=args.center, project=True)
    sample = report.sample
    if args.theta:
        theta = _read_theta(args.theta, report.p)
        outcome = stats.specified_theta_test(sample, theta, args.alpha)
    elif args.fixedp:
        outcome = stats.rayleigh_test_fixedp(sample, args.alpha)
    else:
        outcome = stats.rayleigh_test_highdim(sample, args.alpha)
    record = _outcome_record(outcome, report.n, report.p)
    outdir = _outdir(args)
    _write_json(outdir / f"test_{outcome.test_id}.json", record)
    print(json.dumps(record, sort_keys=True))
    return 0


def _cmd_power(args) -> int:
    try:
        taus = [float(tok) for tok in args.tau_grid.split(",") if tok.strip()]
    except ValueError as exc:
        raise UsageError(f"bad --tau-grid: {exc}") from exc
    if not taus:
        raise UsageError("--tau-grid must contain at least one value")
    if args.curve == "fixedp" and args.p is None:
        raise UsageError("--curve fixedp requires --p")
    curve = power_curve(args.curve, args.alpha, taus, p=args.p)
    outdir = _outdir(args)
    path = outdir / f"power_{args.curve}.csv"
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["tau", "power"])
        for t, v in zip(curve.taus, curve.values):
            writer.writerow([_fmt(t), _fmt(v)])
    for t, v in zip(curve.taus, curve.values):
        print(f"{t:g}\t{v:.6f}")
    print(f"wrote {path}")
    return 0


def _cmd_sphericity(args) -> int:
    report = ingest_csv(args.data, impute=not args.no_impute,
                        center=not args.no_center, project=False)
    data = report.sample
    outcomes = [
        stats.rayleigh_signs_test(data, args.alpha),
        stats.john_sphericity_test(data, args.alpha),
        stats.sign_sphericity_test(data, args.alpha),
    ]
    records = [_outcome_record(o, report.n, report.p) for o in outcomes]
    outdir = _outdir(args)
    _write_json(outdir / "sphericity.json", records)
    for record in records:
        print(json.dumps(record, sort_keys=True))
    return 0


_COMMANDS = {
    "simulate": _cmd_simulate,
    "figure": _cmd_figure,
    "test": _cmd_test,
    "power": _cmd_power,
    "sphericity": _cmd_sphericity,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required (see --help)")
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except HdunifError as exc:
        print(f"data error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
