"""Command-line entry point.

    htrmt run --config exp.cfg --out results/
    htrmt sample-tail --alpha 1.5 --count 1000000
    htrmt gof results/records.jsonl
    htrmt report results/records.jsonl --format plotdata --out results/
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from ..rng import Stream
from ..tails import (
    Symmetry,
    TailLaw,
    magnitude_mean,
    parse_slowly_varying,
    sample_iid,
    survival,
)
from .config import ConfigError, load_config
from .report import emit_report, read_jsonl, summarize, write_summary_json
from .runner import run_experiment

log = logging.getLogger("heavytail_rmt")

OVERRIDE_FLAGS = ("ensemble", "alpha", "n", "gamma", "replicates", "top_k", "seed",
                  "beta", "epsilon", "intervals", "threads", "sv", "symmetry")


def _add_experiment_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="key = value experiment file")
    p.add_argument("--ensemble", choices=["wigner", "covariance"])
    p.add_argument("--alpha")
    p.add_argument("--sv", help="unit or logpower:<kappa>")
    p.add_argument("--symmetry", choices=[s.value for s in Symmetry])
    p.add_argument("--n")
    p.add_argument("--gamma")
    p.add_argument("--replicates")
    p.add_argument("--top-k", dest="top_k")
    p.add_argument("--seed")
    p.add_argument("--beta")
    p.add_argument("--epsilon")
    p.add_argument("--intervals", help='e.g. "1:inf,0.5:1"')
    p.add_argument("--threads")


def _config_from_args(args):
    overrides = {k: getattr(args, k, None) for k in OVERRIDE_FLAGS}
    return load_config(args.config, **overrides)


def _print_summary(report) -> None:
    print(f"replicates        {report.replicates}")
    print(f"KS vs Frechet     {report.ks_statistic:.4f}  (5% level {report.ks_threshold_05:.4f})")
    for s in report.intervals:
        hi = "inf" if s.b is None else f"{s.b:g}"
        print(
            f"({s.a:g}, {hi}]".ljust(18)
            + f"mean {s.mean:.3f} vs {s.expected:.3f}  dispersion {s.dispersion_index:.3f}"
            + f"  chi2 {s.chi_square:.2f} on {s.dof} dof (q999 {s.chi_square_q999:.2f})"
        )
    for k, v in report.ratio_median_abs_dev.items():
        print(f"median |ratio_{k} - 1|  {v:.4f}")
    for e, f in report.lemma_frequencies.items():
        print(f"event {e:<12} frequency {f:.3f}")


def cmd_run(args) -> int:
    config = _config_from_args(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    log.info("running %d replicates (n=%d, alpha=%g, %s)", config.replicates, config.n,
             config.alpha, config.ensemble.value)
    records = run_experiment(config)
    report = summarize(records, config)
    emit_report(report, records, "jsonl", out / "records.jsonl")
    write_summary_json(report, out / "summary.json")
    for fmt in args.format or ["csv", "plotdata"]:
        name = {"csv": "summary.csv", "plotdata": "frechet_plot.tsv", "jsonl": "records.jsonl"}[fmt]
        emit_report(report, records, fmt, out / name)
    _print_summary(report)
    return 0


def cmd_sample_tail(args) -> int:
    law = TailLaw(float(args.alpha), parse_slowly_varying(args.sv), Symmetry(args.symmetry))
    draws = sample_iid(law, Stream(int(args.seed), 0), int(args.count))
    if law.symmetry is Symmetry.SYMMETRIC:
        mags = np.abs(draws)
    elif law.symmetry is Symmetry.ONE_SIDED_CENTERED:
        mags = draws + magnitude_mean(law)
    else:
        mags = draws
    rows = []
    for x in (float(t) for t in args.thresholds.split(",")):
        emp = float(np.mean(mags > x))
        theo = survival(law, x)
        sd = math.sqrt(theo * (1 - theo) / draws.size)
        rows.append({"x": x, "empirical": emp, "survival": theo,
                     "z": (emp - theo) / sd if sd > 0 else 0.0})
    out = {"alpha": law.alpha, "sv": str(law.slowly_varying), "symmetry": law.symmetry.value,
           "count": int(draws.size), "exceedance": rows}
    if law.symmetry is Symmetry.SYMMETRIC:
        out["positive_fraction"] = float(np.mean(draws > 0))
    json.dump(out, sys.stdout, indent=2)
    print()
    return 0


def cmd_gof(args) -> int:
    records = read_jsonl(args.records)
    report = summarize(records)
    if args.json:
        json.dump(report.to_dict(), sys.stdout, indent=2)
        print()
    else:
        _print_summary(report)
    return 0


def cmd_report(args) -> int:
    records = read_jsonl(args.records)
    report = summarize(records) if records else None
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    names = {"csv": "summary.csv", "plotdata": "frechet_plot.tsv", "jsonl": "records.jsonl"}
    for fmt in args.format or ["csv", "plotdata"]:
        for p in emit_report(report, records, fmt, out / names[fmt]):
            print(p)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="htrmt", description=__doc__.splitlines()[0] if __doc__ else None)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a Monte Carlo experiment")
    _add_experiment_flags(p)
    p.add_argument("--out", default="results")
    p.add_argument("--format", action="append", choices=["jsonl", "csv", "plotdata"])
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sample-tail", help="exceedance check of the entry sampler")
    p.add_argument("--alpha", required=True)
    p.add_argument("--sv", default="unit")
    p.add_argument("--symmetry", default="symmetric", choices=[s.value for s in Symmetry])
    p.add_argument("--count", default="1000000")
    p.add_argument("--seed", default="0")
    p.add_argument("--thresholds", default="2,5,10")
    p.set_defaults(func=cmd_sample_tail)

    p = sub.add_parser("gof", help="recompute statistics from a records file")
    p.add_argument("records", type=Path)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_gof)

    p = sub.add_parser("report", help="emit csv/plot data from a records file")
    p.add_argument("records", type=Path)
    p.add_argument("--out", default=".")
    p.add_argument("--format", action="append", choices=["jsonl", "csv", "plotdata"])
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
