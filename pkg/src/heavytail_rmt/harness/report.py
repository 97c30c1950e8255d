"""Aggregation of replicate records and report emission."""

from __future__ import annotations

import csv
import json
import math
from collections import Counter
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from ..pointproc import alpha_eff, expected_count, ks_frechet, ks_threshold, poisson_fit
from ..tails import Kind, frechet_cdf
from .config import ExperimentConfig
from .runner import ReplicateRecord

FORMATS = ("jsonl", "csv", "plotdata")
RATIO_QUANTILES = (0.1, 0.25, 0.5, 0.75, 0.9)


@dataclass
class IntervalSummary:
    a: float
    b: float | None  # None for +inf
    expected: float
    mean: float
    histogram: dict[int, int]
    dispersion_index: float
    chi_square: float
    dof: int
    chi_square_q999: float
    complete: bool


@dataclass
class SummaryReport:
    config: dict
    replicates: int
    alpha_eff: float
    ks_statistic: float
    ks_threshold_05: float
    maxima: list[float]
    intervals: list[IntervalSummary]
    ratio_quantiles: dict[int, dict[str, float]]
    ratio_median_abs_dev: dict[int, float]
    lemma_frequencies: dict[str, float]
    truncated_top_median: float | None = None
    nonconverged: int = 0
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return _jsonable(asdict(self))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, np.generic):
        return _jsonable(obj.item())
    return obj


def summarize(records, config: ExperimentConfig | None = None) -> SummaryReport:
    """Aggregate records; the result does not depend on record order.

    ``config`` supplies the echo; without it kind and alpha come from the
    records themselves.
    """
    records = sorted(records, key=lambda r: r.replicate_index)
    if not records:
        raise ValueError("cannot summarize an empty record set")
    kind = Kind(records[0].ensemble)
    alpha = records[0].alpha
    a_eff = alpha_eff(kind, alpha)
    maxima = [r.max_atom for r in records]
    m = len(records)

    intervals = []
    for j, (a, b, _) in enumerate(records[0].interval_counts):
        hi = math.inf if b is None else b
        counts = [r.interval_counts[j][2] for r in records]
        mu = expected_count(kind, alpha, a, hi)
        fit = poisson_fit(counts, mu)
        intervals.append(
            IntervalSummary(
                a=a,
                b=b,
                expected=mu,
                mean=float(np.mean(counts)),
                histogram=dict(sorted(Counter(counts).items())),
                dispersion_index=fit.dispersion_index,
                chi_square=fit.chi_square,
                dof=fit.dof,
                chi_square_q999=fit.chi_square_quantile(0.999),
                complete=all(r.counts_complete for r in records),
            )
        )

    kmax = max(len(r.ratios) for r in records)
    quantiles, mad = {}, {}
    for k in range(kmax):
        vals = np.array(
            [r.ratios[k] for r in records if k < len(r.ratios) and r.ratios[k] is not None]
        )
        if vals.size == 0:
            continue
        quantiles[k + 1] = {f"q{int(q * 100):02d}": float(np.quantile(vals, q)) for q in RATIO_QUANTILES}
        mad[k + 1] = float(np.median(np.abs(vals - 1.0)))

    events = sorted({e for r in records for e in r.lemma})
    freqs = {e: float(np.mean([bool(r.lemma.get(e, False)) for r in records])) for e in events}

    trunc = [r.truncated_top for r in records if r.truncated_top is not None]
    return SummaryReport(
        config=config.to_dict() if config is not None else {"ensemble": kind.value, "alpha": alpha},
        replicates=m,
        alpha_eff=a_eff,
        ks_statistic=ks_frechet(maxima, a_eff),
        ks_threshold_05=ks_threshold(m, 0.05),
        maxima=maxima,
        intervals=intervals,
        ratio_quantiles=quantiles,
        ratio_median_abs_dev=mad,
        lemma_frequencies=freqs,
        truncated_top_median=float(np.median(trunc)) if trunc else None,
        nonconverged=sum(not r.converged for r in records),
    )


# --- persistence --------------------------------------------------------------

def write_jsonl(records, path) -> Path:
    path = Path(path)
    try:
        with open(path, "w", encoding="utf-8") as fh:
            for r in records:
                fh.write(json.dumps(_jsonable(r.to_dict()), allow_nan=False) + "\n")
    except OSError as exc:
        raise OSError(f"could not write records to {path}: {exc}") from exc
    return path


def read_jsonl(path) -> list[ReplicateRecord]:
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise OSError(f"could not read records from {path}: {exc}") from exc
    return [ReplicateRecord.from_dict(json.loads(line)) for line in lines if line.strip()]


REPLICATE_COLUMNS = (
    "replicate_index", "stream_id", "normalizer", "solver", "converged",
    "lambda_1", "atom_1", "top_entry_abs", "ratio_1",
)
INTERVAL_COLUMNS = (
    "a", "b", "expected", "mean", "dispersion_index", "chi_square", "dof", "chi_square_q999",
)


def _csv_value(x):
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return x


def _write_csv(path: Path, columns, rows) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(columns)
            for row in rows:
                w.writerow([_csv_value(v) for v in row])
    except OSError as exc:
        raise OSError(f"could not write csv to {path}: {exc}") from exc


def emit_report(report: SummaryReport | None, records, fmt: str, path) -> list[Path]:
    """Write ``records``/``report`` in one of the supported formats.

    jsonl     one record per line at ``path``
    csv       per-replicate table at ``path``; when a report is given, the
              per-interval table goes to ``<stem>_intervals.csv`` beside it
    plotdata  tab-separated ``x  empirical_cdf  frechet_cdf`` at the sorted
              normalized maxima
    """
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    path = Path(path)
    records = sorted(records, key=lambda r: r.replicate_index)
    if fmt == "jsonl":
        return [write_jsonl(records, path)]

    if fmt == "csv":
        rows = [
            (
                r.replicate_index, r.stream_id, r.normalizer, r.solver, r.converged,
                r.top_eigenvalues[0] if r.top_eigenvalues else None,
                r.max_atom,
                r.top_entries[0][0] if r.top_entries else None,
                r.ratios[0] if r.ratios else None,
            )
            for r in records
        ]
        _write_csv(path, REPLICATE_COLUMNS, rows)
        written = [path]
        if report is not None:
            ipath = path.with_name(path.stem + "_intervals.csv")
            irows = [
                (s.a, math.inf if s.b is None else s.b, s.expected, s.mean,
                 s.dispersion_index, s.chi_square, s.dof, s.chi_square_q999)
                for s in report.intervals
            ]
            _write_csv(ipath, INTERVAL_COLUMNS, irows)
            written.append(ipath)
        return written

    if report is not None:
        a_eff = report.alpha_eff
        maxima = report.maxima
    elif records:
        a_eff = alpha_eff(records[0].ensemble, records[0].alpha)
        maxima = [r.max_atom for r in records]
    else:
        raise ValueError("plotdata needs a report or at least one record")
    x = np.sort(np.asarray(maxima, dtype=float))
    m = x.size
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("x\tempirical_cdf\tfrechet_cdf\n")
            for i, xi in enumerate(x, 1):
                fh.write(f"{float(xi)!r}\t{i / m!r}\t{float(frechet_cdf(a_eff, xi))!r}\n")
    except OSError as exc:
        raise OSError(f"could not write plot data to {path}: {exc}") from exc
    return [path]


def write_summary_json(report: SummaryReport, path) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report.to_dict(), fh, indent=2, allow_nan=False)
        fh.write("\n")
    return path
