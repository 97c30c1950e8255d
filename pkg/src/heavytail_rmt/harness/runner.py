"""Replicate generation: matrix -> spectrum -> point sample -> record."""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from ..eigen import ConvergenceError, Solver, full_spectrum, top_k
from ..ensembles import generate_covariance, generate_wigner, gram, gram_operator
from ..entries import (
    Scope,
    lemma_diagnostics,
    predicted_top_eigenvalues,
    top_entries,
    truncated_top,
)
from ..pointproc import count_in, extract_points
from ..rng import Stream, derive_stream_id
from ..tails import Kind, normalizer
from .config import ExperimentConfig


@dataclass
class ReplicateRecord:
    replicate_index: int
    stream_id: int
    ensemble: str
    alpha: float
    n: int
    p: int | None
    normalizer: float
    solver: str
    converged: bool
    iterations: int
    top_eigenvalues: list[float]
    atoms: list[float]
    top_entries: list[list]  # [abs_value, value, i, j], 0-based positions
    predicted: list[float]
    ratios: list[float | None]
    interval_counts: list[list]  # [a, b or None for +inf, count]
    counts_complete: bool
    lemma: dict[str, bool]
    truncated_top: float | None = None
    elapsed_s: float = field(default=0.0, compare=False)

    @property
    def max_atom(self) -> float:
        """Largest normalized eigenvalue, 0 when no eigenvalue is positive."""
        return self.atoms[0] if self.atoms else 0.0

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "ReplicateRecord":
        return cls(**d)


def replicate_stream(config: ExperimentConfig, index: int) -> Stream:
    return Stream(config.seed, derive_stream_id(config.seed, index))


def generate_matrix(config: ExperimentConfig, stream):
    """The replicate's raw matrix: symmetric n x n or rectangular n x p."""
    if config.ensemble is Kind.WIGNER:
        return generate_wigner(config.law, config.n, stream).entries
    return generate_covariance(config.law, config.n, config.p, stream).entries


def _solve(config: ExperimentConfig, A: np.ndarray, stream):
    """Spectrum of the replicate's symmetric operator under the solver policy."""
    dim = config.n
    if dim <= config.dense_threshold:
        M = A if config.ensemble is Kind.WIGNER else gram(A)
        return full_spectrum(M)
    op = A if config.ensemble is Kind.WIGNER else gram_operator(A)
    return top_k(op, dim, min(config.top_k, dim), tol=config.tol, stream=stream)


def run_replicate(config: ExperimentConfig, index: int) -> ReplicateRecord:
    t0 = time.perf_counter()
    stream = replicate_stream(config, index)
    A = generate_matrix(config, stream)
    kind = config.ensemble
    norm = normalizer(config.law, kind, config.n, config.p)

    converged, spectrum = True, None
    try:
        spectrum = _solve(config, A, stream)
    except ConvergenceError as exc:
        converged, spectrum = False, exc.partial
    if spectrum is None:
        values = np.empty(0)
        solver, iterations = Solver.ITERATIVE.value, 0
    else:
        values = spectrum.values
        solver, iterations = spectrum.solver.value, spectrum.iterations

    points = extract_points(values, norm, kind)
    k = config.top_k
    top_vals = [float(v) for v in values[:k]]
    atoms = [float(x) for x in points.atoms[:k]]

    scope = Scope.UPPER if kind is Kind.WIGNER else Scope.FULL
    stats = top_entries(A, scope, config.m_entries)
    predicted = predicted_top_eigenvalues(stats, kind, min(k, len(stats)))
    ratios: list[float | None] = []
    for l, pred in enumerate(predicted):
        lam = top_vals[l] if l < len(top_vals) else math.nan
        ratios.append(float(lam / pred) if lam > 0 and pred > 0 else None)

    counts = [
        [a, None if math.isinf(b) else b, count_in(points, a, b)] for a, b in config.intervals
    ]
    # a top-k spectrum only yields exact counts if nothing uncomputed can exceed the interval floor
    if spectrum is None or not converged:
        complete = False
    elif spectrum.solver is Solver.DENSE or not config.intervals:
        complete = True
    else:
        scale = norm.value if kind is Kind.WIGNER else norm.value**2
        complete = values[-1] / scale <= min(a for a, _ in config.intervals)

    report = lemma_diagnostics(A, norm, kind, config.alpha, delta=config.delta)

    trunc = None
    if config.beta is not None and kind is Kind.WIGNER:
        trunc = truncated_top(A, config.beta, config.n)

    return ReplicateRecord(
        replicate_index=index,
        stream_id=stream.stream_id,
        ensemble=kind.value,
        alpha=config.alpha,
        n=config.n,
        p=config.p,
        normalizer=norm.value,
        solver=solver,
        converged=converged,
        iterations=iterations,
        top_eigenvalues=top_vals,
        atoms=atoms,
        top_entries=[[float(a), float(v), int(i), int(j)] for a, v, (i, j) in stats.as_rows()],
        predicted=[float(x) for x in predicted],
        ratios=ratios,
        interval_counts=counts,
        counts_complete=bool(complete),
        lemma=report.flags(),
        truncated_top=trunc,
        elapsed_s=time.perf_counter() - t0,
    )


def run_experiment(config: ExperimentConfig, threads: int | None = None) -> list[ReplicateRecord]:
    """All replicates of ``config``, ordered by replicate index.

    Replicates are independent (each owns its stream), so the result does
    not depend on ``threads``.
    """
    threads = config.threads if threads is None else threads
    indices = range(config.replicates)
    if threads <= 1:
        return [run_replicate(config, r) for r in indices]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda r: run_replicate(config, r), indices))
