"""Order statistics of matrix entries and entry-level eigenvalue diagnostics."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .eigen import full_spectrum, largest_eigenvalues
from .ensembles import beta_range, generate_wigner, truncation_split
from .rng import Stream, derive_stream_id, splitmix64
from .tails import Kind, Normalizer, Symmetry, TailLaw, magnitude_mean, survival


class Scope(str, enum.Enum):
    UPPER = "upper"  # upper triangle with diagonal, for symmetric matrices
    FULL = "full"


@dataclass(frozen=True)
class EntryOrderStatistics:
    """Top-m entries by |value|; rows/cols are 0-based."""

    abs_values: np.ndarray
    values: np.ndarray
    rows: np.ndarray
    cols: np.ndarray
    scope: Scope

    def __len__(self) -> int:
        return self.abs_values.size

    @property
    def positions(self) -> list[tuple[int, int]]:
        return [(int(i), int(j)) for i, j in zip(self.rows, self.cols)]

    def as_rows(self) -> list[tuple[float, float, tuple[int, int]]]:
        return [(float(a), float(v), p) for a, v, p in zip(self.abs_values, self.values, self.positions)]


def top_entries(M, scope: Scope | str, m: int) -> EntryOrderStatistics:
    """Exact top-m entries by absolute value.

    Ties in |value| are broken lexicographically by (row, col).
    """
    M = np.asarray(M, dtype=float)
    scope = Scope(scope)
    if scope is Scope.UPPER:
        if M.shape[0] != M.shape[1]:
            raise ValueError("upper-triangle scope needs a square matrix")
        rows, cols = np.triu_indices(M.shape[0])
    else:
        rows, cols = np.indices(M.shape).reshape(2, -1)
    vals = M[rows, cols]
    if not 0 <= m <= vals.size:
        raise ValueError(f"m={m} exceeds the {vals.size} entries in scope")
    absv = np.abs(vals)
    if 0 < m < vals.size:
        # every entry tied with the m-th largest must be a candidate
        cut = np.partition(absv, vals.size - m)[vals.size - m]
        cand = np.flatnonzero(absv >= cut)
    else:
        cand = np.arange(vals.size)
    order = cand[np.lexsort((cols[cand], rows[cand], -absv[cand]))][:m]
    return EntryOrderStatistics(absv[order], vals[order], rows[order], cols[order], scope)


def predicted_top_eigenvalues(stats: EntryOrderStatistics, kind: Kind | str, k: int) -> np.ndarray:
    """|a_(l)| (Wigner) or a_(l)**2 (covariance) for l = 1..k."""
    kind = Kind(kind)
    if k > len(stats):
        raise ValueError(f"k={k} exceeds the {len(stats)} available order statistics")
    top = stats.abs_values[:k]
    return top.copy() if kind is Kind.WIGNER else top**2


def inf_norm(M) -> float:
    """Maximum absolute row sum."""
    M = np.asarray(M, dtype=float)
    if M.size == 0:
        return 0.0
    return float(np.max(np.sum(np.abs(M), axis=1)))


def rayleigh_lower_bound(M, stats: EntryOrderStatistics) -> float:
    """<M v, v> for the test vector built on the largest entry.

    v = (e_i + s e_j)/sqrt(2) with s the sign of the entry (s = +1 for a
    nonnegative entry), or v = e_i for a diagonal entry.
    """
    M = np.asarray(M, dtype=float)
    if len(stats) == 0:
        raise ValueError("need at least one order statistic")
    i, j = int(stats.rows[0]), int(stats.cols[0])
    if i == j:
        return float(M[i, i])
    s = 1.0 if M[i, j] >= 0 else -1.0
    return float(0.5 * (M[i, i] + M[j, j]) + 0.5 * s * (M[i, j] + M[j, i]))


# --- structural events on the placement of large entries -------------------

@dataclass(frozen=True)
class EventOutcome:
    occurred: bool
    threshold: float
    witness: tuple | None = None


@dataclass(frozen=True)
class LemmaReport:
    kind: Kind
    normalizer: float
    events: dict[str, EventOutcome] = field(default_factory=dict)

    def flags(self) -> dict[str, bool]:
        return {name: ev.occurred for name, ev in self.events.items()}


def _row_pair(A: np.ndarray, thr: float):
    big = np.abs(A) > thr
    counts = big.sum(axis=1)
    hit = np.flatnonzero(counts >= 2)
    if hit.size == 0:
        return EventOutcome(False, thr)
    i = int(hit[0])
    j, k = (int(c) for c in np.flatnonzero(big[i])[:2])
    return EventOutcome(True, thr, (i, j, k))


def _row_mass(A: np.ndarray, thr: float):
    absA = np.abs(A)
    mx = absA.max(axis=1)
    rest = absA.sum(axis=1) - mx
    hit = np.flatnonzero((mx > thr) & (rest > thr))
    if hit.size == 0:
        return EventOutcome(False, thr)
    return EventOutcome(True, thr, (int(hit[0]),))


def lemma_diagnostics(
    M,
    normalizer: Normalizer,
    kind: Kind | str,
    alpha: float,
    delta: float = 0.01,
    mass_exponent: str = "alpha/8",
) -> LemmaReport:
    """Evaluate the large-entry placement events on one matrix.

    Wigner (symmetric M, b = b_n):
      ``diagonal``  some |a_ii| > b**(11/20)
      ``pair``      some i < j with |a_ij| > b**0.99 and |a_ii| + |a_jj| > b**0.1
      ``row_pair``  some row with two entries above b**(3/4 + delta)
      ``row_mass``  some row whose max and remaining absolute sum both exceed
                    b**(3/4 + alpha/8)
    Covariance (n x p M, b = b_np): ``row_pair``, ``row_mass`` and the
    column analogue ``column_mass``.

    ``mass_exponent="alpha/16"`` selects the sharper exponent used for the
    truncated matrix in the 2 <= alpha < 4 regime.
    """
    kind = Kind(kind)
    if normalizer.kind is not kind:
        raise ValueError(f"normalizer is for {normalizer.kind.value}, matrix is {kind.value}")
    if mass_exponent not in ("alpha/8", "alpha/16"):
        raise ValueError(f"unknown mass exponent {mass_exponent!r}")
    A = np.asarray(M, dtype=float)
    b = normalizer.value
    mass_thr = b ** (0.75 + alpha / (8.0 if mass_exponent == "alpha/8" else 16.0))
    pair_thr = b ** (0.75 + delta)
    events: dict[str, EventOutcome] = {}

    if kind is Kind.WIGNER:
        if A.shape[0] != A.shape[1]:
            raise ValueError("Wigner diagnostics need a square matrix")
        d = np.abs(np.diag(A))
        thr = b ** (11 / 20)
        hit = np.flatnonzero(d > thr)
        events["diagonal"] = EventOutcome(bool(hit.size), thr, (int(hit[0]),) if hit.size else None)

        big_thr, small_thr = b**0.99, b**0.1
        rows, cols = np.nonzero(np.triu(np.abs(A) > big_thr, k=1))
        ok = (d[rows] + d[cols]) > small_thr
        if ok.any():
            w = int(np.flatnonzero(ok)[0])
            events["pair"] = EventOutcome(True, big_thr, (int(rows[w]), int(cols[w])))
        else:
            events["pair"] = EventOutcome(False, big_thr)

        events["row_pair"] = _row_pair(A, pair_thr)
        events["row_mass"] = _row_mass(A, mass_thr)
    else:
        events["row_pair"] = _row_pair(A, pair_thr)
        events["row_mass"] = _row_mass(A, mass_thr)
        events["column_mass"] = _row_mass(A.T, mass_thr)
    return LemmaReport(kind, b, events)


# --- truncated moments ------------------------------------------------------

def magnitude_density(law: TailLaw, x):
    """Density of |a| on [1, inf): minus the derivative of the survival."""
    x = np.asarray(x, dtype=float)
    s = survival(law, x)
    if law.is_unit:
        return law.alpha * s / x
    kappa = law.slowly_varying.kappa
    rate = law.alpha - kappa / (1.0 + np.log(x))
    # inside the capped region the survival is flat
    return np.where(s < 1.0, s * np.maximum(rate, 0.0) / x, 0.0)


def _quad(f, lo, hi) -> float:
    if hi <= lo:
        return 0.0
    val, _ = integrate.quad(f, lo, hi, limit=400, epsabs=0.0, epsrel=1e-11)
    return float(val)


def truncated_moments(law: TailLaw, threshold: float, order: int) -> float:
    """E[a**order ; |a| <= threshold] for even order in {2, 4, 6, 8}.

    Closed form for the pure Pareto magnitude (symmetric or uncentered);
    quadrature otherwise.
    """
    if order not in (2, 4, 6, 8):
        raise ValueError(f"unsupported order {order}; expected one of 2, 4, 6, 8")
    if threshold < law.x0:
        raise ValueError(f"threshold must be >= {law.x0}, got {threshold}")
    a = law.alpha
    if law.symmetry is not Symmetry.ONE_SIDED_CENTERED:
        if law.is_unit:
            if math.isinf(threshold):
                if order < a:
                    return a / (a - order)
                return math.inf
            if order == a:
                return a * math.log(threshold)
            return a * (threshold ** (order - a) - 1.0) / (order - a)
        return _quad(lambda x: x**order * magnitude_density(law, x), law.x0, threshold)
    mu = magnitude_mean(law)
    lo, hi = max(law.x0, mu - threshold), mu + threshold
    return _quad(lambda x: (x - mu) ** order * magnitude_density(law, x), lo, hi)


def truncated_first_moment(law: TailLaw, threshold: float) -> float:
    """E[a ; |a| <= threshold]; zero for symmetric laws."""
    if threshold < law.x0:
        raise ValueError(f"threshold must be >= {law.x0}, got {threshold}")
    a = law.alpha
    if law.symmetry is Symmetry.SYMMETRIC:
        return 0.0
    if law.symmetry is Symmetry.POSITIVE:
        if law.is_unit:
            if a == 1.0:
                return math.log(threshold)
            return a * (threshold ** (1.0 - a) - 1.0) / (1.0 - a)
        return _quad(lambda x: x * magnitude_density(law, x), law.x0, threshold)
    mu = magnitude_mean(law)
    lo, hi = max(law.x0, mu - threshold), mu + threshold
    return _quad(lambda x: (x - mu) * magnitude_density(law, x), lo, hi)


# --- boundedness of the truncated top eigenvalue ----------------------------

def epsilon_cap(alpha: float, beta: float) -> float:
    """Upper limit on the scaling slack epsilon for given alpha, beta."""
    return min(
        1.0 / alpha - 0.25,
        1.0 / alpha - beta / 2.0,
        (8.0 / alpha - 1.0 - beta * (5.0 - alpha / 2.0)) / 16.0,
    )


def truncated_top(M, beta: float, n: int) -> float:
    """lambda_max of the part of M with |entry| <= n**beta (0 if it vanishes)."""
    low = truncation_split(M, beta, n).low_part
    if not np.any(low):
        return 0.0
    return float(full_spectrum(low).values[0])


@dataclass(frozen=True)
class ScalingResult:
    sizes: list[int]
    medians: list[float]
    values: dict[int, list[float]]

    @property
    def consecutive_ratios(self) -> list[float]:
        return [b / a for a, b in zip(self.medians, self.medians[1:])]


def truncated_top_scaling(
    law: TailLaw,
    beta: float,
    epsilon: float,
    sizes,
    replicates: int,
    seed: int = 0,
    dense_threshold: int = 2048,
) -> ScalingResult:
    """Median of lambda_max(A1) / n**(2/alpha - epsilon) for each n.

    Replicate r at size n draws from
    ``Stream(seed, derive_stream_id(splitmix64(seed ^ n), r))``.
    """
    alpha = law.alpha
    if not 2 <= alpha < 4:
        raise ValueError(f"truncated scaling needs 2 <= alpha < 4, got {alpha}")
    lo, hi = beta_range(alpha)
    if not lo < beta < hi:
        raise ValueError(f"beta={beta} outside ({lo}, {hi})")
    cap = epsilon_cap(alpha, beta)
    if not 0 < epsilon < cap:
        raise ValueError(f"epsilon={epsilon} outside (0, {cap})")
    if replicates < 1:
        raise ValueError("need at least one replicate")

    values: dict[int, list[float]] = {}
    medians = []
    for n in sizes:
        size_seed = splitmix64(seed ^ int(n))
        scale = float(n) ** (2.0 / alpha - epsilon)
        out = []
        for r in range(replicates):
            stream = Stream(seed, derive_stream_id(size_seed, r))
            M = generate_wigner(law, n, stream).entries
            low = truncation_split(M, beta, n).low_part
            if np.any(low):
                top = largest_eigenvalues(low, n, 1, dense_threshold=dense_threshold).values[0]
            else:
                top = 0.0
            out.append(float(top) / scale)
        values[int(n)] = out
        medians.append(float(np.median(out)))
    return ScalingResult([int(n) for n in sizes], medians, values)
