"""Normalized eigenvalue point processes and their goodness of fit."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .eigen import Spectrum
from .tails import Kind, Normalizer, frechet_cdf

KS_CRITICAL = {0.10: 1.224, 0.05: 1.358, 0.01: 1.628, 0.001: 1.949}
CLAMP_RTOL = 1e-10


@dataclass(frozen=True)
class PointSample:
    atoms: np.ndarray
    normalizer_used: float
    kind: Kind

    def __len__(self) -> int:
        return self.atoms.size


@dataclass(frozen=True)
class FitReport:
    ks_statistic: float
    sample_size: int
    dispersion_index: float
    chi_square: float
    dof: int
    interval: tuple[float, float]
    expected_count: float


def alpha_eff(kind: Kind | str, alpha: float) -> float:
    """Tail index of the limiting maximum: alpha (Wigner) or alpha/2 (covariance)."""
    return alpha if Kind(kind) is Kind.WIGNER else alpha / 2.0


def extract_points(spectrum, normalizer: Normalizer, kind: Kind | str) -> PointSample:
    """Positive eigenvalues divided by b_n (Wigner) or b_np**2 (covariance).

    Values at or below ``1e-10 * max|lambda|`` are dropped; for covariance
    spectra that removes round-off negatives and exact zeros alike.
    """
    kind = Kind(kind)
    if normalizer.kind is not kind:
        raise ValueError(f"normalizer is for {normalizer.kind.value}, spectrum is {kind.value}")
    vals = spectrum.values if isinstance(spectrum, Spectrum) else np.asarray(spectrum, dtype=float)
    vals = np.sort(vals)[::-1]
    if kind is Kind.WIGNER:
        keep = vals[vals > 0]
        scale = normalizer.value
    else:
        cut = CLAMP_RTOL * (float(np.max(np.abs(vals))) if vals.size else 0.0)
        keep = vals[vals > cut]
        scale = normalizer.value**2
    return PointSample(keep / scale, normalizer.value, kind)


def _check_interval(a: float, b: float) -> None:
    if not (a > 0 and b > a):
        raise ValueError(f"need 0 < a < b, got ({a}, {b}]")


def expected_count(kind: Kind | str, alpha: float, a: float, b: float = math.inf) -> float:
    """Mean number of limit-process atoms in (a, b]."""
    _check_interval(a, b)
    e = alpha_eff(kind, alpha)
    tail_b = 0.0 if math.isinf(b) else b ** (-e)
    return a ** (-e) - tail_b


def count_in(sample: PointSample | np.ndarray, a: float, b: float = math.inf) -> int:
    """Number of atoms in (a, b]."""
    _check_interval(a, b)
    atoms = sample.atoms if isinstance(sample, PointSample) else np.asarray(sample, dtype=float)
    return int(np.count_nonzero((atoms > a) & (atoms <= b)))


def ks_statistic(sample, cdf) -> float:
    """Two-sided Kolmogorov-Smirnov distance to a continuous CDF."""
    x = np.sort(np.asarray(sample, dtype=float))
    m = x.size
    if m == 0:
        raise ValueError("KS statistic of an empty sample")
    F = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, m + 1)
    return float(max(np.max(i / m - F), np.max(F - (i - 1) / m)))


def ks_frechet(maxima, alpha_eff: float) -> float:
    """KS distance of the sample to the Frechet law exp(-x**-alpha_eff)."""
    return ks_statistic(maxima, lambda x: frechet_cdf(alpha_eff, x))


def ks_threshold(m: int, level: float = 0.05) -> float:
    """Asymptotic KS critical value c(level)/sqrt(m)."""
    return KS_CRITICAL[level] / math.sqrt(m)


@dataclass(frozen=True)
class PoissonFit:
    dispersion_index: float
    chi_square: float
    dof: int
    bins: list[tuple[int, int | None]]
    observed: list[int]
    expected: list[float]

    def chi_square_quantile(self, q: float = 0.999) -> float:
        return float(stats.chi2.ppf(q, self.dof)) if self.dof > 0 else math.nan


def _pooled_bins(mean: float, total: int, min_expected: float = 5.0):
    """Adjacent count bins [lo, hi] (hi None = open tail), each expecting >= 5."""
    kmax = int(stats.poisson.ppf(1.0 - 1e-12, mean)) + 1
    pmf = stats.poisson.pmf(np.arange(kmax + 1), mean) * total
    bins, exp = [], []
    lo, acc = 0, 0.0
    for k in range(kmax + 1):
        acc += pmf[k]
        if acc >= min_expected:
            bins.append([lo, k])
            exp.append(acc)
            lo, acc = k + 1, 0.0
    # remaining upper tail, including everything beyond kmax
    tail = total * stats.poisson.sf(lo - 1, mean) if lo > 0 else float(total)
    if bins and tail < min_expected:
        bins[-1][1] = None
        exp[-1] += tail
    else:
        bins.append([lo, None])
        exp.append(tail)
    return [tuple(b) for b in bins], exp


def poisson_fit(counts, theoretical_mean: float) -> PoissonFit:
    """Dispersion index and pooled chi-square against Poisson(theoretical_mean).

    No parameter is estimated, so dof = bins - 1.  When fewer than two bins
    can be formed the chi-square is reported as NaN with dof 0.
    """
    c = np.asarray(counts, dtype=int)
    if c.size == 0:
        raise ValueError("poisson_fit needs at least one count")
    if np.any(c < 0):
        raise ValueError("counts must be nonnegative")
    if not theoretical_mean > 0:
        raise ValueError(f"theoretical mean must be positive, got {theoretical_mean}")
    mean = float(c.mean())
    var = float(c.var(ddof=1)) if c.size > 1 else 0.0
    dispersion = var / mean if mean > 0 else math.nan

    bins, exp = _pooled_bins(theoretical_mean, c.size)
    obs = []
    for lo, hi in bins:
        sel = c >= lo if hi is None else (c >= lo) & (c <= hi)
        obs.append(int(np.count_nonzero(sel)))
    if len(bins) < 2:
        warnings.warn(
            f"degenerate pooling: {c.size} counts at mean {theoretical_mean} give a single bin",
            RuntimeWarning,
            stacklevel=2,
        )
        return PoissonFit(dispersion, math.nan, 0, bins, obs, exp)
    e = np.asarray(exp)
    chi2 = float(np.sum((np.asarray(obs) - e) ** 2 / e))
    return PoissonFit(dispersion, chi2, len(bins) - 1, bins, obs, exp)


def semicircle_density(sigma_sq: float, x):
    """Semicircle density with variance sigma_sq; zero outside |x| <= 2 sigma."""
    if not sigma_sq > 0:
        raise ValueError(f"sigma_sq must be positive, got {sigma_sq}")
    x = np.asarray(x, dtype=float)
    inside = np.clip(4.0 * sigma_sq - x**2, 0.0, None)
    out = np.sqrt(inside) / (2.0 * math.pi * sigma_sq)
    return float(out) if out.ndim == 0 else out
