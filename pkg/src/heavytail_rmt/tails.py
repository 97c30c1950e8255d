"""Regularly varying entry laws, normalizing constants and the Frechet law.

The magnitude of an entry has survival function ``L(x) * x**-alpha`` on
``[1, inf)``.  ``L`` is either identically one (pure Pareto) or
``(1 + ln x)**kappa`` capped so that the survival stays a probability.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import integrate

X0 = 1.0
INVERSION_RTOL = 1e-12
MAX_DOUBLINGS = 200


class Kind(str, enum.Enum):
    """Ensemble family; also tags which normalizer a constant is."""

    WIGNER = "wigner"
    COVARIANCE = "covariance"


class Symmetry(str, enum.Enum):
    SYMMETRIC = "symmetric"
    ONE_SIDED_CENTERED = "onesided"
    # uncentered magnitude; only legal for alpha < 2 in experiments
    POSITIVE = "positive"


@dataclass(frozen=True)
class Unit:
    def __str__(self) -> str:
        return "unit"


@dataclass(frozen=True)
class LogPower:
    kappa: float

    def __post_init__(self):
        if not self.kappa >= 0:
            raise ValueError(f"kappa must be nonnegative, got {self.kappa}")

    def __str__(self) -> str:
        return f"logpower:{self.kappa!r}"


SlowlyVarying = Union[Unit, LogPower]


def parse_slowly_varying(text: str) -> SlowlyVarying:
    """Parse ``"unit"`` or ``"logpower:<kappa>"``."""
    text = text.strip().lower()
    if text == "unit":
        return Unit()
    if text.startswith("logpower"):
        _, _, kappa = text.partition(":")
        return LogPower(float(kappa) if kappa else 1.0)
    raise ValueError(f"unknown slowly varying function {text!r}")


@dataclass(frozen=True)
class TailLaw:
    alpha: float
    slowly_varying: SlowlyVarying = Unit()
    symmetry: Symmetry = Symmetry.SYMMETRIC
    x0: float = X0

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.x0 != X0:
            raise ValueError("magnitude support is fixed at x0 = 1")
        object.__setattr__(self, "symmetry", Symmetry(self.symmetry))

    @property
    def is_unit(self) -> bool:
        return isinstance(self.slowly_varying, Unit)

    @property
    def centered(self) -> bool:
        return self.symmetry is not Symmetry.POSITIVE


@dataclass(frozen=True)
class Normalizer:
    value: float
    kind: Kind
    n: int
    p: int | None = None

    @property
    def threshold(self) -> float:
        """Tail level the normalizer inverts."""
        if self.kind is Kind.WIGNER:
            return 2.0 / (self.n * (self.n + 1))
        return 1.0 / (self.n * self.p)


def _log_survival(law: TailLaw, logx):
    logx = np.asarray(logx, dtype=float)
    out = -law.alpha * logx
    if isinstance(law.slowly_varying, LogPower) and law.slowly_varying.kappa:
        out = out + law.slowly_varying.kappa * np.log1p(logx)
    return np.minimum(out, 0.0)


def survival(law: TailLaw, x):
    """P(|a| > x) for x >= 1.  Accepts scalars or arrays."""
    arr = np.asarray(x, dtype=float)
    if np.any(arr < law.x0):
        raise ValueError(f"survival is defined on [{law.x0}, inf), got {x!r}")
    out = np.exp(_log_survival(law, np.log(arr)))
    return float(out) if out.ndim == 0 else out


def quantile_tail(law: TailLaw, q):
    """Smallest x >= 1 with survival(x) <= q, for q in (0, 1].

    Closed form for the pure Pareto tail; otherwise bisection on ``log x``
    to relative tolerance 1e-12, returning the upper bracket so the defining
    inequality holds exactly.
    """
    qa = np.asarray(q, dtype=float)
    if np.any(~(qa > 0)) or np.any(qa > 1):
        raise ValueError(f"tail level must lie in (0, 1], got {q!r}")
    if law.is_unit:
        out = qa ** (-1.0 / law.alpha)
        return float(out) if out.ndim == 0 else out

    logq = np.log(qa)
    hi = np.full(qa.shape, math.log(2.0))
    for _ in range(MAX_DOUBLINGS):
        short = _log_survival(law, hi) > logq
        if not short.any():
            break
        hi = np.where(short, hi + math.log(2.0), hi)
    else:
        raise ArithmeticError(
            f"could not bracket the tail quantile after {MAX_DOUBLINGS} doublings "
            f"(alpha={law.alpha}, {law.slowly_varying})"
        )
    lo = np.zeros(qa.shape)
    # q == 1 is met at the support edge
    hi = np.where(_log_survival(law, lo) <= logq, 0.0, hi)
    while np.any(hi - lo > INVERSION_RTOL):
        mid = 0.5 * (lo + hi)
        ok = _log_survival(law, mid) <= logq
        hi = np.where(ok, mid, hi)
        lo = np.where(ok, lo, mid)
    out = np.exp(hi)
    return float(out) if out.ndim == 0 else out


def magnitude_mean(law: TailLaw) -> float:
    """E|a| for the magnitude law; finite only for alpha > 1."""
    if law.alpha <= 1:
        raise ValueError(f"mean magnitude is infinite for alpha={law.alpha} <= 1")
    if law.is_unit:
        return law.alpha / (law.alpha - 1.0)
    tail, _ = integrate.quad(lambda x: survival(law, x), law.x0, np.inf, limit=200)
    return law.x0 + tail


def sample_iid(law: TailLaw, stream, count: int) -> np.ndarray:
    """Draw ``count`` i.i.d. entries.

    Consumes ``stream.uniforms(count)`` for the magnitudes and then, for
    symmetric laws, ``stream.signs(count)``.
    """
    if count < 0:
        raise ValueError(f"count must be nonnegative, got {count}")
    if law.symmetry is Symmetry.ONE_SIDED_CENTERED and law.alpha <= 1:
        raise ValueError("one-sided centering needs a finite mean (alpha > 1)")
    mag = np.asarray(quantile_tail(law, stream.uniforms(count)), dtype=float).reshape(count)
    if law.symmetry is Symmetry.SYMMETRIC:
        return mag * stream.signs(count)
    if law.symmetry is Symmetry.ONE_SIDED_CENTERED:
        return mag - magnitude_mean(law)
    return mag


def normalizer(law: TailLaw, kind: Kind, n: int, p: int | None = None) -> Normalizer:
    """b_n (Wigner, level 2/(n(n+1))) or b_np (covariance, level 1/(np))."""
    kind = Kind(kind)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if kind is Kind.COVARIANCE:
        if p is None or p < 1:
            raise ValueError(f"covariance normalizer needs p >= 1, got {p}")
        count = float(n) * float(p)
    else:
        p = None
        count = n * (n + 1) / 2.0
    if law.is_unit:
        value = count ** (1.0 / law.alpha)
    else:
        value = quantile_tail(law, 1.0 / count)
    return Normalizer(float(value), kind, n, p)


def frechet_cdf(alpha_eff: float, x):
    """exp(-x**-alpha_eff) for x > 0 and 0 elsewhere."""
    xa = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        out = np.where(xa > 0, np.exp(-np.power(np.where(xa > 0, xa, 1.0), -alpha_eff)), 0.0)
    return float(out) if out.ndim == 0 else out
