"""Experiment configuration and its flat key-value file format.

Example file::

    # Frechet check for the heavy-tailed Wigner ensemble
    ensemble = wigner
    alpha = 1.0
    sv = unit
    symmetry = symmetric
    n = 300
    replicates = 400
    top_k = 5
    intervals = 1:inf, 0.5:1, 1:2, 2:inf
    seed = 20240601
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from pathlib import Path

from ..ensembles import beta_range
from ..entries import epsilon_cap
from ..tails import Kind, SlowlyVarying, Symmetry, TailLaw, Unit, parse_slowly_varying

DEFAULT_INTERVALS = ((1.0, math.inf), (0.5, 1.0), (1.0, 2.0), (2.0, math.inf))

FILE_KEYS = (
    "ensemble", "alpha", "sv", "symmetry", "n", "gamma", "replicates", "top_k",
    "intervals", "seed", "dense_threshold", "tol", "beta", "epsilon",
)


class ConfigError(ValueError):
    pass


def parse_intervals(text: str) -> tuple[tuple[float, float], ...]:
    """Parse ``"a:b,a:b"``; ``inf`` (or an empty upper end) means unbounded."""
    out = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        a, sep, b = chunk.partition(":")
        if not sep:
            raise ConfigError(f"interval {chunk!r} is not of the form a:b")
        lo = float(a)
        hi = math.inf if b.strip().lower() in ("", "inf", "infinity") else float(b)
        out.append((lo, hi))
    return tuple(out)


def format_intervals(intervals) -> str:
    return ",".join(f"{a!r}:{'inf' if math.isinf(b) else repr(b)}" for a, b in intervals)


@dataclass(frozen=True)
class ExperimentConfig:
    ensemble: Kind = Kind.WIGNER
    alpha: float = 1.0
    sv: SlowlyVarying = Unit()
    symmetry: Symmetry = Symmetry.SYMMETRIC
    n: int = 100
    gamma: float = 1.0
    replicates: int = 100
    top_k: int = 5
    top_m: int = 10
    intervals: tuple[tuple[float, float], ...] = DEFAULT_INTERVALS
    seed: int = 0
    dense_threshold: int = 2048
    tol: float = 1e-10
    beta: float | None = None
    epsilon: float | None = None
    delta: float = 0.01
    threads: int = 1

    def __post_init__(self):
        object.__setattr__(self, "ensemble", Kind(self.ensemble))
        object.__setattr__(self, "symmetry", Symmetry(self.symmetry))
        object.__setattr__(self, "intervals", tuple((float(a), float(b)) for a, b in self.intervals))
        if not 0 < self.alpha < 4:
            raise ConfigError(f"alpha must lie in (0, 4), got {self.alpha}")
        if 2 <= self.alpha and self.symmetry is Symmetry.POSITIVE:
            raise ConfigError("entries must be centered for 2 <= alpha < 4")
        if self.symmetry is Symmetry.ONE_SIDED_CENTERED and self.alpha <= 1:
            raise ConfigError("one-sided centering needs alpha > 1")
        if self.n < 1:
            raise ConfigError(f"n must be >= 1, got {self.n}")
        if self.ensemble is Kind.COVARIANCE and not self.gamma >= 1:
            raise ConfigError(f"gamma must be >= 1, got {self.gamma}")
        if self.replicates < 1:
            raise ConfigError("replicates must be >= 1")
        if self.top_k < 1:
            raise ConfigError("top_k must be >= 1")
        if self.top_m < self.top_k:
            raise ConfigError("top_m must be >= top_k")
        for a, b in self.intervals:
            if not (a > 0 and b > a):
                raise ConfigError(f"interval ({a}, {b}] needs 0 < a < b")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")
        if self.beta is not None:
            lo, hi = beta_range(self.alpha)
            if not lo < self.beta < hi:
                raise ConfigError(f"beta={self.beta} outside ({lo}, {hi}) for alpha={self.alpha}")
            if self.epsilon is not None:
                cap = epsilon_cap(self.alpha, self.beta)
                if not 0 < self.epsilon < cap:
                    raise ConfigError(f"epsilon={self.epsilon} outside (0, {cap})")
        elif self.epsilon is not None:
            raise ConfigError("epsilon requires beta")

    @property
    def p(self) -> int | None:
        if self.ensemble is Kind.COVARIANCE:
            return int(math.floor(self.gamma * self.n))
        return None

    @property
    def law(self) -> TailLaw:
        return TailLaw(self.alpha, self.sv, self.symmetry)

    @property
    def m_entries(self) -> int:
        """Order statistics kept per replicate, capped by the entry count."""
        total = self.n * (self.n + 1) // 2 if self.p is None else self.n * self.p
        return min(self.top_m, total)

    def replace(self, **changes) -> "ExperimentConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return {
            "ensemble": self.ensemble.value,
            "alpha": self.alpha,
            "sv": str(self.sv),
            "symmetry": self.symmetry.value,
            "n": self.n,
            "gamma": self.gamma,
            "p": self.p,
            "replicates": self.replicates,
            "top_k": self.top_k,
            "top_m": self.top_m,
            "intervals": format_intervals(self.intervals),
            "seed": self.seed,
            "dense_threshold": self.dense_threshold,
            "tol": self.tol,
            "beta": self.beta,
            "epsilon": self.epsilon,
            "delta": self.delta,
        }


_CONVERTERS = {
    "ensemble": lambda s: Kind(s.strip().lower()),
    "alpha": float,
    "sv": parse_slowly_varying,
    "symmetry": lambda s: Symmetry(s.strip().lower()),
    "n": int,
    "gamma": float,
    "replicates": int,
    "top_k": int,
    "top_m": int,
    "intervals": parse_intervals,
    "seed": lambda s: int(s, 0),
    "dense_threshold": int,
    "tol": float,
    "beta": lambda s: None if s.strip().lower() in ("", "none") else float(s),
    "epsilon": lambda s: None if s.strip().lower() in ("", "none") else float(s),
    "delta": float,
    "threads": int,
}


def convert_values(raw: dict[str, str]) -> dict:
    out = {}
    for key, text in raw.items():
        if key not in _CONVERTERS:
            raise ConfigError(f"unknown config key {key!r}")
        try:
            out[key] = _CONVERTERS[key](text) if isinstance(text, str) else text
        except ValueError as exc:
            raise ConfigError(f"bad value for {key}: {text!r} ({exc})") from exc
    return out


def read_config_file(path) -> dict[str, str]:
    """Raw key -> value strings from a ``key = value`` file (``#`` comments)."""
    raw: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        raw[key.strip()] = value.strip()
    return raw


def load_config(path=None, **overrides) -> ExperimentConfig:
    """Build a config from an optional file, then apply ``overrides``.

    Override values may be strings (parsed like file values) or already
    typed; ``None`` overrides are ignored.
    """
    raw = read_config_file(path) if path is not None else {}
    values = convert_values(raw)
    values.update(convert_values({k: v for k, v in overrides.items() if v is not None}))
    try:
        return ExperimentConfig(**values)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
