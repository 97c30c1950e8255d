"""Wigner and rectangular ensembles, Gram operators and the A1/A2 split."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .tails import Kind, TailLaw, sample_iid


@dataclass(frozen=True)
class WignerSample:
    n: int
    entries: np.ndarray
    seed_info: tuple[int, int] | None = None

    @property
    def kind(self) -> Kind:
        return Kind.WIGNER


@dataclass(frozen=True)
class RectSample:
    n: int
    p: int
    entries: np.ndarray
    seed_info: tuple[int, int] | None = None

    @property
    def kind(self) -> Kind:
        return Kind.COVARIANCE


@dataclass(frozen=True)
class TruncationSplit:
    threshold: float
    low_part: np.ndarray
    high_part: np.ndarray
    beta: float

    def high_sparse(self) -> list[tuple[tuple[int, int], float]]:
        """Nonzero entries of A2 as ((i, j), value), row-major, 0-based."""
        rows, cols = np.nonzero(self.high_part)
        return [((int(i), int(j)), float(self.high_part[i, j])) for i, j in zip(rows, cols)]


def _seed_info(stream):
    seed = getattr(stream, "seed", None)
    sid = getattr(stream, "stream_id", None)
    return None if seed is None else (seed, sid)


def generate_wigner(law: TailLaw, n: int, stream) -> WignerSample:
    """Symmetric n x n matrix; the n(n+1)/2 draws fill i <= j row-major."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    draws = sample_iid(law, stream, n * (n + 1) // 2)
    m = np.zeros((n, n))
    iu = np.triu_indices(n)
    m[iu] = draws
    m.T[iu] = draws
    m.setflags(write=False)
    return WignerSample(n, m, _seed_info(stream))


def generate_covariance(law: TailLaw, n: int, p: int, stream) -> RectSample:
    """n x p matrix of i.i.d. draws in row-major order; requires p >= n."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if p < n:
        raise ValueError(f"need p >= n (gamma >= 1), got n={n}, p={p}")
    m = sample_iid(law, stream, n * p).reshape(n, p)
    m.setflags(write=False)
    return RectSample(n, p, m, _seed_info(stream))


def _entries(A) -> np.ndarray:
    return A.entries if hasattr(A, "entries") else np.asarray(A, dtype=float)


def gram(A) -> np.ndarray:
    """A @ A.T with no 1/p factor."""
    a = _entries(A)
    g = a @ a.T
    # symmetrize against round-off asymmetry of the BLAS product
    return 0.5 * (g + g.T)


def scaled_gram(A) -> np.ndarray:
    """(1/p) A @ A.T, the textbook sample covariance."""
    a = _entries(A)
    return gram(a) / a.shape[1]


def apply_gram(A, v) -> np.ndarray:
    """A @ (A.T @ v) without forming the n x n product."""
    a = _entries(A)
    v = np.asarray(v, dtype=float)
    if v.shape[0] != a.shape[0]:
        raise ValueError(f"vector has length {v.shape[0]}, operator dimension is {a.shape[0]}")
    return a @ (a.T @ v)


def gram_operator(A):
    """Closure v -> A A^T v, suitable for the iterative eigensolver."""
    a = _entries(A)
    return lambda v: a @ (a.T @ v)


def beta_range(alpha: float) -> tuple[float, float]:
    """Admissible truncation exponents (1/alpha, 2(8-alpha)/(alpha(10-alpha)))."""
    if not 0 < alpha < 6:
        raise ValueError(f"truncation window is empty for alpha={alpha}; need 0 < alpha < 6")
    return 1.0 / alpha, 2.0 * (8.0 - alpha) / (alpha * (10.0 - alpha))


def default_beta(alpha: float) -> float:
    lo, hi = beta_range(alpha)
    return 0.5 * (lo + hi)


def truncation_split(M, beta: float, n: int, check_window: float | None = None) -> TruncationSplit:
    """Split M at |entry| <= n**beta.

    If ``check_window`` is an alpha value, beta must lie in its admissible
    window; pass None to skip the check.
    """
    if check_window is not None:
        lo, hi = beta_range(check_window)
        if not lo < beta < hi:
            raise ValueError(f"beta={beta} outside ({lo}, {hi}) for alpha={check_window}")
    m = _entries(M)
    threshold = float(n) ** beta
    keep = np.abs(m) <= threshold
    low = np.where(keep, m, 0.0)
    high = np.where(keep, 0.0, m)
    return TruncationSplit(threshold, low, high, beta)


# Matrix dump: one ASCII header line, then little-endian float64 row-major.

def dump_matrix(path, entries, *, kind: Kind, alpha: float, seed_info=None) -> Path:
    path = Path(path)
    m = np.asarray(entries, dtype="<f8")
    n, p = m.shape
    seed, sid = seed_info if seed_info is not None else (None, None)
    header = f"kind={Kind(kind).value} n={n} p={p} alpha={alpha!r} seed={seed} stream={sid}\n"
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(np.ascontiguousarray(m).tobytes())
    return path


def load_matrix(path) -> tuple[dict, np.ndarray]:
    raw = Path(path).read_bytes()
    head, _, body = raw.partition(b"\n")
    meta = dict(item.split("=", 1) for item in head.decode("ascii").split())
    n, p = int(meta["n"]), int(meta["p"])
    m = np.frombuffer(body, dtype="<f8")
    if m.size != n * p:
        raise ValueError(f"{path}: expected {n * p} values, found {m.size}")
    return meta, m.reshape(n, p).astype(float)
