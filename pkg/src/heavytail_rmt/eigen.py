"""Symmetric eigenvalue solvers and spectral inequality checks.

``full_spectrum`` is the dense reference path (LAPACK ``syevd`` through
numpy).  ``top_k`` is a Lanczos iteration with full reorthogonalization for
when only the top of the spectrum matters or the operator is matrix-free.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .rng import Stream

EPS = np.finfo(float).eps


class Solver(str, enum.Enum):
    DENSE = "dense"
    ITERATIVE = "iterative"


class ConvergenceError(ArithmeticError):
    """Raised when an eigensolver stops short; ``partial`` holds what it had."""

    def __init__(self, message: str, partial: "Spectrum | None" = None):
        super().__init__(message)
        self.partial = partial


@dataclass(frozen=True)
class Spectrum:
    values: np.ndarray
    solver: Solver
    residual_bound: float
    iterations: int = 0
    converged: bool = True

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.size > 1 and np.any(np.diff(vals) > 0):
            raise ValueError("spectrum values must be sorted nonincreasing")
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return self.values.size

    @property
    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values))) if self.values.size else 0.0


def _values(spec) -> np.ndarray:
    return spec.values if isinstance(spec, Spectrum) else np.asarray(spec, dtype=float)


def check_symmetric(M: np.ndarray, rtol: float = 1e-12) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    scale = max(float(np.max(np.abs(M))) if M.size else 0.0, 1e-300)
    if np.max(np.abs(M - M.T), initial=0.0) > rtol * scale:
        raise ValueError("matrix is not symmetric within tolerance")
    return M


def full_spectrum(M) -> Spectrum:
    """All eigenvalues of a symmetric matrix, descending."""
    M = check_symmetric(M)
    try:
        vals = np.linalg.eigvalsh(M)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"dense eigensolver did not converge: {exc}") from exc
    vals = vals[::-1].copy()
    scale = float(np.max(np.abs(vals))) if vals.size else 0.0
    return Spectrum(vals, Solver.DENSE, residual_bound=M.shape[0] * EPS * scale)


def _as_matvec(op) -> Callable[[np.ndarray], np.ndarray]:
    if callable(op):
        return op
    a = np.asarray(op, dtype=float)
    return lambda v: a @ v


def _orthogonalize(w: np.ndarray, Q: np.ndarray) -> np.ndarray:
    # two passes of classical Gram-Schmidt ("twice is enough")
    for _ in range(2):
        w = w - Q @ (Q.T @ w)
    return w


def top_k(
    op,
    dim: int,
    k: int,
    tol: float = 1e-10,
    max_iter: int | None = None,
    stream=None,
) -> Spectrum:
    """The k largest eigenvalues of a symmetric operator by Lanczos.

    ``op`` is a dense symmetric matrix or a callable ``v -> op @ v``.  The
    start vector is the normalized all-ones vector plus a small perturbation
    drawn from ``stream`` (default ``Stream(0, 0)``).  Iteration stops once
    every one of the top k Ritz pairs has residual ``<= tol * |op|_est``,
    where the norm estimate is the largest Ritz value in magnitude.

    On an invariant subspace the iteration continues from a fresh random
    vector orthogonal to the current basis, so repeated eigenvalues are
    picked up before the Krylov space is exhausted.
    """
    if not 1 <= k <= dim:
        raise ValueError(f"need 1 <= k <= dim, got k={k}, dim={dim}")
    matvec = _as_matvec(op)
    stream = stream if stream is not None else Stream(0, 0)
    max_iter = dim if max_iter is None else min(max_iter, dim)

    q = np.ones(dim) + 1e-2 * stream.normals(dim)
    q /= np.linalg.norm(q)
    Q = np.zeros((dim, max_iter))
    alphas: list[float] = []
    betas: list[float] = []
    q_prev = np.zeros(dim)
    beta_prev = 0.0
    theta = np.empty(0)
    resid = np.empty(0)
    scale = 0.0

    for j in range(max_iter):
        Q[:, j] = q
        w = np.asarray(matvec(q), dtype=float)
        a = float(q @ w)
        w = w - a * q - beta_prev * q_prev
        w = _orthogonalize(w, Q[:, : j + 1])
        b = float(np.linalg.norm(w))
        alphas.append(a)
        m = j + 1
        scale = max(scale, abs(a) + b + beta_prev)
        broke = b <= 1e-12 * scale or m == dim

        if m >= k and not (broke and m < dim):
            if m == 1:
                theta, S = np.array(alphas), np.ones((1, 1))
            else:
                theta, S = eigh_tridiagonal(np.array(alphas), np.array(betas))
            order = np.argsort(theta)[::-1][:k]
            resid = b * np.abs(S[-1, order])
            theta = theta[order]
            norm_est = max(float(np.max(np.abs(theta))), 1e-300)
            if m == dim or np.all(resid <= tol * norm_est):
                return Spectrum(theta, Solver.ITERATIVE, float(np.max(resid)), m, True)

        if m == max_iter:
            break
        if broke:
            # invariant subspace: restart orthogonally, decoupling T
            w = _orthogonalize(stream.normals(dim), Q[:, :m])
            q_prev, beta_prev = q, 0.0
            q = w / np.linalg.norm(w)
            betas.append(0.0)
        else:
            q_prev, beta_prev = q, b
            q = w / b
            betas.append(b)

    partial = None
    if theta.size:
        partial = Spectrum(theta, Solver.ITERATIVE, float(np.max(resid)), len(alphas), False)
    raise ConvergenceError(
        f"Lanczos did not converge to tol={tol} within {max_iter} iterations", partial
    )


def largest_eigenvalues(M_or_op, dim: int, k: int, dense_threshold: int = 2048,
                        tol: float = 1e-10, stream=None) -> Spectrum:
    """Dispatch on size: dense solve up to ``dense_threshold``, else Lanczos."""
    if dim <= dense_threshold:
        M = M_or_op if not callable(M_or_op) else M_or_op(np.eye(dim))
        return full_spectrum(M)
    return top_k(M_or_op, dim, min(k, dim), tol=tol, stream=stream)


def principal_minor(M, index: int) -> np.ndarray:
    """M with row and column ``index`` (0-based) removed."""
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    if not 0 <= index < n:
        raise IndexError(f"index {index} out of range for a {n}x{n} matrix")
    return np.delete(np.delete(M, index, axis=0), index, axis=1)


@dataclass(frozen=True)
class InterlacingReport:
    holds: bool
    worst_violation: float
    position: int | None  # 1-based index into the minor's spectrum


def interlacing_check(parent, minor, tol: float = 1e-8) -> InterlacingReport:
    """Check lambda_i >= mu_i >= lambda_{i+1} up to ``tol * scale``."""
    lam = _values(parent)
    mu = _values(minor)
    if lam.size != mu.size + 1:
        raise ValueError(f"sizes must differ by one, got {lam.size} and {mu.size}")
    if mu.size == 0:
        return InterlacingReport(True, 0.0, None)
    scale = max(float(np.max(np.abs(lam))), float(np.max(np.abs(mu))), 1e-300)
    above = mu - lam[:-1]
    below = lam[1:] - mu
    worst = np.maximum(above, below)
    pos = int(np.argmax(worst))
    violation = max(float(worst[pos]), 0.0)
    holds = violation <= tol * scale
    return InterlacingReport(holds, violation, pos + 1 if violation > 0 else None)


def weyl_bounds(B, C) -> tuple[float, float, float]:
    """(lambda_1(B) + lambda_n(C), lambda_1(B + C), lambda_1(B) + lambda_1(C))."""
    lb = full_spectrum(B).values
    lc = full_spectrum(C).values
    top = full_spectrum(np.asarray(B) + np.asarray(C)).values[0]
    return lb[0] + lc[-1], top, lb[0] + lc[0]


def weyl_bounds_all(B, C) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-index Weyl sandwich lambda_l(B)+lambda_n(C) <= lambda_l(B+C) <= lambda_l(B)+lambda_1(C)."""
    lb = full_spectrum(B).values
    lc = full_spectrum(C).values
    mid = full_spectrum(np.asarray(B) + np.asarray(C)).values
    return lb + lc[-1], mid, lb + lc[0]
