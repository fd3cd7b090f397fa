"""Dense factorizations and equality-constrained least-squares solves.

Everything here is a thin, contract-carrying layer over LAPACK (through
scipy): column-pivoted QR for rank decisions, Cholesky for the SPD systems
inside the LP solver, and the closed-form weighted minimum-norm solve used by
IRLS.  One rank rule lives here so every module agrees on what "full rank"
means.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg


class NumericalFailure(RuntimeError):
    """A factorization or solve broke down (e.g. non-positive Cholesky pivot)."""


@dataclass(frozen=True)
class Factorization:
    """A dense matrix factorization with enough metadata to reassemble it.

    kind "qr": factors = (Q, R) with A[:, permutation] = Q @ R.
    kind "cholesky": factors = (L,) lower triangular with M = L @ L.T,
    permutation is None.
    """

    kind: str
    factors: tuple
    permutation: np.ndarray | None = None
    rank: int | None = None

    def reassemble(self):
        if self.kind == "qr":
            Q, R = self.factors
            A = Q @ R
            out = np.empty_like(A)
            out[:, self.permutation] = A
            return out
        if self.kind == "cholesky":
            (L,) = self.factors
            return L @ L.T
        raise ValueError(f"unknown factorization kind {self.kind!r}")

    def solve(self, b):
        """Solve M x = b using a previously computed Cholesky factor of M."""
        if self.kind != "cholesky":
            raise ValueError("solve() is only available for Cholesky factorizations")
        (L,) = self.factors
        return scipy.linalg.cho_solve((L, True), b)


def _rank_from_triangle(R, shape, col_norm_max):
    """Shared numerical-rank rule: count diagonal entries of the pivoted
    triangular factor exceeding max(m, n) * eps * (largest column norm)."""
    m, n = shape
    tol = max(m, n) * np.finfo(float).eps * col_norm_max
    diag = np.abs(np.diag(R))[: min(m, n)]
    return int(np.count_nonzero(diag > tol))


def qr_factor(A):
    """Column-pivoted QR of a dense matrix, exposing numerical rank.

    Returns a Factorization with A[:, perm] = Q R.  The rank is the number
    of pivoted diagonal entries of R above max(m, n) * eps * max_j ||A_j||_2;
    this same rule backs SensingMatrix validation and the exact-recovery
    certifier.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix contains non-finite entries")
    Q, R, perm = scipy.linalg.qr(A, mode="economic", pivoting=True)
    col_norm_max = float(np.max(np.linalg.norm(A, axis=0))) if A.size else 0.0
    rank = _rank_from_triangle(R, A.shape, col_norm_max)
    return Factorization(kind="qr", factors=(Q, R), permutation=perm, rank=rank)


def numerical_rank(A):
    """Numerical rank under the package-wide pivoted-QR rule."""
    return qr_factor(A).rank


def cholesky_factor(M):
    """Lower-triangular Cholesky factor of a symmetric positive definite M.

    Raises NumericalFailure if a pivot is non-positive (M indefinite or
    semidefinite beyond tolerance).
    """
    M = np.asarray(M, dtype=float)
    try:
        L = scipy.linalg.cholesky(M, lower=True)
    except scipy.linalg.LinAlgError as exc:
        raise NumericalFailure(f"Cholesky factorization failed: {exc}") from exc
    return Factorization(kind="cholesky", factors=(L,))


def solve_spd(M, b):
    """Solve M x = b for symmetric positive definite M via Cholesky."""
    M = np.asarray(M, dtype=float)
    b = np.asarray(b, dtype=float)
    try:
        c, low = scipy.linalg.cho_factor(M, lower=True)
    except scipy.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SPD solve failed: {exc}") from exc
    return scipy.linalg.cho_solve((c, low), b)


# IRLS ε-schedules drive weights toward 0 and the closed form divides by w.
WEIGHT_CLAMP = 1e-12


def weighted_min_norm(A, y, w):
    """argmin_x sum_i w_i x_i^2 subject to A x = y, in closed form.

    With W = diag(w) the minimizer is x = W^-1 A^T (A W^-1 A^T)^-1 y.
    Weights are clamped below at 1e-12 before inversion.  A must have full
    row rank; a singular A W^-1 A^T raises NumericalFailure.
    """
    entries = A.entries if hasattr(A, "entries") else np.asarray(A, dtype=float)
    yv = y.y if hasattr(y, "y") else np.asarray(y, dtype=float)
    w = np.asarray(w, dtype=float)
    if np.any(~np.isfinite(w)) or np.any(w <= 0):
        raise ValueError("weights must be positive and finite")
    w = np.maximum(w, WEIGHT_CLAMP)
    AW = entries / w[np.newaxis, :]
    lam = solve_spd(AW @ entries.T, yv)
    return AW.T @ lam
