"""Domain types shared by every decoder, plus the merged-constraint Lagrangian.

The recovery problem couples a signal vector x (feasible for Ax = y) with a
binary indicator z marking which coordinates are believed to be zero.  For a
multiplier u > 0 the Lagrangian of the merged complementarity constraint is

    L(x, z, u) = sum_i z_i - u * sum_i z_i |x_i|

and every decoder in this package can be read as a strategy for pushing L up.
"""

from dataclasses import dataclass, field

import numpy as np

from .linalg import qr_factor


class InfeasibleProblem(RuntimeError):
    """The constraint set admits no solution (or none within the search budget)."""


class DegenerateInput(ValueError):
    """Input data lacks the structure an operation needs (e.g. too few nonzeros)."""

    def __init__(self, message, count=None):
        super().__init__(message)
        self.count = count


def as_vector(y, name="vector"):
    """Coerce an Observation or array-like to a finite 1-D float array."""
    if isinstance(y, Observation):
        return y.y
    v = np.asarray(y, dtype=float)
    if v.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} contains non-finite entries")
    return v


def check_multiplier(u):
    """Validate a complementarity multiplier: positive, finite, scalar."""
    u = float(u)
    if not np.isfinite(u) or u <= 0.0:
        raise ValueError(f"multiplier u must be positive and finite, got {u}")
    return u


class SensingMatrix:
    """Dense m-by-n measurement matrix with numerically full row rank.

    The rank is checked on construction via column-pivoted QR with the
    package-wide tolerance (see :func:`altl1.linalg.qr_factor`), so "full row
    rank" means one thing everywhere.  The entries are frozen after
    construction; instances are safe to share across workers.
    """

    def __init__(self, entries):
        A = np.array(entries, dtype=float)
        if A.ndim != 2:
            raise ValueError(f"matrix must be two-dimensional, got shape {A.shape}")
        if not np.all(np.isfinite(A)):
            raise ValueError("matrix contains non-finite entries")
        m, n = A.shape
        if m > n:
            raise ValueError(f"need m <= n, got {m}x{n}")
        rank = qr_factor(A).rank
        if rank < m:
            raise ValueError(f"matrix must have full row rank {m}, numerical rank is {rank}")
        A.setflags(write=False)
        self.entries = A
        self.m = m
        self.n = n

    def __repr__(self):
        return f"SensingMatrix({self.m}x{self.n})"


@dataclass(frozen=True)
class Observation:
    """Measurement vector y = Ax for some sensing matrix A."""

    y: np.ndarray

    def __post_init__(self):
        v = np.array(self.y, dtype=float)
        if v.ndim != 1:
            raise ValueError(f"observation must be one-dimensional, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("observation contains non-finite entries")
        v.setflags(write=False)
        object.__setattr__(self, "y", v)

    @property
    def m(self):
        return self.y.shape[0]


class SparseSignal:
    """Ground-truth vector together with its explicit support.

    Invariant: ``values[i] != 0`` exactly for ``i in support``.  When
    ``support`` is omitted it is derived from the nonzero pattern.
    """

    def __init__(self, values, support=None):
        v = np.array(values, dtype=float)
        if v.ndim != 1:
            raise ValueError(f"signal must be one-dimensional, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("signal contains non-finite entries")
        nz = np.flatnonzero(v)
        if support is None:
            support = nz
        support = np.asarray(support, dtype=int)
        if support.ndim != 1 or not np.array_equal(np.sort(support), np.unique(support)):
            raise ValueError("support must be a set of indices")
        if not np.array_equal(np.sort(support), nz):
            raise ValueError("support must list exactly the nonzero coordinates")
        v.setflags(write=False)
        self.values = v
        self.support = np.sort(support)
        self.support.setflags(write=False)

    @property
    def n(self):
        return self.values.shape[0]

    @property
    def k(self):
        return self.support.shape[0]

    def __repr__(self):
        return f"SparseSignal(n={self.n}, k={self.k})"


class SupportIndicator:
    """Binary n-vector z; z_i = 1 penalizes coordinate i toward zero.

    Coordinates with z_i = 0 are left free (the selected support).  Entries
    are exact {0, 1} integers: the thresholding step resolves the fractional
    tie case to a binary value, so the state space stays discrete.
    """

    def __init__(self, z):
        zv = np.array(z)
        if zv.ndim != 1:
            raise ValueError(f"indicator must be one-dimensional, got shape {zv.shape}")
        if not np.all((zv == 0) | (zv == 1)):
            raise ValueError("indicator entries must be exactly 0 or 1")
        zv = zv.astype(np.int64)
        zv.setflags(write=False)
        self.z = zv

    @classmethod
    def ones(cls, n):
        """The all-ones indicator e (every coordinate penalized)."""
        return cls(np.ones(n, dtype=np.int64))

    @property
    def n(self):
        return self.z.shape[0]

    def free_indices(self):
        """Indices with z_i = 0, i.e. the coordinates selected as support."""
        return np.flatnonzero(self.z == 0)

    def penalized_count(self):
        return int(self.z.sum())

    def __eq__(self, other):
        return isinstance(other, SupportIndicator) and np.array_equal(self.z, other.z)

    def __repr__(self):
        return f"SupportIndicator(n={self.n}, penalized={self.penalized_count()})"


def indicator_vector(z, n=None):
    """Coerce a SupportIndicator or binary array-like to an int {0,1} vector."""
    zv = z.z if isinstance(z, SupportIndicator) else SupportIndicator(z).z
    if n is not None and zv.shape[0] != n:
        raise ValueError(f"indicator has length {zv.shape[0]}, expected {n}")
    return zv


@dataclass
class DecodeResult:
    """Output of a decoder run.

    ``lagrangian_trace`` is populated by the alternating decoder: entry 0 is
    the value at the plain-l1 start (indicator = all ones) and entry l the
    value after alternation step l; the trace is non-decreasing up to solver
    slack.  ``diagnostics`` carries solver byproducts (equality dual, LP
    iteration counts, the multiplier actually used, ...).
    """

    x_hat: np.ndarray
    z_final: SupportIndicator | None = None
    lagrangian_trace: list = field(default_factory=list)
    iterations: int = 0
    status: str = "converged"
    diagnostics: dict = field(default_factory=dict)


def lagrangian_value(x, z, u):
    """Evaluate L(x, z, u) = sum_i z_i (1 - u |x_i|).

    Parameters
    ----------
    x : array-like, length n
    z : SupportIndicator or binary array-like, length n
    u : positive float

    Returns
    -------
    float
        ``sum(z) - u * sum(z * |x|)`` as a floating-point sum.
    """
    u = check_multiplier(u)
    xv = as_vector(x, "x")
    zv = indicator_vector(z, n=xv.shape[0])
    return float(np.sum(zv) - u * np.sum(zv * np.abs(xv)))
