"""Exact-recovery certification for the brute-force l0 decoder.

A k-sparse signal is recovered exactly from y = Ax by l0 minimization for
every possible x if and only if every 2k-column submatrix of A has full rank
2k: two distinct k-sparse signals with equal measurements would otherwise
put a nonzero 2k-sparse vector in the null space.  The certifier enumerates
the submatrices directly, so it is meant for small n.
"""

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .core import SparseSignal
from .decoders import l0_bruteforce
from .linalg import numerical_rank

SUBSET_LIMIT = 10**7


class TooManySubsets(ValueError):
    """The requested enumeration exceeds the subset budget."""

    def __init__(self, message, count=None):
        super().__init__(message)
        self.count = count


@dataclass(frozen=True)
class RankCertificate:
    """Outcome of the 2k-column rank check.

    When holds is false, witness names the first (lexicographically) column
    subset whose submatrix is rank deficient.
    """

    k: int
    holds: bool
    witness: tuple | None = None
    subsets_checked: int = 0


def check_rank_condition(A, k):
    """Check that every 2k-column submatrix of A has numerical rank 2k.

    Subsets are visited in lexicographic order with early exit, so the
    witness for a failing matrix is deterministic.  Rank uses the shared
    pivoted-QR rule from :mod:`altl1.linalg`.

    Raises TooManySubsets when C(n, 2k) exceeds 1e7, and ValueError when
    2k > m (the condition is then impossible).
    """
    entries = A.entries if hasattr(A, "entries") else np.asarray(A, dtype=float)
    m, n = entries.shape
    if not (isinstance(k, int) and k >= 0):
        raise ValueError(f"k must be a nonnegative integer, got {k}")
    if 2 * k > m:
        raise ValueError(f"need 2k <= m, got k = {k} with m = {m}")
    if k == 0:
        return RankCertificate(k=0, holds=True)
    count = math.comb(n, 2 * k)
    if count > SUBSET_LIMIT:
        raise TooManySubsets(
            f"C({n}, {2 * k}) = {count} subsets exceeds the {SUBSET_LIMIT} budget",
            count=count,
        )
    checked = 0
    for subset in combinations(range(n), 2 * k):
        checked += 1
        if numerical_rank(entries[:, subset]) < 2 * k:
            return RankCertificate(k=k, holds=False, witness=subset, subsets_checked=checked)
    return RankCertificate(k=k, holds=True, subsets_checked=checked)


@dataclass
class EquivalenceReport:
    """Result of stress-testing l0 recovery against the rank certificate.

    trials is the number actually run (zero when the certificate fails and
    the assertion is skipped).  Each counterexample records the planted
    signal and what the decoder returned instead.
    """

    certificate: RankCertificate
    trials: int = 0
    counterexamples: list = field(default_factory=list)

    @property
    def condition_met(self):
        return self.certificate.holds

    @property
    def passed(self):
        return self.condition_met and self.trials > 0 and not self.counterexamples


def _random_sparse(rng, n, k):
    values = np.zeros(n)
    support = np.sort(rng.choice(n, size=k, replace=False))
    nonzeros = rng.standard_normal(k)
    while np.any(nonzeros == 0.0):
        nonzeros = rng.standard_normal(k)
    values[support] = nonzeros
    return SparseSignal(values, support)


def certify_recovery_equivalence(A, k, trials=100, seed=0):
    """Certify the rank condition, then watch l0 recovery deliver on it.

    When check_rank_condition(A, k) holds, decodes `trials` random k-sparse
    signals from their exact measurements and records any that fail to come
    back (within 1e-6 relative l-infinity error; a counterexample would
    indicate an implementation bug, since the rank condition makes the
    k-sparse solution unique).  When the condition fails, the assertion is
    skipped and the report only carries the certificate.
    """
    entries = A.entries if hasattr(A, "entries") else np.asarray(A, dtype=float)
    n = entries.shape[1]
    certificate = check_rank_condition(A, k)
    report = EquivalenceReport(certificate=certificate)
    if not certificate.holds:
        return report
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        x = _random_sparse(rng, n, k)
        decoded = l0_bruteforce(A, entries @ x.values, k)
        gap = float(np.max(np.abs(decoded.values - x.values)))
        if gap > 1e-6 * max(1.0, float(np.max(np.abs(x.values)))):
            report.counterexamples.append({"planted": x.values, "decoded": decoded.values})
    report.trials = trials
    return report
