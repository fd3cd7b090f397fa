"""Recovery algorithms: brute-force l0, plain l1, alternating l1, and the
reweighted-l1 / IRLS baselines.

The alternating decoder is block-coordinate ascent on the merged-constraint
Lagrangian L(x, z, u) (see :mod:`altl1.core`): the z-step is a closed-form
magnitude threshold at 1/u, the x-step a weighted l1 minimization whose
weights are exactly the indicator z.  Each step maximizes L over its own
block, so the Lagrangian trace is non-decreasing up to LP tolerance.
"""

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .core import (
    DecodeResult,
    DegenerateInput,
    InfeasibleProblem,
    SparseSignal,
    SupportIndicator,
    as_vector,
    check_multiplier,
    lagrangian_value,
)
from .linalg import weighted_min_norm
from .lp import weighted_l1_min

TIE_RULES = ("free", "penalize")

# LP tolerance for the alternating decoder's subproblems.  The ascent
# property is asserted with slack 1e-9 * n, and the slack consumed per step
# scales like u times the LP error, so the subproblems run well below the
# generic 1e-8 default.
ALT_LP_TOL = 1e-10


@dataclass(frozen=True)
class AltL1Config:
    """Settings for the alternating decoder.

    u : positive multiplier, or None to pick it from the plain-l1 solution
        (the smallest u that leaves the top ceil(m/4) magnitudes free).
    L : number of alternation steps; the loop always runs exactly L times.
    tie_rule : what a magnitude exactly equal to 1/u gets ("free" keeps the
        coordinate unpenalized, "penalize" pushes it toward zero).
    lp_tol : KKT tolerance for every LP subproblem.
    support_projection : replace the final iterate by a least-squares fit on
        the selected support (off by default; the plain LP output is the
        reference behavior).
    """

    u: float | None = None
    L: int = 4
    tie_rule: str = "free"
    lp_tol: float = ALT_LP_TOL
    support_projection: bool = False

    def __post_init__(self):
        if self.u is not None:
            check_multiplier(self.u)
        if not (isinstance(self.L, int) and self.L >= 1):
            raise ValueError(f"L must be a positive integer, got {self.L}")
        if self.tie_rule not in TIE_RULES:
            raise ValueError(f"tie_rule must be one of {TIE_RULES}, got {self.tie_rule!r}")
        if not self.lp_tol > 0:
            raise ValueError(f"lp_tol must be positive, got {self.lp_tol}")


@dataclass(frozen=True)
class BaselineConfig:
    """Settings shared by the two baseline decoders.

    epsilon : smoothing constant, or an explicit non-increasing schedule
        (one iteration per schedule entry, overriding ``iters``).
    iters : iteration count (for IRLS, a cap; its epsilon schedule usually
        terminates the run first).
    p : the IRLS norm exponent in [0, 1]; ignored by reweighted l1.
    """

    epsilon: float | tuple = 0.1
    iters: int = 4
    p: float = 0.0

    def __post_init__(self):
        eps = self.epsilon
        if np.ndim(eps) == 0:
            if not float(eps) > 0:
                raise ValueError(f"epsilon must be positive, got {eps}")
        else:
            seq = tuple(float(e) for e in eps)
            if not seq or any(e <= 0 for e in seq):
                raise ValueError("epsilon schedule must be non-empty and positive")
            if any(b > a for a, b in zip(seq, seq[1:])):
                raise ValueError("epsilon schedule must be non-increasing")
            object.__setattr__(self, "epsilon", seq)
        if not (isinstance(self.iters, int) and self.iters >= 1):
            raise ValueError(f"iters must be a positive integer, got {self.iters}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")

    def schedule(self):
        """The explicit epsilon schedule, or None when epsilon is scalar."""
        return self.epsilon if isinstance(self.epsilon, tuple) else None


def _matrix_parts(A, y):
    entries = A.entries if hasattr(A, "entries") else np.asarray(A, dtype=float)
    return entries, as_vector(y, "y")


def l0_bruteforce(A, y, k_max):
    """Sparsest solution of A x = y by direct support enumeration.

    Supports are visited in increasing cardinality and, within each
    cardinality, in lexicographic order; the first support whose
    least-squares fit reaches residual 1e-8 * (1 + ||y||) wins, which makes
    the returned representative deterministic.  Exponential in k_max; meant
    for small n.

    Raises InfeasibleProblem when no support of size <= k_max fits.
    """
    entries, yv = _matrix_parts(A, y)
    m, n = entries.shape
    if not (isinstance(k_max, int) and 0 <= k_max <= m):
        raise ValueError(f"k_max must be an integer in [0, {m}], got {k_max}")
    tol = 1e-8 * (1.0 + float(np.linalg.norm(yv)))
    if float(np.linalg.norm(yv)) <= tol:
        return SparseSignal(np.zeros(n))
    for k in range(1, k_max + 1):
        for support in combinations(range(n), k):
            cols = entries[:, support]
            coef, *_ = np.linalg.lstsq(cols, yv, rcond=None)
            if float(np.linalg.norm(cols @ coef - yv)) <= tol:
                x = np.zeros(n)
                x[list(support)] = coef
                return SparseSignal(x)
    raise InfeasibleProblem(f"no support of size <= {k_max} fits the observation")


def l1_decode(A, y, lp_tol=ALT_LP_TOL):
    """Minimum-l1 solution of A x = y (unit weights)."""
    entries, yv = _matrix_parts(A, y)
    x, sol = weighted_l1_min(A, yv, np.ones(entries.shape[1]), tol=lp_tol, full_output=True)
    return DecodeResult(
        x_hat=x,
        iterations=1,
        diagnostics={
            "dual_eq": sol.dual_eq,
            "lp_status": sol.status,
            "lp_iterations": sol.iterations,
            "lp_residuals": sol.residuals,
        },
    )


def threshold_z(x, u, tie_rule="free"):
    """Best indicator for a fixed signal: z_i = 1 iff |x_i| < 1/u.

    This maximizes L(x, z, u) coordinatewise, since z_i contributes
    z_i * (1 - u |x_i|).  A magnitude exactly equal to 1/u contributes
    nothing either way; tie_rule picks the binary value ("free" leaves the
    coordinate unpenalized).
    """
    u = check_multiplier(u)
    xv = as_vector(x, "x")
    if tie_rule not in TIE_RULES:
        raise ValueError(f"tie_rule must be one of {TIE_RULES}, got {tie_rule!r}")
    mags = np.abs(xv)
    thr = 1.0 / u
    z = mags < thr
    if tie_rule == "penalize":
        z = z | (mags == thr)
    return SupportIndicator(z.astype(np.int64))


def _threshold_multiplier(t):
    """The multiplier whose threshold 1/u sits at t, adjusted for roundoff.

    The threshold applied later is 1/u, and the double reciprocal can round
    to just above t, which would penalize a boundary coordinate; nudge u up
    until the round trip lands at or below t.
    """
    u = 1.0 / t
    while 1.0 / u > t:
        u = float(np.nextafter(u, np.inf))
    return u


def select_u(x0, m):
    """Smallest multiplier leaving the top ceil(m/4) magnitudes of x0 free.

    Returns u = 1/t where t is the ceil(m/4)-th largest |x0_i|; with the
    default "free" tie rule, thresholding x0 at 1/u then unpenalizes exactly
    the coordinates with |x0_i| >= t.

    Raises DegenerateInput (carrying the observed count) when x0 has fewer
    than ceil(m/4) nonzero entries, since then no finite u can free that
    many coordinates.
    """
    xv = as_vector(x0, "x0")
    if not (isinstance(m, int) and m >= 1):
        raise ValueError(f"m must be a positive integer, got {m}")
    q = math.ceil(m / 4)
    mags = np.abs(xv)
    nonzeros = int(np.count_nonzero(mags))
    if nonzeros < q:
        raise DegenerateInput(
            f"need at least {q} nonzero magnitudes to place the threshold, "
            f"found {nonzeros}",
            count=nonzeros,
        )
    return _threshold_multiplier(float(np.sort(mags)[::-1][q - 1]))


def alt_l1(A, y, cfg=None):
    """Alternating l1 decoder.

    Starts from the plain l1 solution with everything penalized (z = e),
    then alternates exactly cfg.L times: threshold the current signal at
    1/u to get z, then minimize sum_{i: z_i = 1} |x_i| over A x = y.  The
    result carries the final pair, the Lagrangian trace (entry 0 at the
    start, entry l after step l), and the multiplier actually used.
    """
    if cfg is None:
        cfg = AltL1Config()
    entries, yv = _matrix_parts(A, y)
    m, n = entries.shape

    init = l1_decode(A, yv, lp_tol=cfg.lp_tol)
    x = init.x_hat
    if cfg.u is not None:
        u = cfg.u
    elif not np.any(x):
        # y = 0: zero is a fixed point of both steps for every multiplier
        u = 1.0
    elif np.count_nonzero(x) < math.ceil(m / 4):
        # the l1 start is already sparser than the target support size, so
        # no finite u can free that many coordinates; free exactly the
        # support instead, which makes the alternation stationary at x
        u = _threshold_multiplier(float(np.min(np.abs(x[x != 0.0]))))
    else:
        u = select_u(x, m)

    z = SupportIndicator.ones(n)
    trace = [lagrangian_value(x, z, u)]
    lp_iterations = [init.diagnostics["lp_iterations"]]
    for _ in range(cfg.L):
        z = threshold_z(x, u, cfg.tie_rule)
        x, sol = weighted_l1_min(
            A, yv, z.z.astype(float), tol=cfg.lp_tol, full_output=True
        )
        trace.append(lagrangian_value(x, z, u))
        lp_iterations.append(sol.iterations)

    if cfg.support_projection:
        free = z.free_indices()
        if free.size <= m:
            coef, *_ = np.linalg.lstsq(entries[:, free], yv, rcond=None)
            x = np.zeros(n)
            x[free] = coef

    return DecodeResult(
        x_hat=x,
        z_final=z,
        lagrangian_trace=trace,
        iterations=cfg.L,
        diagnostics={"u": u, "lp_iterations": lp_iterations},
    )


def reweighted_l1(A, y, cfg=None):
    """Reweighted l1 baseline: resolve with weights 1/(|x_i| + epsilon)."""
    if cfg is None:
        cfg = BaselineConfig()
    entries, yv = _matrix_parts(A, y)
    n = entries.shape[1]
    schedule = cfg.schedule()
    iters = len(schedule) if schedule else cfg.iters
    w = np.ones(n)
    x = np.zeros(n)
    for t in range(iters):
        x = weighted_l1_min(A, yv, w)
        eps = schedule[t] if schedule else float(cfg.epsilon)
        w = 1.0 / (np.abs(x) + eps)
    return DecodeResult(x_hat=x, iterations=iters)


def irls(A, y, cfg=None):
    """Iteratively reweighted least squares with a shrinking smoothing term.

    Weights are w_i = (x_i^2 + epsilon)^(p/2 - 1).  With scalar epsilon the
    schedule is dynamic: start there, divide by 10 whenever the iterate
    moves less than sqrt(epsilon)/100, stop at the 1e-8 floor or the
    iteration cap.  An explicit schedule runs one iteration per entry.
    """
    if cfg is None:
        cfg = BaselineConfig(epsilon=1.0, iters=100)
    entries, yv = _matrix_parts(A, y)
    n = entries.shape[1]
    exponent = cfg.p / 2.0 - 1.0

    x = weighted_min_norm(A, yv, np.ones(n))
    schedule = cfg.schedule()
    if schedule is not None:
        for eps in schedule:
            x = weighted_min_norm(A, yv, (x * x + eps) ** exponent)
        return DecodeResult(x_hat=x, iterations=len(schedule))

    eps = float(cfg.epsilon)
    done = 0
    for done in range(1, cfg.iters + 1):
        x_new = weighted_min_norm(A, yv, (x * x + eps) ** exponent)
        moved = float(np.linalg.norm(x_new - x))
        x = x_new
        if moved < math.sqrt(eps) / 100.0:
            eps /= 10.0
            if eps < 1e-8:
                break
    return DecodeResult(x_hat=x, iterations=done)


def approx_dual(A, y, u, L=4):
    """Heuristic lower bound on the dual function at multiplier u.

    Runs the alternating decoder at fixed u and returns the final
    Lagrangian value; the true dual value maximizes L(x, z, u) over all
    feasible pairs, so this never exceeds it (up to LP tolerance).
    """
    u = check_multiplier(u)
    result = alt_l1(A, y, AltL1Config(u=u, L=L))
    return result.lagrangian_trace[-1]


def dual_scan(A, y, u_grid, L=4):
    """Evaluate approx_dual over a grid of multipliers, order preserved."""
    grid = [check_multiplier(u) for u in u_grid]
    if not grid:
        raise ValueError("u_grid must be non-empty")
    return [(u, approx_dual(A, y, u, L=L)) for u in grid]
