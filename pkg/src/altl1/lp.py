"""A self-contained primal-dual interior-point solver for small dense LPs.

Standard form throughout:

    minimize    c . x
    subject to  G x = h,  x >= 0

The solver is a Mehrotra-style predictor-corrector: each iteration factors
one m-by-m normal-equations matrix G diag(x/s) G^T (Cholesky, via
:mod:`altl1.linalg`) and reuses the factor for the affine and corrector
directions.  Sizes here are modest (a few hundred variables), so dense
normal equations are the simple, adequate choice.

:func:`weighted_l1_min` is the workhorse built on top: it minimizes a
weighted l1 norm subject to equality constraints by splitting x into
positive and negative parts.
"""

from dataclasses import dataclass, field

import numpy as np

from .core import InfeasibleProblem, as_vector
from .linalg import NumericalFailure, cholesky_factor, qr_factor

# Mehrotra step-to-boundary damping.
STEP_FRACTION = 0.99995
MAX_ITERS_DEFAULT = 200

# Farkas certificate: declare infeasibility when the gain h.lam of a
# normalized dual ray exceeds its constraint violation by this factor.
FARKAS_RATIO = 1e8

# Zero LP weights make the weighted-l1 optimum non-unique; a tiny floor keeps
# the subproblem well posed and its answer deterministic.
ZERO_WEIGHT_FLOOR = 1e-6


@dataclass(frozen=True)
class StandardLP:
    """min c.x subject to G x = h, x >= 0 (all variables nonnegative)."""

    c: np.ndarray
    G: np.ndarray
    h: np.ndarray

    def __post_init__(self):
        c = np.array(self.c, dtype=float)
        G = np.array(self.G, dtype=float)
        h = np.array(self.h, dtype=float)
        if c.ndim != 1 or G.ndim != 2 or h.ndim != 1:
            raise ValueError("expected c, h vectors and G matrix")
        if G.shape != (h.shape[0], c.shape[0]):
            raise ValueError(
                f"inconsistent shapes: c has {c.shape[0]} entries, G is {G.shape}, "
                f"h has {h.shape[0]}"
            )
        for name, arr in (("c", c), ("G", G), ("h", h)):
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} contains non-finite entries")
        for name, arr in (("c", c), ("G", G), ("h", h)):
            arr.setflags(write=False)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "G", G)
        object.__setattr__(self, "h", h)


@dataclass
class LPSolution:
    """Solver output.  At status "optimal" the relative KKT residuals
    (primal feasibility, dual feasibility, complementarity gap) are all at
    or below the requested tolerance; they are reported in ``residuals``.
    At "infeasible"/"unbounded" the primal is the last iterate and carries
    no meaning beyond diagnostics.
    """

    primal: np.ndarray
    dual_eq: np.ndarray
    dual_ineq: np.ndarray
    objective: float
    status: str
    iterations: int = 0
    residuals: dict = field(default_factory=dict)


def _step_to_boundary(v, dv):
    """Largest alpha with v + alpha*dv >= 0, given v > 0."""
    shrinking = dv < 0
    if not np.any(shrinking):
        return np.inf
    return float(np.min(v[shrinking] / -dv[shrinking]))


def _factor_normal(M):
    """Cholesky of the normal matrix, with escalating diagonal regularization.

    Near convergence diag(x/s) spans many orders of magnitude and the normal
    matrix can lose definiteness in floating point; a tiny ridge restores it
    without visibly perturbing the step.
    """
    m = M.shape[0]
    reg = 0.0
    base = 1e-13 * max(1.0, float(np.trace(M)) / max(m, 1))
    for _ in range(5):
        try:
            if reg == 0.0:
                return cholesky_factor(M)
            return cholesky_factor(M + reg * np.eye(m))
        except NumericalFailure:
            reg = base if reg == 0.0 else reg * 100.0
    raise NumericalFailure("normal equations stayed indefinite after regularization")


def _starting_point(G, h, c, ggt_factor):
    """Minimum-norm starting heuristic.

    Project the origin onto {Gx = h} and c onto range(G^T), then shift both
    x and s far enough into the positive orthant to be usable.
    """
    x = G.T @ ggt_factor.solve(h)
    lam = ggt_factor.solve(G @ c)
    s = c - G.T @ lam
    dx = max(-1.5 * float(x.min()), 0.0)
    ds = max(-1.5 * float(s.min()), 0.0)
    x = x + dx
    s = s + ds
    gap = float(x @ s)
    xsum = float(x.sum())
    ssum = float(s.sum())
    x = x + (0.5 * gap / ssum if ssum > 0 else 1.0)
    s = s + (0.5 * gap / xsum if xsum > 0 else 1.0)
    # contrived corner cases (all-zero data) can still leave zeros behind
    x = np.where(x <= 0, 1.0, x)
    s = np.where(s <= 0, 1.0, s)
    return x, lam, s


def _farkas_infeasible(G, h, lam, h_norm):
    """True when lam, normalized, is a numerically clean infeasibility ray:
    G^T lam <= 0 (up to a 1e8 gain/violation ratio) while h.lam > 0."""
    scale = float(np.max(np.abs(lam))) if lam.size else 0.0
    if scale == 0.0:
        return False
    ray = lam / scale
    gain = float(h @ ray)
    if gain <= 1e-8 * (1.0 + h_norm):
        return False
    violation = float(np.max(G.T @ ray, initial=0.0))
    return gain > FARKAS_RATIO * max(violation, gain / 1e16)


def _unbounded_ray(G, c, x):
    """True when the blown-up primal iterate is a descent ray of the feasible
    cone: x/|x| nearly in the null space of G with negative cost."""
    scale = float(np.max(np.abs(x)))
    if scale < 1e10:
        return False
    ray = x / scale
    g_scale = max(1.0, float(np.max(np.abs(G))))
    if float(np.max(np.abs(G @ ray))) > 1e-6 * g_scale:
        return False
    return float(c @ ray) < -1e-6 * max(1.0, float(np.max(np.abs(c))))


def _relative_residuals(G, h, c, x, lam, s, h_norm, c_norm):
    return {
        "primal": float(np.linalg.norm(h - G @ x)) / (1.0 + h_norm),
        "dual": float(np.linalg.norm(c - G.T @ lam - s)) / (1.0 + c_norm),
        "gap": float(x @ s) / (1.0 + abs(float(c @ x))),
    }


def _round_to_basis(G, h, c, x, lam, s, tol, h_norm, c_norm):
    """Round an iterate with resolved complementarity to an exact basic pair.

    The iterates identify the optimal support (the coordinates with
    x_i > s_i) long before the last digits of primal feasibility converge,
    and once x_i s_i is tiny the scaling matrix x/s is so ill-conditioned
    that further Newton steps are noise.  Re-solving on the identified
    support gives the exact primal in one least-squares solve; the dual is
    the iterate's lam (already feasible to solver accuracy) shifted the
    minimal distance needed to zero the reduced costs on the support, which
    makes complementarity exact.

    Near-degenerate optima blur the split: a coordinate whose optimal value
    and dual slack are both tiny polarizes last, and without it the basis
    cannot reproduce h.  When the confident set fails, it is grown in order
    of decreasing x (doubling the extension each try, up to m columns).
    Returns (x, lam, s, residuals) only when a rounded pair genuinely meets
    the tolerance, else None.
    """
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(lam)) and np.all(np.isfinite(s))):
        return None
    confident = np.flatnonzero(x > s)
    rest = np.flatnonzero(x <= s)
    rest = rest[np.argsort(-x[rest], kind="stable")]
    cap = max(G.shape[0] - confident.size, 0)
    extents = [0]
    while extents[-1] < cap:
        extents.append(min(max(2 * extents[-1], 1), cap, rest.size))
        if extents[-1] == extents[-2]:
            extents.pop()
            break
    for extent in extents:
        basis = np.zeros(x.shape[0], dtype=bool)
        basis[confident] = True
        basis[rest[:extent]] = True
        x_new = np.zeros_like(x)
        lam_new = lam
        if np.any(basis):
            GB = G[:, basis]
            try:
                xb, *_ = np.linalg.lstsq(GB, h, rcond=None)
                shift, *_ = np.linalg.lstsq(GB.T, c[basis] - GB.T @ lam, rcond=None)
            except np.linalg.LinAlgError:
                continue
            x_new[basis] = np.clip(xb, 0.0, None)
            lam_new = lam + shift
        s_new = np.clip(c - G.T @ lam_new, 0.0, None)
        s_new[basis] = 0.0
        rel = _relative_residuals(G, h, c, x_new, lam_new, s_new, h_norm, c_norm)
        if max(rel.values()) <= tol:
            return x_new, lam_new, s_new, rel
    return None


def _presolve_rows(G, h):
    """Drop linearly dependent equality rows; fail fast if they are
    inconsistent.  Returns (G_reduced, h_reduced, kept_row_indices)."""
    m = G.shape[0]
    rank = qr_factor(G.T).rank if m else 0
    if rank == m:
        return G, h, np.arange(m)
    x_ls, *_ = np.linalg.lstsq(G, h, rcond=None)
    if np.linalg.norm(G @ x_ls - h) > 1e-8 * (1.0 + np.linalg.norm(h)):
        raise InfeasibleProblem("equality constraints are inconsistent")
    keep = np.sort(qr_factor(G.T).permutation[:rank])
    return G[keep], h[keep], keep


def solve_lp(lp, tol=1e-8, max_iters=MAX_ITERS_DEFAULT):
    """Solve a StandardLP with a Mehrotra predictor-corrector method.

    Parameters
    ----------
    lp : StandardLP
    tol : float
        Bound on the three relative KKT residuals at status "optimal".
    max_iters : int
        Iteration cap; the run reports status "max_iters" beyond it.

    Returns
    -------
    LPSolution
        status is one of "optimal", "infeasible", "unbounded", "max_iters".
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    c, n = lp.c, lp.c.shape[0]
    m_full = lp.h.shape[0]

    try:
        G, h, kept = _presolve_rows(lp.G, lp.h)
    except InfeasibleProblem:
        return LPSolution(
            primal=np.zeros(n),
            dual_eq=np.zeros(m_full),
            dual_ineq=np.zeros(n),
            objective=float("nan"),
            status="infeasible",
        )
    m = G.shape[0]

    if m == 0:
        # no constraints left: min c.x over x >= 0 is separable
        if np.all(c >= 0):
            return LPSolution(
                primal=np.zeros(n),
                dual_eq=np.zeros(m_full),
                dual_ineq=c.copy(),
                objective=0.0,
                status="optimal",
                residuals={"primal": 0.0, "dual": 0.0, "gap": 0.0},
            )
        return LPSolution(
            primal=np.zeros(n),
            dual_eq=np.zeros(m_full),
            dual_ineq=np.zeros(n),
            objective=float("nan"),
            status="unbounded",
        )

    h_norm = float(np.linalg.norm(h))
    c_norm = float(np.linalg.norm(c))

    x, lam, s = _starting_point(G, h, c, _factor_normal(G @ G.T))

    status = "max_iters"
    iters = 0
    rel = {"primal": np.inf, "dual": np.inf, "gap": np.inf}
    for iters in range(max_iters + 1):
        r_p = h - G @ x
        r_d = c - G.T @ lam - s
        gap = float(x @ s)
        rel = _relative_residuals(G, h, c, x, lam, s, h_norm, c_norm)
        if max(rel.values()) <= tol:
            status = "optimal"
            break
        if rel["gap"] <= tol:
            # complementarity has outrun feasibility; the scaling matrix is
            # too ill-conditioned for further Newton steps to help, but the
            # optimal support is already identified
            rounded = _round_to_basis(G, h, c, x, lam, s, tol, h_norm, c_norm)
            if rounded is not None:
                x, lam, s, rel = rounded
                status = "optimal"
                break
        if _farkas_infeasible(G, h, lam, h_norm):
            status = "infeasible"
            break
        if _unbounded_ray(G, c, x):
            status = "unbounded"
            break
        if iters == max_iters:
            break

        mu = gap / n
        if not np.isfinite(mu) or mu <= 0.0:
            break

        d = x / s
        factor = _factor_normal((G * d) @ G.T)

        def newton_step(r_c):
            rhs = r_p + G @ (d * r_d - r_c / s)
            dlam = factor.solve(rhs)
            dx = d * (G.T @ dlam - r_d) + r_c / s
            ds = (r_c - s * dx) / x
            return dx, dlam, ds

        # predictor: pure Newton step on the complementarity target 0
        dx_a, dlam_a, ds_a = newton_step(-x * s)
        alpha_pa = min(1.0, _step_to_boundary(x, dx_a))
        alpha_da = min(1.0, _step_to_boundary(s, ds_a))
        mu_aff = float((x + alpha_pa * dx_a) @ (s + alpha_da * ds_a)) / n
        sigma = (max(mu_aff, 0.0) / mu) ** 3

        # corrector: recenter and compensate the predictor's curvature
        dx, dlam, ds = newton_step(sigma * mu - x * s - dx_a * ds_a)
        alpha_p = min(1.0, STEP_FRACTION * _step_to_boundary(x, dx))
        alpha_d = min(1.0, STEP_FRACTION * _step_to_boundary(s, ds))
        if max(alpha_p, alpha_d) < 1e-12:
            break
        x = x + alpha_p * dx
        lam = lam + alpha_d * dlam
        s = s + alpha_d * ds

    if status == "max_iters":
        # covers stalls (vanishing steps, collapsed barrier parameter) as
        # well as genuine iteration exhaustion: a final rounding attempt
        # costs one least-squares solve and often lands exactly
        rounded = _round_to_basis(G, h, c, x, lam, s, tol, h_norm, c_norm)
        if rounded is not None:
            x, lam, s, rel = rounded
            status = "optimal"

    dual_eq = np.zeros(m_full)
    dual_eq[kept] = lam
    objective = float(c @ x) if status in ("optimal", "max_iters") else float("nan")
    return LPSolution(
        primal=x,
        dual_eq=dual_eq,
        dual_ineq=s,
        objective=objective,
        status=status,
        iterations=iters,
        residuals=rel,
    )


def weighted_l1_min(A, y, w, tol=1e-8, max_iters=MAX_ITERS_DEFAULT, full_output=False):
    """Minimize sum_i w_i |x_i| subject to A x = y.

    The problem is solved as an LP over the split x = p - q with p, q >= 0
    and cost sum_i w_i (p_i + q_i).  Weights must be nonnegative; exact
    zeros are floored at 1e-6 so the subproblem keeps a unique, nearly
    minimal-l1 representative among its optima.

    Parameters
    ----------
    A : SensingMatrix or array-like, shape (m, n)
    y : Observation or array-like, length m
    w : nonnegative weight vector, length n
    tol, max_iters : forwarded to :func:`solve_lp`
    full_output : bool
        When true, also return the underlying LPSolution (its dual_eq is
        the equality multiplier nu with, for unit weights,
        ||A^T nu||_inf <= 1 and nu.y = ||x||_1 at optimality).

    Returns
    -------
    x : ndarray, length n  (or the pair (x, LPSolution) with full_output)

    Raises
    ------
    InfeasibleProblem
        A x = y has no solution.
    NumericalFailure
        The solver stopped early with residuals too large to trust.
    """
    entries = A.entries if hasattr(A, "entries") else np.asarray(A, dtype=float)
    yv = as_vector(y, "y")
    w = np.asarray(w, dtype=float)
    m, n = entries.shape
    if yv.shape[0] != m:
        raise ValueError(f"y has length {yv.shape[0]}, expected {m}")
    if w.shape != (n,):
        raise ValueError(f"w has shape {w.shape}, expected ({n},)")
    if np.any(~np.isfinite(w)) or np.any(w < 0):
        raise ValueError("weights must be nonnegative and finite")

    w_eff = np.where(w == 0.0, ZERO_WEIGHT_FLOOR, w)

    if not np.any(yv):
        # x = 0 is the unique exact optimum (any other feasible point has
        # positive cost since all effective weights are positive), and the
        # all-zero primal/dual pair satisfies the KKT system exactly
        x = np.zeros(n)
        if full_output:
            sol = LPSolution(
                primal=np.zeros(2 * n),
                dual_eq=np.zeros(m),
                dual_ineq=np.concatenate([w_eff, w_eff]),
                objective=0.0,
                status="optimal",
                residuals={"primal": 0.0, "dual": 0.0, "gap": 0.0},
            )
            return x, sol
        return x

    lp = StandardLP(
        c=np.concatenate([w_eff, w_eff]),
        G=np.hstack([entries, -entries]),
        h=yv,
    )
    sol = solve_lp(lp, tol=tol, max_iters=max_iters)

    if sol.status == "infeasible":
        raise InfeasibleProblem("A x = y has no solution")
    if sol.status == "unbounded":
        # cannot happen with nonnegative costs; treat as a solver breakdown
        raise NumericalFailure("weighted l1 subproblem reported unbounded")
    if sol.status == "max_iters":
        ok = (
            sol.residuals.get("primal", np.inf) <= 1e-8
            and sol.residuals.get("dual", np.inf) <= 1e-8
            and sol.residuals.get("gap", np.inf) <= 1e-6
        )
        if not ok:
            raise NumericalFailure(
                f"LP did not converge in {max_iters} iterations "
                f"(residuals {sol.residuals})"
            )

    x = sol.primal[:n] - sol.primal[n:]
    if full_output:
        return x, sol
    return x
