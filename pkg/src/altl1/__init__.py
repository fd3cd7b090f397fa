"""Sparse-signal recovery by alternating l1 minimization.

The package decodes k-sparse signals from underdetermined linear
measurements y = A x.  The flagship decoder alternates between a magnitude
threshold that selects a trial support and a weighted l1 fit on everything
outside it, performing block-coordinate ascent on a Lagrangian that couples
the two; plain l1, brute-force l0, reweighted l1, and IRLS decoders are
included for comparison, along with an exact-recovery certifier and a Monte
Carlo benchmark harness.
"""

from .bench import (
    ExperimentConfig,
    SuccessCurve,
    TrialRecord,
    curve_from_csv,
    emit_plot,
    gen_problem,
    load_config,
    read_instance,
    read_records,
    run_sweep,
    score_success,
    trial_seed,
    write_instance,
    write_records,
)
from .certify import (
    EquivalenceReport,
    RankCertificate,
    TooManySubsets,
    certify_recovery_equivalence,
    check_rank_condition,
)
from .core import (
    DecodeResult,
    DegenerateInput,
    InfeasibleProblem,
    Observation,
    SensingMatrix,
    SparseSignal,
    SupportIndicator,
    lagrangian_value,
)
from .decoders import (
    AltL1Config,
    BaselineConfig,
    alt_l1,
    approx_dual,
    dual_scan,
    irls,
    l0_bruteforce,
    l1_decode,
    reweighted_l1,
    select_u,
    threshold_z,
)
from .linalg import (
    Factorization,
    NumericalFailure,
    cholesky_factor,
    numerical_rank,
    qr_factor,
    solve_spd,
    weighted_min_norm,
)
from .lp import LPSolution, StandardLP, solve_lp, weighted_l1_min

__version__ = "0.1.0"

__all__ = [
    "AltL1Config",
    "BaselineConfig",
    "DecodeResult",
    "DegenerateInput",
    "EquivalenceReport",
    "ExperimentConfig",
    "Factorization",
    "InfeasibleProblem",
    "LPSolution",
    "NumericalFailure",
    "Observation",
    "RankCertificate",
    "SensingMatrix",
    "SparseSignal",
    "StandardLP",
    "SuccessCurve",
    "SupportIndicator",
    "TooManySubsets",
    "TrialRecord",
    "alt_l1",
    "approx_dual",
    "certify_recovery_equivalence",
    "check_rank_condition",
    "cholesky_factor",
    "curve_from_csv",
    "dual_scan",
    "emit_plot",
    "gen_problem",
    "irls",
    "l0_bruteforce",
    "l1_decode",
    "lagrangian_value",
    "load_config",
    "numerical_rank",
    "qr_factor",
    "read_instance",
    "read_records",
    "reweighted_l1",
    "run_sweep",
    "score_success",
    "select_u",
    "solve_lp",
    "solve_spd",
    "threshold_z",
    "trial_seed",
    "weighted_l1_min",
    "weighted_min_norm",
    "write_instance",
    "write_records",
]
