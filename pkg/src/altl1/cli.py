"""Command-line surface: decode / sweep / certify / dual-scan / gen.

Every sweep setting can come from a config file (key = value lines) and be
overridden by a flag of the same name.  All commands exit 0 on success and
nonzero with a one-line diagnostic on stderr otherwise.
"""

import argparse
import sys

from .bench import (
    ExperimentConfig,
    emit_plot,
    gen_problem,
    load_config,
    read_instance,
    run_sweep,
    score_success,
    write_instance,
)
from .certify import certify_recovery_equivalence
from .decoders import (
    AltL1Config,
    BaselineConfig,
    alt_l1,
    dual_scan,
    irls,
    l1_decode,
    reweighted_l1,
)

_METHOD_CHOICES = ("l1", "alt_l1", "reweighted_l1", "irls")


def _fmt_vec(vec):
    return " ".join(f"{v:.17g}" for v in vec)


def _parse_float_list(text):
    return [float(tok) for tok in text.replace(",", " ").split()]


def _add_sweep_flags(parser):
    # one flag per ExperimentConfig field, dest matching the field name
    parser.add_argument("--n", type=int)
    parser.add_argument("--m", type=int)
    parser.add_argument("--k-grid", "--k_grid", dest="k_grid")
    parser.add_argument("--trials", type=int)
    parser.add_argument("--methods")
    parser.add_argument("--L", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--success-tol", "--success_tol", dest="success_tol", type=float)
    parser.add_argument("--success-mode", "--success_mode", dest="success_mode")
    parser.add_argument("--signal-std", "--signal_std", dest="signal_std", type=float)
    parser.add_argument("--column-norm", "--column_norm", dest="column_norm", type=float)
    parser.add_argument("--workers", type=int)


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="altl1",
        description="Sparse recovery decoders, certification, and benchmarks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_decode = sub.add_parser("decode", help="decode one instance file with one method")
    p_decode.add_argument("--instance", required=True, help="instance file (see gen)")
    p_decode.add_argument("--method", required=True, choices=_METHOD_CHOICES)
    p_decode.add_argument("--u", type=float, help="fixed multiplier for alt_l1")
    p_decode.add_argument("--L", type=int, default=4, help="alternation steps for alt_l1")
    p_decode.add_argument("--tie-rule", choices=("free", "penalize"), default="free")
    p_decode.add_argument("--epsilon", type=float, help="baseline smoothing constant")
    p_decode.add_argument("--iters", type=int, help="baseline iteration count")
    p_decode.add_argument("--p", type=float, help="IRLS exponent in [0, 1]")
    p_decode.add_argument("--tol", type=float, default=1e-3, help="success tolerance")

    p_sweep = sub.add_parser("sweep", help="run a Monte Carlo sweep")
    p_sweep.add_argument("--config", help="config file with key = value lines")
    p_sweep.add_argument("--csv", required=True, help="output CSV path")
    p_sweep.add_argument("--svg", help="optional success-curve SVG path")
    _add_sweep_flags(p_sweep)

    p_cert = sub.add_parser("certify", help="certify exact l0 recovery at sparsity k")
    p_cert.add_argument("--instance", required=True)
    p_cert.add_argument("--k", required=True, type=int)
    p_cert.add_argument("--trials", type=int, default=100)
    p_cert.add_argument("--seed", type=int, default=0)

    p_scan = sub.add_parser("dual-scan", help="evaluate the dual lower bound on a u-grid")
    p_scan.add_argument("--instance", required=True)
    p_scan.add_argument("--u-grid", required=True, help="comma-separated multipliers")
    p_scan.add_argument("--L", type=int, default=4)

    p_gen = sub.add_parser("gen", help="generate a random instance file")
    p_gen.add_argument("--n", required=True, type=int)
    p_gen.add_argument("--m", required=True, type=int)
    p_gen.add_argument("--k", required=True, type=int)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--signal-std", type=float, default=2.0)
    p_gen.add_argument("--column-norm", type=float, default=2.0)
    p_gen.add_argument("--out", required=True)

    return parser


def _cmd_decode(args):
    A, x_true, y = read_instance(args.instance)
    if args.method == "alt_l1":
        result = alt_l1(A, y, AltL1Config(u=args.u, L=args.L, tie_rule=args.tie_rule))
    elif args.method == "l1":
        result = l1_decode(A, y)
    elif args.method == "reweighted_l1":
        cfg = BaselineConfig(
            epsilon=args.epsilon if args.epsilon is not None else 0.1,
            iters=args.iters if args.iters is not None else 4,
        )
        result = reweighted_l1(A, y, cfg)
    else:
        cfg = BaselineConfig(
            epsilon=args.epsilon if args.epsilon is not None else 1.0,
            iters=args.iters if args.iters is not None else 100,
            p=args.p if args.p is not None else 0.0,
        )
        result = irls(A, y, cfg)

    success, error = score_success(result.x_hat, x_true, tol=args.tol)
    print(f"method: {args.method}")
    print(f"status: {result.status}")
    print(f"iterations: {result.iterations}")
    if "u" in result.diagnostics:
        print(f"u: {result.diagnostics['u']:.17g}")
    if result.lagrangian_trace:
        print(f"lagrangian_trace: {_fmt_vec(result.lagrangian_trace)}")
    if result.z_final is not None:
        print(f"support_size: {result.z_final.free_indices().size}")
    print(f"recovery_error: {error:.17g}")
    print(f"success: {'yes' if success else 'no'}")
    print(f"x_hat: {_fmt_vec(result.x_hat)}")
    return 0


def _cmd_sweep(args):
    field_names = set(ExperimentConfig.__dataclass_fields__)
    overrides = {
        name: value
        for name, value in vars(args).items()
        if name in field_names and value is not None
    }
    if isinstance(overrides.get("k_grid"), str):
        overrides["k_grid"] = tuple(int(t) for t in overrides["k_grid"].replace(",", " ").split())
    if isinstance(overrides.get("methods"), str):
        overrides["methods"] = tuple(overrides["methods"].replace(",", " ").split())
    if args.config:
        cfg = load_config(args.config, overrides)
    else:
        cfg = ExperimentConfig(**overrides)

    curve, records = run_sweep(cfg, csv_path=args.csv)
    if args.svg:
        emit_plot(curve, args.svg)
    print(f"wrote {len(records)} records to {args.csv}")
    for method in curve.method_names():
        rates = " ".join(f"k={k}:{curve.rate(method, k):.2f}" for k in curve.k_values(method))
        print(f"{method}: {rates}")
    return 0


def _cmd_certify(args):
    A, _, _ = read_instance(args.instance)
    report = certify_recovery_equivalence(A, args.k, trials=args.trials, seed=args.seed)
    cert = report.certificate
    print(f"k: {cert.k}")
    print(f"rank_condition_holds: {'yes' if cert.holds else 'no'}")
    print(f"subsets_checked: {cert.subsets_checked}")
    if cert.witness is not None:
        print(f"witness: {' '.join(str(i) for i in cert.witness)}")
    if cert.holds:
        print(f"trials: {report.trials}")
        print(f"counterexamples: {len(report.counterexamples)}")
        print(f"passed: {'yes' if report.passed else 'no'}")
    else:
        print("recovery assertion skipped (rank condition not met)")
    return 0


def _cmd_dual_scan(args):
    A, _, y = read_instance(args.instance)
    grid = _parse_float_list(args.u_grid)
    for u, value in dual_scan(A, y, grid, L=args.L):
        print(f"{u:.17g} {value:.17g}")
    return 0


def _cmd_gen(args):
    A, x, y = gen_problem(
        args.n, args.m, args.k, args.seed,
        signal_std=args.signal_std, column_norm=args.column_norm,
    )
    write_instance(args.out, A, x, y)
    print(f"wrote {args.n}x{args.m} instance with k={args.k} to {args.out}")
    return 0


_COMMANDS = {
    "decode": _cmd_decode,
    "sweep": _cmd_sweep,
    "certify": _cmd_certify,
    "dual-scan": _cmd_dual_scan,
    "gen": _cmd_gen,
}


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
