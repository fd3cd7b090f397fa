"""A small Monte Carlo sweep: success rate per method as sparsity grows.

Writes sweep_demo.csv and sweep_demo.svg next to the current directory.
The full-size experiment (n=256, m=100, 100 trials) runs the same way and
is exercised by the acceptance tests; this one finishes in seconds.
"""

from pathlib import Path

from altl1 import ExperimentConfig, emit_plot, run_sweep

cfg = ExperimentConfig(
    n=48,
    m=20,
    k_grid=(2, 4, 6, 8, 10),
    trials=20,
    methods=("l1", "alt_l1", "reweighted_l1", "irls"),
    seed=99,
)

csv_path = Path("sweep_demo.csv")
curve, records = run_sweep(cfg, csv_path=csv_path)
emit_plot(curve, Path("sweep_demo.svg"))

print(f"{len(records)} trial records -> {csv_path} and sweep_demo.svg\n")
header = "method          " + "".join(f"  k={k:<3d}" for k in cfg.k_grid)
print(header)
for method in curve.method_names():
    row = "".join(f"  {curve.rate(method, k):5.2f}" for k in cfg.k_grid)
    print(f"{method:16s}{row}")

print("\nthe alternating decoder holds on past the point where plain l1")
print("starts dropping instances (around k = m/4 = 5 here)")
