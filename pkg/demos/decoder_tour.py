"""Run every decoder on one small instance and compare the answers."""

import numpy as np

from altl1 import (
    BaselineConfig,
    alt_l1,
    gen_problem,
    irls,
    l0_bruteforce,
    l1_decode,
    reweighted_l1,
)

# a 10x24 system with a 2-sparse ground truth; small enough that even the
# exhaustive decoder finishes instantly
A, x_true, y = gen_problem(n=24, m=10, k=2, rng_stream=7)
support = np.flatnonzero(x_true.values)
print(f"instance: n=24, m=10, true support {support.tolist()}, "
      f"values {np.round(x_true.values[support], 4).tolist()}")
print()

results = {
    "l0 (exhaustive)": l0_bruteforce(A, y, k_max=2).values,
    "l1": l1_decode(A, y).x_hat,
    "alternating l1": alt_l1(A, y).x_hat,
    "reweighted l1": reweighted_l1(A, y).x_hat,
    "irls": irls(A, y, BaselineConfig(epsilon=1.0, iters=60)).x_hat,
}

print(f"{'decoder':18s} {'max error':>12s} {'support found':>16s}")
for name, x_hat in results.items():
    err = np.max(np.abs(x_hat - x_true.values))
    found = np.flatnonzero(np.abs(x_hat) > 1e-6)
    print(f"{name:18s} {err:12.2e} {str(found.tolist()):>16s}")

print()
print("All five agree here; they differ once k approaches m/4, which is")
print("what the sweep demo measures.")
