"""Scan the multiplier and watch the dual value settle at the sparsity.

The value returned for each u is the objective the alternation reaches:
(number of penalized coordinates) minus u times the mass left on them.  It
never exceeds the exact dual function, which starts at n for u = 0 and
decreases until it flattens at n minus the sparsest support that explains y.
When the scan's tail flattens with zero penalized mass, the free coordinates
exhibit a sparse solution outright.
"""

import numpy as np

from altl1 import alt_l1, AltL1Config, dual_scan, gen_problem, l1_decode

A, x_true, y = gen_problem(n=10, m=5, k=2, rng_stream=3)
x1 = l1_decode(A, y).x_hat
print(f"true support size {np.count_nonzero(x_true.values)}, "
      f"l1 solution has {np.count_nonzero(np.abs(x1) > 1e-8)} nonzeros\n")

u_grid = np.geomspace(0.05, 20.0, 9)

print(f"{'u':>8s} {'dual value':>12s} {'n - value':>10s}")
for u, val in dual_scan(A, y, u_grid, L=6):
    print(f"{u:8.3f} {val:12.4f} {10 - val:10.4f}")

# confirm the flat tail really is constructive: at the last u, the pair the
# alternation ends with has no mass on the penalized coordinates
res = alt_l1(A, y, AltL1Config(u=float(u_grid[-1]), L=6))
penalized_mass = float(np.sum(np.abs(res.x_hat[res.z_final.z == 1])))
print(f"\nat u = {u_grid[-1]:.0f}: penalized mass {penalized_mass:.1e}, "
      f"{10 - res.z_final.penalized_count()} free coordinates")
print("so the scan's plateau hands us a 2-sparse solution, matching the truth")
