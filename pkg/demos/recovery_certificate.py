"""Certify exact sparse recovery for a small sensing matrix.

A matrix recovers every k-sparse signal from y = Ax via support search
exactly when no 2k of its columns are linearly dependent.  The certificate
checks that directly; the equivalence report then spot-checks recovery on
random signals.
"""

import numpy as np

from altl1 import SensingMatrix, certify_recovery_equivalence, check_rank_condition

rng = np.random.default_rng(11)
A = SensingMatrix(rng.standard_normal((6, 10)))

for k in (1, 2, 3):
    cert = check_rank_condition(A, k)
    print(f"k = {k}: rank condition {'holds' if cert.holds else 'FAILS'} "
          f"after {cert.subsets_checked} column subsets")

report = certify_recovery_equivalence(A, k=2, trials=200, seed=0)
print(f"\nrecovery spot-check at k = 2: {report.trials} random signals, "
      f"{len(report.counterexamples)} counterexamples -> "
      f"{'passed' if report.passed else 'failed'}")

# now break the condition on purpose: duplicate a column
B = A.entries.copy()
B[:, 7] = B[:, 2]
bad = check_rank_condition(B, 1)
print(f"\nwith column 7 a copy of column 2, k = 1: holds = {bad.holds}, "
      f"witness columns = {bad.witness}")
print("the witness names a dependent column pair, so two different 1-sparse")
print("signals map to the same observation and no decoder can tell them apart")
