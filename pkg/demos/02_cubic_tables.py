"""Replicated estimates for the Tschirnhausen cubic over a range of eps.

The cubic loop is strongly curved and has one corner, at (-8, 0). The
estimator underestimates it slightly: the mean sits below the true
length 12*sqrt(3) for every smoothing value, while staying roughly flat
across eps. Run with a small replication count to keep it quick.
"""

import sys

from minklen import harness
from minklen.geometry import Tschirnhausen

reps = int(sys.argv[1]) if len(sys.argv) > 1 else 20
L0 = Tschirnhausen(1).true_length()

for n in (30_000, 10_000):
    spec = harness.ExperimentSpec("tschirnhausen:1", n, (0.76, 0.92, 1.2), 1500, reps=reps, seed=5,
                                  outputs=("length", "area"))
    report = harness.run_replications(spec)
    print(f"n={n}, R={reps}")
    for s in report.summary:
        print(f"  eps={s['eps']:.2f}  mean={s['length_mean']:.4f}  sd={s['length_sd']:.4f}  "
              f"median={s['length_median']:.4f}  area={s['area_mean']:.3f}")
print(f"true length {L0:.4f}")
