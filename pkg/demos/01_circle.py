"""Estimate the perimeter of a disk from a labeled random sample.

A disk is the easiest check: every parallel strip around a circle has
exactly the circle's length, so only the sampling error remains. The
estimate should land within a few percent of pi/2.
"""

import math

from minklen import Disk, EstimatorConfig, Frame, RngSpec, default_bandwidth, draw_labeled_sample, estimate_length

disk = Disk((0.5, 0.5), 0.25)
frame = Frame.unit()

for n in (5_000, 20_000, 50_000):
    sample = draw_labeled_sample(disk, frame, n, RngSpec(1, (0, n)))
    eps = default_bandwidth(n)
    est = estimate_length(sample, frame, EstimatorConfig(eps, 100_000, rng=RngSpec(1, (1, n))))
    err = (est.length - math.pi / 2) / (math.pi / 2)
    print(f"n={n:6d}  eps={eps:.4f}  green={sample.n_green:5d}  length={est.length:.4f}  rel.err={err:+.2%}")

print(f"true length {math.pi / 2:.4f}")
