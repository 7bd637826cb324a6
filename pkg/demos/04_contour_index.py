"""Contour index (length / sqrt(area)) of a digitized shape.

A disk has the smallest possible index, 2*sqrt(pi) ~ 3.545. Rougher
outlines score higher. Too much smoothing rounds the outline off, so the
index drifts down toward the disk value.
"""

import math

from minklen import harness
from minklen.geometry import Disk, Frame, Tschirnhausen
from minklen.raster import digitize

img = digitize(Disk((0.5, 0.5), 0.25), Frame.unit(), 512, 512)
spec = harness.ExperimentSpec("image", 50_000, (0.03, 0.05), 20_000, reps=5, seed=1)
for s in harness.ci_pipeline(img, spec).summary:
    print(f"disk image  eps={s['eps']:.2f}  CI={s['ci_mean']:.4f} (sd {s['ci_sd']:.4f})")
print(f"circle value {2 * math.sqrt(math.pi):.4f}")

cubic = Tschirnhausen(1)
spec = harness.ExperimentSpec("tschirnhausen:1", 30_000, (0.9, 2.5, 4.0), 3000, reps=5, seed=1)
for s in harness.ci_pipeline("tschirnhausen:1", spec).summary:
    print(f"cubic  eps={s['eps']:.1f}  CI={s['ci_mean']:.4f}")
print(f"cubic exact {cubic.true_length() / math.sqrt(cubic.true_area()):.4f}")
