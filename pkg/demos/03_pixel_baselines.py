"""Pixel-counting baselines on a digitized cubic, and what noise does to them.

Counting pixel sides overestimates a curve's length (the staircase only
ever moves horizontally or vertically) and refining the grid does not
help. Smoothing over all pixels fixes that on a clean image, but a few
small specks of noise add their full perimeter to the estimate. A modest
random sample of pixels barely notices them.
"""

from minklen import harness
from minklen.geometry import RotatedSquare, Tschirnhausen
from minklen.raster import add_noise_patches, area_based_length, digitize, exhaustive_with_smoothing
from minklen.raster import perimeter_exhaustive
from minklen.sampling import RngSpec

cubic = Tschirnhausen(1)
frame = cubic.default_frame()
print(f"true length {cubic.true_length():.4f}")
for res in (300, 600, 1024):
    img = digitize(cubic, frame, res, res)
    print(f"{res:5d}^2  side count={perimeter_exhaustive(img):.4f}  boundary-pixel area={area_based_length(img):.4f}")

sq = RotatedSquare((0.5, 0.5), 0.5, 45)
img = digitize(sq, sq.default_frame(), 512, 512)
print(f"45 degree square: side count / true = {perimeter_exhaustive(img) / 2.0:.4f}")

clean = digitize(cubic, frame, 300, 300)
noisy = add_noise_patches(clean, 4, 0.25, RngSpec(3, (2, 0)))
print(f"all-pixel smoothing eps=0.94: clean={exhaustive_with_smoothing(clean, 0.94):.4f} "
      f"noisy={exhaustive_with_smoothing(noisy, 0.94):.4f}")

cmp_ = harness.noise_compare("tschirnhausen:1", reps=10, seed=3).summary()
print(f"10 noisy images: all-pixel mean={cmp_['exhaustive_mean']:.3f}  random-sample mean={cmp_['random_mean']:.3f}")
