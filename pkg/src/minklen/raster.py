"""Binary images on a frame, digitization, and the pixel-based length baselines.

Images are stored as ``(height, width)`` boolean arrays, row 0 at the top of
the frame, True meaning black (inside). Pixels are square with side ``h``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve

from minklen.geometry import Frame, ImageShape, Shape
from minklen.sampling import RngSpec


class UndersmoothingWarning(UserWarning):
    """Smoothing radius below the pixel side: the ball sees no neighboring pixel."""


@dataclass(frozen=True, eq=False)
class BinaryImage:
    bits: np.ndarray
    frame: Frame = Frame(0.0, 1.0, 0.0, 1.0)

    def __post_init__(self):
        bits = np.array(self.bits, dtype=bool)
        if bits.ndim != 2 or bits.size == 0:
            raise ValueError("bits must be a non-empty 2-D array")
        if self.frame.dim != 2:
            raise ValueError("images need a 2-D frame")
        height, width = bits.shape
        sx, sy = self.frame.sides
        if not math.isclose(sx / width, sy / height, rel_tol=1e-9):
            raise ValueError(
                f"aspect mismatch: frame {sx}x{sy} does not give square pixels at {width}x{height}")
        bits.flags.writeable = False
        object.__setattr__(self, "bits", bits)

    def __eq__(self, other):
        if not isinstance(other, BinaryImage):
            return NotImplemented
        return self.frame == other.frame and np.array_equal(self.bits, other.bits)

    @property
    def height(self) -> int:
        return self.bits.shape[0]

    @property
    def width(self) -> int:
        return self.bits.shape[1]

    @property
    def h(self) -> float:
        return self.frame.sides[0] / self.width

    @property
    def _hy(self) -> float:
        return self.frame.sides[1] / self.height

    def with_frame(self, frame: Frame) -> BinaryImage:
        return BinaryImage(self.bits, frame)

    def pixel_centers(self) -> np.ndarray:
        """``(height * width, 2)`` centers in row-major order."""
        f = self.frame
        xs = f.xmin + (np.arange(self.width) + 0.5) * self.h
        ys = f.ymax - (np.arange(self.height) + 0.5) * self._hy
        X, Y = np.meshgrid(xs, ys)
        return np.column_stack([X.ravel(), Y.ravel()])

    def lookup(self, pts) -> np.ndarray:
        """Color of the pixel containing each point; False outside the frame.

        A point on a shared pixel edge belongs to the pixel with the larger
        row/column index.
        """
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        f = self.frame
        inside = f.contains(pts)
        col = np.floor((pts[:, 0] - f.xmin) / self.h)
        row = np.floor((f.ymax - pts[:, 1]) / self._hy)
        col = np.clip(np.nan_to_num(col), 0, self.width - 1).astype(np.int64)
        row = np.clip(np.nan_to_num(row), 0, self.height - 1).astype(np.int64)
        return inside & self.bits[row, col]


def digitize(shape: Shape, frame: Frame, width: int, height: int) -> BinaryImage:
    """Pixel black iff its center lies in the shape."""
    blank = BinaryImage(np.zeros((height, width), dtype=bool), frame)
    mask = shape.contains(blank.pixel_centers())
    return BinaryImage(mask.reshape(height, width), frame)


def image_oracle(img: BinaryImage) -> ImageShape:
    return ImageShape(img)


def pixel_area(img: BinaryImage) -> float:
    return np.count_nonzero(img.bits) * img.h * img._hy


def perimeter_exhaustive(img: BinaryImage) -> float:
    """``h`` times the number of pixel sides separating black from white.

    The image is surrounded by white.
    """
    p = np.pad(img.bits, 1)
    edges = np.count_nonzero(p[:, 1:] != p[:, :-1]) + np.count_nonzero(p[1:, :] != p[:-1, :])
    return img.h * edges


def boundary_pixels(img: BinaryImage) -> np.ndarray:
    """Pixels of either color with a 4-neighbor of the other color."""
    b = img.bits
    p = np.pad(b, 1)
    return ((p[:-2, 1:-1] != b) | (p[2:, 1:-1] != b)
            | (p[1:-1, :-2] != b) | (p[1:-1, 2:] != b))


def area_based_length(img: BinaryImage) -> float:
    """Area of the two-sided boundary-pixel strip divided by ``2h``."""
    return np.count_nonzero(boundary_pixels(img)) * img.h * img._hy / (2 * img.h)


def _disk_kernel(eps: float, h: float) -> np.ndarray:
    m = int(math.floor(eps / h)) + 1
    off = np.arange(-m, m + 1) * h
    return (off[:, None] ** 2 + off[None, :] ** 2 <= eps * eps).astype(np.float64)


def smoothed_boundary_mask(img: BinaryImage, eps: float, g1: int = 1, r1: int = 1) -> np.ndarray:
    """Pixels whose center has >= g1 black and >= r1 white pixel centers within eps."""
    if eps < img.h:
        warnings.warn(f"eps={eps} is below the pixel side {img.h}", UndersmoothingWarning, stacklevel=2)
    k = _disk_kernel(eps, img.h)
    black = img.bits.astype(np.float64)
    green = np.rint(fftconvolve(black, k, mode="same")).astype(np.int64)
    red = np.rint(fftconvolve(1.0 - black, k, mode="same")).astype(np.int64)
    return (green >= g1) & (red >= r1)


def exhaustive_with_smoothing(img: BinaryImage, eps: float, thresholds: tuple[int, int] = (1, 1)) -> float:
    """Boundary-estimate length using every pixel center as a labeled sample.

    ``thresholds`` is ``(g1, r1)``. The boundary-set measure is evaluated
    exactly on the pixel grid, so the result is deterministic.
    """
    g1, r1 = thresholds
    mask = smoothed_boundary_mask(img, eps, g1, r1)
    return np.count_nonzero(mask) * img.h * img._hy / (2 * eps)


def add_noise_patches(img: BinaryImage, k: int, radius: float, rng) -> BinaryImage:
    """Blacken ``k`` disks of the given radius centered uniformly in the frame."""
    if k == 0:
        return img
    gen = rng.generator() if isinstance(rng, RngSpec) else rng
    centers = img.frame.scale_uniform(gen.random((k, 2)))
    pc = img.pixel_centers()
    bits = img.bits.ravel().copy()
    for c in centers:
        bits |= np.sum((pc - c) ** 2, axis=1) <= radius * radius
    return BinaryImage(bits.reshape(img.bits.shape), img.frame)


from minklen.pbm import PBMError, read_pbm, write_pbm  # noqa: E402

__all__ = [
    "BinaryImage", "PBMError", "UndersmoothingWarning", "add_noise_patches", "area_based_length",
    "boundary_pixels", "digitize", "exhaustive_with_smoothing", "image_oracle", "perimeter_exhaustive",
    "pixel_area", "read_pbm", "smoothed_boundary_mask", "write_pbm",
]
