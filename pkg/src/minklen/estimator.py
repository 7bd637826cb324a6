"""Minkowski-content length estimator.

A point ``z`` of the frame belongs to the boundary estimate ``T_n`` when the
closed ball ``B(z, eps)`` holds at least ``g1`` inside ("green") and ``r1``
outside ("red") sample points. The length estimate is ``mu(T_n) / (2 eps)``,
where ``mu(T_n)`` is itself approximated with ``B`` uniform points drawn
independently of the sample.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass, field

import numba
import numpy as np
from numba import njit, prange

# the bundled TBB is too old on some systems; prefer OpenMP, then workqueue
numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]

from minklen.geometry import Frame
from minklen.sampling import LabeledSample, RngSpec, uniform_points

DEGENERATE = "degenerate_sample"

# widen the cell range of a query by this relative amount so rounding in the
# cell arithmetic can never hide a point whose computed distance is <= eps
_CELL_PAD = 1e-9


class RadiusMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class EstimatorConfig:
    epsilon: float
    mc_budget: int = 1500
    green_threshold: int = 1
    red_threshold: int = 1
    rng: RngSpec = field(default_factory=lambda: RngSpec(0, 1))

    def __post_init__(self):
        if not (self.epsilon > 0 and math.isfinite(self.epsilon)):
            raise ValueError("epsilon must be positive and finite")
        if self.mc_budget < 1:
            raise ValueError("mc_budget must be at least 1")
        if self.green_threshold < 1 or self.red_threshold < 1:
            raise ValueError("thresholds must be at least 1")

    def check_frame(self, frame: Frame) -> None:
        if not self.epsilon < min(frame.sides) / 2:
            raise ValueError(f"epsilon={self.epsilon} must be below half the smallest frame side")


@dataclass(frozen=True)
class LengthEstimate:
    length: float
    measure: float
    hits: int
    config: EstimatorConfig
    flags: tuple[str, ...] = ()

    @property
    def degenerate(self) -> bool:
        return DEGENERATE in self.flags


@njit(cache=True, nogil=True)
def _count_one(z, pts, start, ngreen, origin, cell, pad, shape, strides, eps2, g_cap, r_cap):
    d = z.shape[0]
    lo = np.empty(d, np.int64)
    hi = np.empty(d, np.int64)
    for k in range(d):
        a = math.floor((z[k] - origin[k] - pad) / cell)
        b = math.floor((z[k] - origin[k] + pad) / cell)
        if a < 0:
            a = 0
        if b > shape[k] - 1:
            b = shape[k] - 1
        if a > b:
            return 0, 0
        lo[k] = a
        hi[k] = b
    idx = lo.copy()
    g = 0
    r = 0
    while True:
        flat = 0
        for k in range(d):
            flat += idx[k] * strides[k]
        s = start[flat]
        m = s + ngreen[flat]
        e = start[flat + 1]
        if g < g_cap:
            for i in range(s, m):
                d2 = 0.0
                for k in range(d):
                    diff = pts[i, k] - z[k]
                    d2 += diff * diff
                if d2 <= eps2:
                    g += 1
                    if g >= g_cap:
                        break
        if r < r_cap:
            for i in range(m, e):
                d2 = 0.0
                for k in range(d):
                    diff = pts[i, k] - z[k]
                    d2 += diff * diff
                if d2 <= eps2:
                    r += 1
                    if r >= r_cap:
                        break
        if g >= g_cap and r >= r_cap:
            break
        k = d - 1
        while k >= 0:
            idx[k] += 1
            if idx[k] <= hi[k]:
                break
            idx[k] = lo[k]
            k -= 1
        if k < 0:
            break
    return g, r


@njit(cache=True, parallel=True)
def _count_many(queries, pts, start, ngreen, origin, cell, pad, shape, strides, eps2, g_cap, r_cap, out):
    for q in prange(queries.shape[0]):
        g, r = _count_one(queries[q], pts, start, ngreen, origin, cell, pad, shape, strides, eps2, g_cap, r_cap)
        out[q, 0] = g
        out[q, 1] = r


@njit(cache=True, parallel=True)
def _member_many(queries, pts, start, ngreen, origin, cell, pad, shape, strides, eps2, g1, r1, out):
    for q in prange(queries.shape[0]):
        g, r = _count_one(queries[q], pts, start, ngreen, origin, cell, pad, shape, strides, eps2, g1, r1)
        out[q] = g >= g1 and r >= r1


@contextmanager
def _threads(n: int | None):
    if n is None:
        yield
        return
    prev = numba.get_num_threads()
    numba.set_num_threads(max(1, min(int(n), numba.config.NUMBA_NUM_THREADS)))
    try:
        yield
    finally:
        numba.set_num_threads(prev)


class NeighborIndex:
    """Uniform bucket grid with cell edge ``eps`` for fixed-radius ball counts.

    Points are sorted by cell and, inside each cell, greens come before reds,
    so a query scans contiguous slices of the neighboring cells only.
    """

    def __init__(self, sample: LabeledSample, frame: Frame, eps: float):
        if not eps > 0:
            raise ValueError("eps must be positive")
        if len(sample) and sample.dim != frame.dim:
            raise ValueError("sample and frame dimensions differ")
        self.frame = frame
        self.eps = float(eps)
        self.eps2 = self.eps * self.eps
        d = frame.dim
        self._origin = np.array(frame.lower)
        self._shape = np.array([int(math.floor(s / self.eps)) + 1 for s in frame.sides], dtype=np.int64)
        ncells = int(np.prod(self._shape))
        self._strides = np.array([int(np.prod(self._shape[k + 1:])) for k in range(d)], dtype=np.int64)

        pts = sample.points.reshape(-1, d)
        labels = sample.labels
        if len(pts) and not np.all(frame.contains(pts)):
            raise ValueError("sample points must lie inside the frame")
        cells = np.floor((pts - self._origin) / self.eps).astype(np.int64)
        cells = np.clip(cells, 0, self._shape - 1)
        flat = cells @ self._strides
        order = np.lexsort((~labels, flat))
        self._pts = np.ascontiguousarray(pts[order])
        self._labels = labels[order]
        flat = flat[order]
        counts = np.bincount(flat, minlength=ncells)
        self._start = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
        self._ngreen = np.bincount(flat[self._labels], minlength=ncells).astype(np.int64)
        self.n_green = int(np.count_nonzero(labels))
        self.n_red = len(labels) - self.n_green
        for arr in (self._pts, self._labels, self._start, self._ngreen):
            arr.flags.writeable = False

    def __len__(self) -> int:
        return len(self._labels)

    def _args(self):
        pad = self.eps * (1.0 + _CELL_PAD)
        return (self._pts, self._start, self._ngreen, self._origin, self.eps, pad,
                self._shape, self._strides, self.eps2)

    def _queries(self, z) -> np.ndarray:
        q = np.ascontiguousarray(np.atleast_2d(np.asarray(z, dtype=np.float64)))
        if q.shape[1] != self.frame.dim:
            raise ValueError(f"query points must have dimension {self.frame.dim}")
        return q

    def counts(self, z, threads: int | None = None) -> np.ndarray:
        """``(m, 2)`` integer array of (green, red) counts in the closed eps-balls."""
        q = self._queries(z)
        out = np.zeros((len(q), 2), dtype=np.int64)
        big = np.iinfo(np.int64).max
        with _threads(threads):
            _count_many(q, *self._args(), big, big, out)
        return out

    def members(self, z, g1: int = 1, r1: int = 1, threads: int | None = None) -> np.ndarray:
        """Boolean mask: at least ``g1`` greens and ``r1`` reds within eps."""
        q = self._queries(z)
        out = np.zeros(len(q), dtype=np.bool_)
        if len(q) == 0 or self.n_green < g1 or self.n_red < r1:
            return out
        with _threads(threads):
            _member_many(q, *self._args(), int(g1), int(r1), out)
        return out


def build_index(sample: LabeledSample, frame: Frame, epsilon: float) -> NeighborIndex:
    return NeighborIndex(sample, frame, epsilon)


def count_neighbors(index: NeighborIndex, z, epsilon: float) -> tuple[int, int]:
    if float(epsilon) != index.eps:
        raise RadiusMismatchError(f"index built for eps={index.eps}, queried with {epsilon}")
    g, r = index.counts(z)[0]
    return int(g), int(r)


def in_boundary_estimate(index: NeighborIndex, z, config: EstimatorConfig) -> bool:
    if config.epsilon != index.eps:
        raise RadiusMismatchError(f"index built for eps={index.eps}, config has {config.epsilon}")
    return bool(index.members(z, config.green_threshold, config.red_threshold)[0])


def _finish(hits: int, frame: Frame, config: EstimatorConfig, flags) -> LengthEstimate:
    measure = frame.volume() * hits / config.mc_budget
    return LengthEstimate(measure / (2 * config.epsilon), measure, int(hits), config, tuple(flags))


def _degenerate(sample: LabeledSample) -> bool:
    return sample.n_green == 0 or sample.n_red == 0


def _measure_points(frame: Frame, config: EstimatorConfig, mc_points) -> np.ndarray:
    if mc_points is None:
        return uniform_points(frame, config.mc_budget, config.rng)
    mc = np.ascontiguousarray(mc_points, dtype=np.float64)
    if len(mc) != config.mc_budget:
        raise ValueError("mc_points must hold exactly mc_budget points")
    return mc


def estimate_length(sample: LabeledSample, frame: Frame, config: EstimatorConfig,
                    threads: int | None = None, mc_points=None) -> LengthEstimate:
    """Estimate the boundary length (surface area for d=3) of the sampled body.

    The ``config.mc_budget`` measure points are drawn from ``config.rng``
    unless given explicitly as ``mc_points``. A single-colored sample gives
    an empty boundary estimate; the result is then zero and carries the
    ``degenerate_sample`` flag instead of raising.
    """
    config.check_frame(frame)
    if _degenerate(sample):
        return _finish(0, frame, config, [DEGENERATE])
    mc = _measure_points(frame, config, mc_points)
    index = NeighborIndex(sample, frame, config.epsilon)
    hits = np.count_nonzero(index.members(mc, config.green_threshold, config.red_threshold, threads))
    return _finish(hits, frame, config, [])


def bruteforce_counts(points: np.ndarray, labels: np.ndarray, queries: np.ndarray, eps: float,
                      chunk: int = 1 << 22) -> np.ndarray:
    """Exhaustive O(n m) green/red counts; reference for the grid index."""
    points = np.asarray(points, dtype=np.float64)
    queries = np.atleast_2d(np.asarray(queries, dtype=np.float64))
    labels = np.asarray(labels, dtype=bool)
    eps2 = eps * eps
    out = np.zeros((len(queries), 2), dtype=np.int64)
    step = max(1, chunk // max(1, len(points)))
    for s in range(0, len(queries), step):
        q = queries[s:s + step]
        d2 = np.zeros((len(q), len(points)))
        for k in range(points.shape[1]):
            diff = points[None, :, k] - q[:, None, k]
            d2 = d2 + diff * diff
        within = d2 <= eps2
        out[s:s + step, 0] = np.count_nonzero(within & labels, axis=1)
        out[s:s + step, 1] = np.count_nonzero(within & ~labels, axis=1)
    return out


def estimate_length_bruteforce(sample: LabeledSample, frame: Frame, config: EstimatorConfig,
                               mc_points=None) -> LengthEstimate:
    config.check_frame(frame)
    if _degenerate(sample):
        return _finish(0, frame, config, [DEGENERATE])
    mc = _measure_points(frame, config, mc_points)
    c = bruteforce_counts(sample.points, sample.labels, mc, config.epsilon)
    hits = np.count_nonzero((c[:, 0] >= config.green_threshold) & (c[:, 1] >= config.red_threshold))
    return _finish(hits, frame, config, [])


def default_bandwidth(n: int, d: int = 2, c: float = 1.0) -> float:
    """Rate-optimal smoothing parameter ``c * n**(-1/(2d))`` (unit-square units)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return c * n ** (-1.0 / (2 * d))


def min_mc_budget(n: int, epsilon: float, c_b: float = 134.0) -> int:
    """Measure-sample size ``ceil(c_b log n / eps)``.

    The default constant makes n=30000, eps=0.92 land on roughly 1500 points.
    """
    if n < 2 or not epsilon > 0:
        raise ValueError("need n >= 2 and epsilon > 0")
    return int(math.ceil(c_b * math.log(n) / epsilon))


def rasterize_boundary_estimate(sample: LabeledSample, frame: Frame, config: EstimatorConfig,
                                width: int, height: int):
    """Render ``T_n`` as a binary image: black where the pixel center is in ``T_n``."""
    from minklen.raster import BinaryImage

    if width < 1 or height < 1:
        raise ValueError("width and height must be positive")
    img = BinaryImage(np.zeros((height, width), dtype=bool), frame)
    if _degenerate(sample):
        return img
    index = NeighborIndex(sample, frame, config.epsilon)
    mask = index.members(img.pixel_centers(), config.green_threshold, config.red_threshold)
    return BinaryImage(mask.reshape(height, width), frame)


def contour_index(length: float, area: float) -> float:
    """Boundary length over the square root of the area (2 sqrt(pi) for a disk)."""
    if not area > 0:
        raise ValueError("area must be positive")
    return length / math.sqrt(area)
