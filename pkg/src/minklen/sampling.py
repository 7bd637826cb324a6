"""Seeded uniform sampling on a frame, inside/outside labels, and plain MC area."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

from minklen.geometry import Frame, Shape

# purpose tags, first component of every stream key
DATA, MEASURE, NOISE = 0, 1, 2


@dataclass(frozen=True)
class RngSpec:
    """Names one reproducible random stream.

    ``stream_id`` may be an int or a tuple of ints; distinct keys give
    independent streams through ``numpy.random.SeedSequence`` spawn keys.
    The bit generator is Philox, which is counter based, so a stream's
    output never depends on which other streams were drawn before it.
    """

    master_seed: int
    stream_id: int | tuple[int, ...] = 0

    @property
    def key(self) -> tuple[int, ...]:
        sid = self.stream_id
        return tuple(int(s) for s in sid) if isinstance(sid, tuple) else (int(sid),)

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=int(self.master_seed), spawn_key=self.key)
        return np.random.Generator(np.random.Philox(ss))

    def child(self, *key: int) -> RngSpec:
        return RngSpec(self.master_seed, self.key + tuple(int(k) for k in key))


def data_stream(seed: int, rep: int) -> RngSpec:
    return RngSpec(seed, (DATA, rep))


def measure_stream(seed: int, rep: int, eps_index: int = 0) -> RngSpec:
    return RngSpec(seed, (MEASURE, rep, eps_index))


def noise_stream(seed: int, rep: int) -> RngSpec:
    return RngSpec(seed, (NOISE, rep))


class LabeledPoint(NamedTuple):
    z: np.ndarray
    delta: int


@dataclass(frozen=True, eq=False)
class LabeledSample:
    """``n`` points (rows of ``points``) with boolean labels, True = inside."""

    points: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        pts = np.ascontiguousarray(self.points, dtype=np.float64)
        if pts.ndim != 2:
            pts = pts.reshape(-1, 2) if pts.size == 0 else np.atleast_2d(pts)
        lab = np.ascontiguousarray(self.labels, dtype=bool).reshape(-1)
        if len(lab) != len(pts):
            raise ValueError("points and labels differ in length")
        pts.flags.writeable = False
        lab.flags.writeable = False
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "labels", lab)

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self) -> Iterator[LabeledPoint]:
        for z, d in zip(self.points, self.labels):
            yield LabeledPoint(z, int(d))

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def n_green(self) -> int:
        return int(np.count_nonzero(self.labels))

    @property
    def n_red(self) -> int:
        return len(self) - self.n_green

    @classmethod
    def from_points(cls, points: list[LabeledPoint]) -> LabeledSample:
        if not points:
            return cls(np.empty((0, 2)), np.empty(0, dtype=bool))
        return cls(np.array([p.z for p in points], dtype=float), np.array([p.delta for p in points], dtype=bool))


def uniform_points(frame: Frame, n: int, rng: RngSpec | np.random.Generator) -> np.ndarray:
    gen = rng.generator() if isinstance(rng, RngSpec) else rng
    return frame.scale_uniform(gen.random((n, frame.dim)))


def draw_labeled_sample(shape: Shape, frame: Frame, n: int, rng: RngSpec) -> LabeledSample:
    if n < 0:
        raise ValueError("n must be non-negative")
    pts = uniform_points(frame, n, rng)
    labels = shape.contains(pts) if n else np.empty(0, dtype=bool)
    return LabeledSample(pts, labels)


def mc_area(sample: LabeledSample, frame: Frame) -> float:
    """Frame volume times the fraction of inside points."""
    if len(sample) == 0:
        raise ValueError("empty sample")
    return frame.volume() * sample.n_green / len(sample)


def save_sample_csv(sample: LabeledSample, path) -> None:
    names = ["x", "y", "z"][: sample.dim]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(names + ["delta"])
        for z, d in zip(sample.points, sample.labels):
            w.writerow([f"{v:.17g}" for v in z] + [int(d)])


def load_sample_csv(path) -> LabeledSample:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    if header[-1] != "delta":
        raise ValueError(f"{path}: last column must be 'delta'")
    d = len(header) - 1
    if not body:
        return LabeledSample(np.empty((0, d)), np.empty(0, dtype=bool))
    arr = np.array([[float(v) for v in r[:d]] for r in body])
    labels = np.array([int(r[d]) for r in body], dtype=bool)
    return LabeledSample(arr, labels)
