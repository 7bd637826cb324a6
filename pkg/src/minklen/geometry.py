"""Shapes with exact membership tests, boundary lengths and areas.

Every analytic shape exposes a vectorized ``contains`` that accepts an
``(m, d)`` array (or a single point) and returns booleans. Boundary points
count as inside, so each shape is a closed set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from minklen.raster import BinaryImage


class UnsupportedShapeError(TypeError):
    """Raised when an operation needs an analytic shape and gets something else."""


@dataclass(frozen=True)
class Frame:
    """Axis-aligned sampling window (a rectangle, or a box when z bounds are set)."""

    xmin: float
    xmax: float
    ymin: float
    ymax: float
    zmin: float | None = None
    zmax: float | None = None

    def __post_init__(self):
        if (self.zmin is None) != (self.zmax is None):
            raise ValueError("zmin and zmax must be given together")
        for lo, hi in zip(self.lower, self.upper):
            if not (math.isfinite(lo) and math.isfinite(hi)) or hi <= lo:
                raise ValueError(f"degenerate frame {self}")

    @classmethod
    def unit(cls, d: int = 2) -> Frame:
        return cls(0.0, 1.0, 0.0, 1.0) if d == 2 else cls(0.0, 1.0, 0.0, 1.0, 0.0, 1.0)

    @property
    def dim(self) -> int:
        return 2 if self.zmin is None else 3

    @property
    def lower(self) -> tuple[float, ...]:
        lo = (float(self.xmin), float(self.ymin))
        return lo if self.zmin is None else lo + (float(self.zmin),)

    @property
    def upper(self) -> tuple[float, ...]:
        hi = (float(self.xmax), float(self.ymax))
        return hi if self.zmax is None else hi + (float(self.zmax),)

    @property
    def sides(self) -> tuple[float, ...]:
        return tuple(hi - lo for lo, hi in zip(self.lower, self.upper))

    def volume(self) -> float:
        return math.prod(self.sides)

    area = volume

    def contains(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        lo, hi = np.array(self.lower), np.array(self.upper)
        return np.all((pts >= lo) & (pts <= hi), axis=1)

    def scale_uniform(self, u: np.ndarray) -> np.ndarray:
        """Map variates in [0, 1)^d to points in the frame."""
        lo = np.array(self.lower)
        return lo + (np.array(self.upper) - lo) * u


def _as_points(p, d: int = 2) -> tuple[np.ndarray, bool]:
    arr = np.asarray(p, dtype=float)
    single = arr.ndim == 1
    arr = np.atleast_2d(arr)
    if arr.shape[1] != d:
        raise ValueError(f"expected points of dimension {d}, got shape {arr.shape}")
    return arr, single


def _ret(mask: np.ndarray, single: bool):
    return bool(mask[0]) if single else mask


class Shape:
    """Base class for membership oracles.

    Subclasses implement ``_contains`` on an ``(m, d)`` array; ``contains``
    also accepts a single point and then returns a plain ``bool``.
    """

    dim = 2

    def contains(self, p):
        pts, single = _as_points(p, self.dim)
        return _ret(self._contains(pts), single)

    def _contains(self, pts: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def true_length(self) -> float:
        raise UnsupportedShapeError(f"{type(self).__name__} has no closed-form boundary measure")

    def true_area(self) -> float:
        raise UnsupportedShapeError(f"{type(self).__name__} has no closed-form area")

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    def default_frame(self) -> Frame:
        lo, hi = self.bounding_box()
        if np.all(lo > 0.0) and np.all(hi < 1.0):
            return Frame.unit(self.dim)
        # square (cube) window around the bounding box, 25% margin per side
        center = (lo + hi) / 2
        half = 0.75 * float(np.max(hi - lo))
        bounds = []
        for c in center:
            bounds += [float(c - half), float(c + half)]
        return Frame(*bounds)


@dataclass(frozen=True)
class Disk(Shape):
    center: tuple[float, float]
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))

    def _contains(self, pts):
        c = np.array(self.center)
        return np.sum((pts - c) ** 2, axis=1) <= self.radius**2

    def true_length(self):
        return 2 * math.pi * self.radius

    def true_area(self):
        return math.pi * self.radius**2

    def bounding_box(self):
        c = np.array(self.center)
        return c - self.radius, c + self.radius

    def boundary_distance(self, p) -> np.ndarray:
        pts, _ = _as_points(p, 2)
        return np.abs(np.hypot(*(pts - np.array(self.center)).T) - self.radius)


@dataclass(frozen=True)
class AxisSquare(Shape):
    center: tuple[float, float]
    side: float

    def __post_init__(self):
        if not self.side > 0:
            raise ValueError("side must be positive")
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))

    def _contains(self, pts):
        half = self.side / 2
        return np.all(np.abs(pts - np.array(self.center)) <= half, axis=1)

    def true_length(self):
        return 4 * self.side

    def true_area(self):
        return self.side**2

    def bounding_box(self):
        c = np.array(self.center)
        return c - self.side / 2, c + self.side / 2

    def boundary_distance(self, p) -> np.ndarray:
        pts, _ = _as_points(p, 2)
        q = np.abs(pts - np.array(self.center)) - self.side / 2
        outside = np.hypot(*np.maximum(q, 0.0).T)
        inside = np.minimum(np.max(q, axis=1), 0.0)
        return np.abs(outside + inside)


@dataclass(frozen=True)
class RotatedSquare(Shape):
    """Square of the given side rotated counter-clockwise by ``angle`` degrees."""

    center: tuple[float, float]
    side: float
    angle: float = 45.0

    def __post_init__(self):
        if not self.side > 0:
            raise ValueError("side must be positive")
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))

    def _contains(self, pts):
        t = math.radians(self.angle)
        c, s = math.cos(t), math.sin(t)
        rel = pts - np.array(self.center)
        u = c * rel[:, 0] + s * rel[:, 1]
        v = -s * rel[:, 0] + c * rel[:, 1]
        half = self.side / 2
        return (np.abs(u) <= half) & (np.abs(v) <= half)

    def true_length(self):
        return 4 * self.side

    def true_area(self):
        return self.side**2

    def bounding_box(self):
        t = math.radians(self.angle)
        ext = self.side / 2 * (abs(math.cos(t)) + abs(math.sin(t)))
        c = np.array(self.center)
        return c - ext, c + ext


@dataclass(frozen=True)
class Tschirnhausen(Shape):
    """Region enclosed by the loop of the Tschirnhausen cubic with parameter ``a``.

    In polar form the loop is ``r = a sec^3(theta/3)`` for theta in [0, pi] and
    its mirror image for theta in (pi, 2 pi); the double point sits at (-8a, 0).
    """

    a: float = 1.0

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError("a must be positive")

    def _contains(self, pts):
        r = np.hypot(pts[:, 0], pts[:, 1])
        # |atan2| equals theta on [0, pi] and 2*pi - theta on (pi, 2*pi)
        third = np.abs(np.arctan2(pts[:, 1], pts[:, 0])) / 3.0
        # r <= a sec^3(.) written without the division; cos(third) >= 1/2
        return r * np.cos(third) ** 3 <= self.a

    def true_length(self):
        return 12.0 * self.a * math.sqrt(3.0)

    def true_area(self):
        return 72.0 * self.a**2 * math.sqrt(3.0) / 5.0

    def bounding_box(self):
        theta = np.linspace(0.0, math.pi, 20001)
        r = self.a / np.cos(theta / 3) ** 3
        ymax = float(np.max(r * np.sin(theta)))
        return np.array([-8.0 * self.a, -ymax]), np.array([self.a, ymax])

    def default_frame(self):
        a = self.a
        return Frame(-9.0 * a, 2.0 * a, -5.5 * a, 5.5 * a)

    def boundary_polygon(self, m: int = 100_000) -> np.ndarray:
        """Counter-clockwise ``(m, 2)`` vertex array tracing the loop."""
        theta = np.linspace(-math.pi, math.pi, m, endpoint=False)
        r = self.a / np.cos(np.abs(theta) / 3) ** 3
        return np.column_stack([r * np.cos(theta), r * np.sin(theta)])


@dataclass(frozen=True)
class Ball(Shape):
    """Closed ball in three dimensions."""

    center: tuple[float, float, float]
    radius: float
    dim = 3

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))

    def _contains(self, pts):
        return np.sum((pts - np.array(self.center)) ** 2, axis=1) <= self.radius**2

    def true_length(self):
        return 4 * math.pi * self.radius**2

    def true_area(self):
        return 4 / 3 * math.pi * self.radius**3

    def bounding_box(self):
        c = np.array(self.center)
        return c - self.radius, c + self.radius

    def boundary_distance(self, p) -> np.ndarray:
        pts, _ = _as_points(p, 3)
        return np.abs(np.linalg.norm(pts - np.array(self.center), axis=1) - self.radius)


@dataclass(frozen=True)
class AxisCube(Shape):
    center: tuple[float, float, float]
    side: float
    dim = 3

    def __post_init__(self):
        if not self.side > 0:
            raise ValueError("side must be positive")
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))

    def _contains(self, pts):
        return np.all(np.abs(pts - np.array(self.center)) <= self.side / 2, axis=1)

    def true_length(self):
        return 6 * self.side**2

    def true_area(self):
        return self.side**3

    def bounding_box(self):
        c = np.array(self.center)
        return c - self.side / 2, c + self.side / 2


@dataclass(frozen=True, eq=False)
class ImageShape(Shape):
    """Membership read off a binary image: the color of the pixel containing the point."""

    image: BinaryImage = field(repr=False)

    def _contains(self, pts):
        return self.image.lookup(pts)

    def bounding_box(self):
        f = self.image.frame
        return np.array(f.lower), np.array(f.upper)

    def default_frame(self):
        return self.image.frame


def contains(shape: Shape, p):
    return shape.contains(p)


def true_length(shape: Shape) -> float:
    return shape.true_length()


def true_area(shape: Shape) -> float:
    return shape.true_area()


def default_frame(shape: Shape) -> Frame:
    return shape.default_frame()


def reference_dilated_length(shape: Shape, eps: float) -> float:
    """Exact ``mu(B(boundary, eps)) / (2 eps)`` for shapes where it is polynomial in eps.

    Valid only below the injectivity radius (eps < radius, eps < side/2);
    outside that range the inner parallel set degenerates and a ``ValueError``
    is raised.
    """
    if isinstance(shape, (Disk, Ball)):
        if not 0 < eps < shape.radius:
            raise ValueError(f"eps must lie in (0, {shape.radius})")
        if isinstance(shape, Disk):
            return 2 * math.pi * shape.radius
        R = shape.radius
        return 4 * math.pi * R**2 + 4 * math.pi * eps**2 / 3
    if isinstance(shape, (AxisSquare, RotatedSquare)):
        s = shape.side
        if not 0 < eps < s / 2:
            raise ValueError(f"eps must lie in (0, {s / 2})")
        return 4 * s + (math.pi - 4) * eps / 2
    if isinstance(shape, AxisCube):
        s = shape.side
        if not 0 < eps < s / 2:
            raise ValueError(f"eps must lie in (0, {s / 2})")
        outer = s**3 + 6 * s**2 * eps + 3 * math.pi * s * eps**2 + 4 / 3 * math.pi * eps**3
        inner = (s - 2 * eps) ** 3
        return (outer - inner) / (2 * eps)
    raise UnsupportedShapeError(f"no closed-form dilated length for {type(shape).__name__}")


def parse_frame(text: str) -> Frame:
    vals = [float(v) for v in text.split(",")]
    if len(vals) not in (4, 6):
        raise ValueError(f"frame needs 4 or 6 numbers, got {text!r}")
    return Frame(*vals)


def parse_shape(text: str) -> Shape:
    """Parse ``disk:cx,cy,R``, ``square:cx,cy,s``, ``rsquare:cx,cy,s,deg``,
    ``tschirnhausen:a``, ``ball:cx,cy,cz,R``, ``cube:cx,cy,cz,s`` or
    ``image:<path.pbm>[:xmin,xmax,ymin,ymax]``."""
    kind, _, rest = text.partition(":")
    kind = kind.strip().lower()
    if kind == "image":
        path, frame_text = rest, ""
        head, sep, tail = rest.rpartition(":")
        if sep and tail.count(",") in (3, 5):
            path, frame_text = head, tail
        from minklen.raster import read_pbm

        img = read_pbm(path)
        if frame_text:
            img = img.with_frame(parse_frame(frame_text))
        return ImageShape(img)
    try:
        args = [float(v) for v in rest.split(",")] if rest else []
    except ValueError as exc:
        raise ValueError(f"bad shape parameters in {text!r}") from exc
    arity = {"disk": 3, "square": 3, "rsquare": (3, 4), "tschirnhausen": (0, 1), "ball": 4, "cube": 4}
    if kind not in arity:
        raise ValueError(f"unknown shape kind {kind!r}")
    want = arity[kind]
    if len(args) not in (want if isinstance(want, tuple) else (want,)):
        raise ValueError(f"wrong number of parameters for {kind}: {text!r}")
    if kind == "disk":
        return Disk((args[0], args[1]), args[2])
    if kind == "square":
        return AxisSquare((args[0], args[1]), args[2])
    if kind == "rsquare":
        return RotatedSquare((args[0], args[1]), *args[2:])
    if kind == "tschirnhausen":
        return Tschirnhausen(*args)
    if kind == "ball":
        return Ball(tuple(args[:3]), args[3])
    return AxisCube(tuple(args[:3]), args[3])
