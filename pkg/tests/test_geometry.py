import math

import numpy as np
import pytest
from matplotlib.path import Path
from numpy.testing import assert_allclose

from minklen.geometry import (
    AxisCube,
    AxisSquare,
    Ball,
    Disk,
    Frame,
    ImageShape,
    RotatedSquare,
    Tschirnhausen,
    UnsupportedShapeError,
    contains,
    default_frame,
    parse_shape,
    reference_dilated_length,
    true_area,
    true_length,
)
from minklen.raster import digitize


def _segment_distance(pts, poly):
    """Distance from each point to a closed polygon, by brute force over edges."""
    a = poly
    b = np.roll(poly, -1, axis=0)
    out = np.full(len(pts), np.inf)
    for p_i, p in enumerate(pts):
        ab = b - a
        t = np.clip(np.einsum("ij,ij->i", p - a, ab) / np.einsum("ij,ij->i", ab, ab), 0, 1)
        proj = a + t[:, None] * ab
        out[p_i] = np.min(np.hypot(*(proj - p).T))
    return out


def test_frame_invariants():
    f = Frame(-9, 2, -5.5, 5.5)
    assert f.sides == (11.0, 11.0)
    assert f.area() == 121.0
    assert Frame(0, 1, 0, 2, 0, 3).volume() == 6.0
    with pytest.raises(ValueError):
        Frame(1, 0, 0, 1)
    with pytest.raises(ValueError):
        Frame(0, 1, 0, 1, zmin=0.0)


def test_tschirnhausen_membership_examples():
    g = Tschirnhausen(1)
    assert contains(g, (0, 0)) is True
    assert contains(g, (1.5, 0)) is False
    assert contains(g, (1.0, 0)) is True  # boundary point, closed set
    assert contains(g, (-7.9, 0)) is True
    assert contains(g, (-8.1, 0)) is False


def test_disk_membership_examples():
    d = Disk((0.5, 0.5), 0.25)
    assert contains(d, (0.5, 0.74))
    assert not contains(d, (0.5, 0.76))


@pytest.mark.parametrize("shape", [Tschirnhausen(1), Tschirnhausen(0.4), Disk((0.5, 0.5), 0.25),
                                   RotatedSquare((0.5, 0.5), 0.5, 30)])
def test_contains_agrees_with_dense_polygon(shape):
    if isinstance(shape, Tschirnhausen):
        poly = shape.boundary_polygon(100_000)
    elif isinstance(shape, Disk):
        t = np.linspace(0, 2 * np.pi, 100_000, endpoint=False)
        poly = np.array(shape.center) + shape.radius * np.column_stack([np.cos(t), np.sin(t)])
    else:
        c, s = math.cos(math.radians(shape.angle)), math.sin(math.radians(shape.angle))
        corners = np.array([[-1, -1], [1, -1], [1, 1], [-1, 1]]) * shape.side / 2
        rot = corners @ np.array([[c, s], [-s, c]])
        poly = np.vstack([np.linspace(rot[i], rot[(i + 1) % 4], 25_000, endpoint=False) for i in range(4)])
        poly = poly + np.array(shape.center)
    frame = shape.default_frame()
    pts = frame.scale_uniform(np.random.default_rng(11).random((10_000, 2)))
    ours = shape.contains(pts)
    ref = Path(poly).contains_points(pts)
    bad = np.flatnonzero(ours != ref)
    if len(bad):
        assert np.all(_segment_distance(pts[bad], poly) < 1e-6 + _chord_error(shape))


def _chord_error(shape):
    # sagitta of the polygonal rendering; the polygon itself is only this accurate
    if isinstance(shape, Tschirnhausen):
        return 1e-6
    if isinstance(shape, Disk):
        return shape.radius * (1 - math.cos(math.pi / 100_000))
    return 0.0


def test_closed_forms():
    assert_allclose(true_length(Tschirnhausen(1)), 20.7846, atol=5e-5)
    assert_allclose(true_area(Tschirnhausen(1)), 24.9415, atol=5e-5)
    assert_allclose(true_length(Disk((0.5, 0.5), 0.25)), math.pi / 2)
    assert_allclose(true_area(Disk((0.5, 0.5), 0.25)), math.pi / 16)
    assert true_length(AxisSquare((0.5, 0.5), 0.5)) == 2.0
    assert true_area(AxisSquare((0.5, 0.5), 0.5)) == 0.25


def test_tschirnhausen_closed_forms_by_quadrature():
    # polar area and arc length integrated numerically
    from scipy.integrate import quad

    r = lambda t: 1 / math.cos(t / 3) ** 3  # noqa: E731
    dr = lambda t: r(t) * math.tan(t / 3)  # noqa: E731
    area = 2 * quad(lambda t: 0.5 * r(t) ** 2, 0, math.pi)[0]
    length = 2 * quad(lambda t: math.hypot(r(t), dr(t)), 0, math.pi)[0]
    assert_allclose(area, true_area(Tschirnhausen(1)), rtol=1e-10)
    assert_allclose(length, true_length(Tschirnhausen(1)), rtol=1e-10)


@pytest.mark.parametrize("a", [0.3, 1.0, 2.5])
def test_homogeneity(a):
    assert_allclose(true_area(Tschirnhausen(a)), a**2 * true_area(Tschirnhausen(1)))
    assert_allclose(true_length(Tschirnhausen(a)), a * true_length(Tschirnhausen(1)))


def test_image_backed_has_no_closed_form():
    img = digitize(Disk((0.5, 0.5), 0.25), Frame.unit(), 16, 16)
    with pytest.raises(UnsupportedShapeError):
        true_length(ImageShape(img))
    with pytest.raises(UnsupportedShapeError):
        reference_dilated_length(Tschirnhausen(1), 0.1)
    assert default_frame(ImageShape(img)) == img.frame


def test_reference_dilated_length_values():
    d = Disk((0.5, 0.5), 0.25)
    for eps in (0.01, 0.1, 0.2):
        assert reference_dilated_length(d, eps) == pytest.approx(math.pi / 2, rel=1e-15)
    sq = AxisSquare((0.5, 0.5), 0.5)
    assert reference_dilated_length(sq, 0.1) == pytest.approx(1.957080, abs=1e-6)
    assert reference_dilated_length(sq, 1e-9) == pytest.approx(2.0, abs=1e-8)
    with pytest.raises(ValueError):
        reference_dilated_length(sq, 0.25)
    with pytest.raises(ValueError):
        reference_dilated_length(d, 0.3)


def test_square_dilated_length_by_pixel_counting():
    # parallel-set area counted on a fine grid, distances computed edge by edge
    sq = AxisSquare((0.5, 0.5), 0.5)
    eps, m = 0.1, 2000
    xs = (np.arange(m) + 0.5) / m
    X, Y = np.meshgrid(xs, xs)
    lo, hi = 0.25, 0.75
    dx = np.maximum(np.maximum(lo - X, X - hi), 0)
    dy = np.maximum(np.maximum(lo - Y, Y - hi), 0)
    outside = np.hypot(dx, dy)
    inside = np.minimum.reduce([X - lo, hi - X, Y - lo, hi - Y])
    dist = np.where((dx == 0) & (dy == 0), inside, outside)
    strip = np.count_nonzero(dist <= eps) / m**2
    assert strip / (2 * eps) == pytest.approx(reference_dilated_length(sq, eps), rel=2e-3)


def test_ball_and_cube_formulas():
    b = Ball((0.5, 0.5, 0.5), 0.3)
    assert reference_dilated_length(b, 0.05) == pytest.approx(4 * math.pi * 0.09 + 4 * math.pi * 0.0025 / 3)
    c = AxisCube((0.5, 0.5, 0.5), 0.4)
    assert reference_dilated_length(c, 1e-7) == pytest.approx(6 * 0.16, rel=1e-5)
    assert b.default_frame() == Frame.unit(3)
    assert c.contains((0.5, 0.5, 0.7)) and not c.contains((0.5, 0.5, 0.71))


def test_default_frames():
    assert default_frame(Tschirnhausen(1)) == Frame(-9, 2, -5.5, 5.5)
    assert default_frame(Disk((0.5, 0.5), 0.25)) == Frame(0, 1, 0, 1)
    big = Disk((3, 3), 2)
    f = big.default_frame()
    lo, hi = big.bounding_box()
    assert f.xmin < lo[0] and f.xmax > hi[0] and f.ymin < lo[1] and f.ymax > hi[1]


def test_tschirnhausen_fits_its_frame():
    lo, hi = Tschirnhausen(1).bounding_box()
    f = Tschirnhausen(1).default_frame()
    assert f.xmin < lo[0] and hi[0] < f.xmax and f.ymin < lo[1] and hi[1] < f.ymax


def test_boundary_distance_square():
    sq = AxisSquare((0.5, 0.5), 0.5)
    assert_allclose(sq.boundary_distance([[0.5, 0.5], [0.8, 0.5], [0.8, 0.8], [0.3, 0.5]]),
                    [0.25, 0.05, math.hypot(0.05, 0.05), 0.05])


def test_parse_shape():
    assert parse_shape("disk:0.5,0.5,0.25") == Disk((0.5, 0.5), 0.25)
    assert parse_shape("square:0.5,0.5,0.5") == AxisSquare((0.5, 0.5), 0.5)
    assert parse_shape("rsquare:0.5,0.5,0.4") == RotatedSquare((0.5, 0.5), 0.4, 45.0)
    assert parse_shape("tschirnhausen:1") == Tschirnhausen(1.0)
    for bad in ("blob:1", "disk:1,2", "disk:a,b,c"):
        with pytest.raises(ValueError):
            parse_shape(bad)
