import numpy as np
import pytest
from scipy import stats

from minklen.geometry import Disk, Frame, Tschirnhausen
from minklen.sampling import (
    LabeledPoint,
    LabeledSample,
    RngSpec,
    data_stream,
    draw_labeled_sample,
    load_sample_csv,
    mc_area,
    measure_stream,
    save_sample_csv,
)


def test_empty_sample():
    s = draw_labeled_sample(Disk((0.5, 0.5), 0.25), Frame.unit(), 0, RngSpec(1, 0))
    assert len(s) == 0
    assert list(s) == []
    with pytest.raises(ValueError):
        mc_area(s, Frame.unit())


def test_determinism_and_stream_separation():
    shape, frame = Tschirnhausen(1), Tschirnhausen(1).default_frame()
    a = draw_labeled_sample(shape, frame, 1000, RngSpec(42, 3))
    b = draw_labeled_sample(shape, frame, 1000, RngSpec(42, 3))
    c = draw_labeled_sample(shape, frame, 1000, RngSpec(42, 4))
    assert a.points.tobytes() == b.points.tobytes()
    assert np.array_equal(a.labels, b.labels)
    assert not np.array_equal(a.points, c.points)
    # data and measure keys never collide
    assert data_stream(1, 0).key != measure_stream(1, 0).key


def test_stream_independent_of_draw_order():
    first = RngSpec(9, 1).generator().random(5)
    RngSpec(9, 2).generator().random(1000)
    assert np.array_equal(first, RngSpec(9, 1).generator().random(5))


def test_labels_match_oracle_and_frame():
    shape = Tschirnhausen(1)
    frame = shape.default_frame()
    s = draw_labeled_sample(shape, frame, 5000, RngSpec(7, 0))
    assert np.all(frame.contains(s.points))
    assert np.array_equal(s.labels, shape.contains(s.points))
    for p in list(s)[:50]:
        assert isinstance(p, LabeledPoint)
        assert p.delta == int(shape.contains(p.z))


def test_green_fraction_binomial():
    shape = Tschirnhausen(1)
    s = draw_labeled_sample(shape, shape.default_frame(), 30_000, RngSpec(2024, 0))
    p = shape.true_area() / 121
    assert p == pytest.approx(0.2061, abs=1e-4)
    assert abs(s.n_green / len(s) - p) <= 0.007


def test_mc_area_trivial():
    f = Frame.unit()
    pts = np.full((6, 2), 0.5)
    assert mc_area(LabeledSample(pts, np.ones(6, bool)), f) == 1.0
    assert mc_area(LabeledSample(pts, [1, 1, 1, 0, 0, 0]), f) == 0.5
    assert mc_area(LabeledSample(pts, np.ones(6, bool)), Frame(-9, 2, -5.5, 5.5)) == 121.0


def test_uniformity_chi_square():
    f = Frame(-9, 2, -5.5, 5.5)
    s = draw_labeled_sample(Disk((0, 0), 1), f, 1_000_000, RngSpec(5, 0))
    h, _, _ = np.histogram2d(s.points[:, 0], s.points[:, 1], bins=10, range=[[-9, 2], [-5.5, 5.5]])
    _, pval = stats.chisquare(h.ravel())
    assert pval > 1e-6


def test_csv_round_trip_is_exact(tmp_path):
    shape = Tschirnhausen(1)
    s = draw_labeled_sample(shape, shape.default_frame(), 300, RngSpec(8, 0))
    path = tmp_path / "sample.csv"
    save_sample_csv(s, path)
    back = load_sample_csv(path)
    assert back.points.tobytes() == s.points.tobytes()
    assert np.array_equal(back.labels, s.labels)
    assert path.read_text().splitlines()[0] == "x,y,delta"


def test_from_points():
    pts = [LabeledPoint(np.array([0.1, 0.2]), 1), LabeledPoint(np.array([0.3, 0.4]), 0)]
    s = LabeledSample.from_points(pts)
    assert s.n_green == 1 and s.n_red == 1
