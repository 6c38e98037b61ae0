import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from smocking.geom import (
    DirectedSegment,
    Point2,
    nearest_point,
    point_segment_distance,
    point_segment_distance_many,
    segment,
    segment_segment_distance_many,
    segment_segment_nearest,
)

from oracles import grid_nearest, sample_segment

coord = st.floats(-20, 20, allow_nan=False, allow_infinity=False)
points = st.builds(Point2, coord, coord)
segments = st.builds(DirectedSegment, points, points)


def test_point_on_segment():
    assert point_segment_distance(Point2(0, 0), segment(-0.5, 0, 0.5, 0)) == 0.0


def test_perpendicular_foot_at_endpoint():
    assert point_segment_distance(Point2(0, 0), segment(1, 0, 1, 1)) == pytest.approx(1.0, abs=1e-12)


def test_point_segment_against_sampling():
    s = segment(0, 0, 1, 0)
    pts = sample_segment(s, 100001)
    sampled = np.hypot(pts[:, 0] - 2, pts[:, 1] - 2).min()
    d = point_segment_distance(Point2(2, 2), s)
    assert d == pytest.approx(math.sqrt(5), abs=1e-12)
    assert abs(d - sampled) < 1e-6


def test_collinear_gap():
    n = segment_segment_nearest(segment(-0.5, 0, 0.5, 0), segment(2.5, 0, 3.5, 0))
    assert n.p1.isclose(Point2(0.5, 0)) and n.p2.isclose(Point2(2.5, 0))
    assert n.length == pytest.approx(2.0, abs=1e-12)
    assert abs(n.length - grid_nearest(segment(-0.5, 0, 0.5, 0), segment(2.5, 0, 3.5, 0))) < 1e-6


def test_corner_to_endpoint():
    s1, s2 = segment(-0.5, 0, 0.5, 0), segment(1.5, 1, 1.5, 2)
    n = segment_segment_nearest(s1, s2)
    assert n.p1.isclose(Point2(0.5, 0)) and n.p2.isclose(Point2(1.5, 1))
    assert n.length == pytest.approx(math.sqrt(2), abs=1e-12)
    assert abs(n.length - grid_nearest(s1, s2)) < 1e-6


def test_identical_segments():
    s = segment(-0.5, 0, 0.5, 0)
    n = segment_segment_nearest(s, s)
    assert n.length == 0.0
    assert n.p1.isclose(n.p2)
    assert point_segment_distance(n.p1, s) < 1e-12


def test_crossing_segments():
    n = segment_segment_nearest(segment(-1, 0, 1, 0), segment(0, -1, 0, 1))
    assert n.length == 0.0 and n.p1.isclose(Point2(0, 0))


def test_nonfinite_rejected():
    with pytest.raises(ValueError):
        Point2(math.nan, 0)


@settings(max_examples=200, deadline=None)
@given(segments, segments)
def test_nearest_symmetric(s1, s2):
    a = segment_segment_nearest(s1, s2).length
    b = segment_segment_nearest(s2, s1).length
    assert abs(a - b) < 1e-9


@settings(max_examples=200, deadline=None)
@given(segments, segments)
def test_nearest_witnesses_lie_on_segments(s1, s2):
    n = segment_segment_nearest(s1, s2)
    assert point_segment_distance(n.p1, s1) < 1e-9
    assert point_segment_distance(n.p2, s2) < 1e-9
    assert abs(n.p1.dist(n.p2) - n.length) < 1e-9


@settings(max_examples=200, deadline=None)
@given(segments, segments, st.floats(0, 1), st.floats(0, 1))
def test_nearest_is_lower_bound(s1, s2, t1, t2):
    n = segment_segment_nearest(s1, s2)
    assert n.length <= s1.at(t1).dist(s2.at(t2)) + 1e-9


@settings(max_examples=100, deadline=None)
@given(points, segments)
def test_degenerate_segment_agrees_with_point(p, s):
    as_seg = segment_segment_nearest(DirectedSegment(p, p), s).length
    assert abs(as_seg - point_segment_distance(p, s)) < 1e-9
    assert nearest_point(p, s).dist(p) == pytest.approx(point_segment_distance(p, s), abs=1e-9)


def test_vectorized_matches_scalar():
    rng = np.random.default_rng(3)
    a = rng.uniform(-5, 5, (300, 2, 2))
    b = rng.uniform(-5, 5, (300, 2, 2))
    vec = segment_segment_distance_many(a, b)
    for i in range(len(a)):
        s1 = segment(*a[i, 0], *a[i, 1])
        s2 = segment(*b[i, 0], *b[i, 1])
        assert vec[i] == pytest.approx(segment_segment_nearest(s1, s2).length, abs=1e-9)
    p = rng.uniform(-5, 5, (300, 2))
    vp = point_segment_distance_many(p, a)
    for i in range(len(p)):
        assert vp[i] == pytest.approx(point_segment_distance(Point2(*p[i]), segment(*a[i, 0], *a[i, 1])), abs=1e-12)
