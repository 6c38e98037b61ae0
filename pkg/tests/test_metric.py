import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from smocking import closedform as cf
from smocking.analysis import stitch_geodesics_to
from smocking.geom import Point2, point_segment_distance
from smocking.metric import (
    CheckeredMetric,
    WindowError,
    build_stitch_graph,
    geodesic,
    pseudometric,
    required_window,
    stitch_distance,
)
from smocking.pattern import ORIGIN, PatternError, StitchIndex, checkered_pattern

from oracles import enumerate_distance, enumerate_point_distance, hop_matrix

SQ2 = math.sqrt(2)
NETWORK_OFFSETS = {(1.5, 1.5), (3.0, 0.0), (0.0, 3.0)}


@pytest.fixture(scope="module")
def window9():
    return checkered_pattern(9)


@pytest.fixture(scope="module")
def window18():
    return checkered_pattern(18)


@pytest.fixture(scope="module")
def metric():
    return CheckeredMetric()


def test_graph_radius_zero():
    g = build_stitch_graph(checkered_pattern(0))
    assert len(g) == 1 and g.n_edges == 0


def test_graph_radius_two():
    p = checkered_pattern(2)
    g = build_stitch_graph(p)
    assert len(g) == 5
    w = g.weights[g.node_of(ORIGIN), g.node_of(StitchIndex.checkered(1.5, 1.5))]
    assert w == pytest.approx(SQ2, abs=1e-12)
    assert np.allclose(g.weights, g.weights.T)
    off = g.weights[~np.eye(5, dtype=bool)]
    assert off.min() >= SQ2 - 1e-12


def test_graph_endpoint_edge():
    g = build_stitch_graph(checkered_pattern(2), [(0, 2), (0, -2)])
    assert g.weights[g.node_of(Point2(0, 2)), g.node_of(Point2(0, -2))] == pytest.approx(4.0)


@pytest.mark.parametrize("k,radius,expected", [
    ((3, 0), 6, 2.0),
    ((0, 3), 6, 2 * SQ2),
    ((6, 3), 9, 2 + 2 * SQ2),
])
def test_stitch_distance_against_enumeration(k, radius, expected):
    p = checkered_pattern(radius)
    segs = [s.segment for s in p]
    w = hop_matrix(segs)
    s, t = p.position((0, 0)), p.position(k)
    brute = enumerate_distance(w, s, t, max_intermediate=3)
    assert brute == pytest.approx(expected, abs=1e-12)
    assert stitch_distance(p, (0, 0), k) == pytest.approx(brute, abs=1e-12)


def test_stitch_distance_identity():
    assert stitch_distance(checkered_pattern(3), (0, 0), (0, 0)) == 0.0


def test_stitch_distance_unknown_index():
    with pytest.raises(PatternError):
        stitch_distance(checkered_pattern(3), (0, 0), (6, 0))


def test_pseudometric_examples(window18):
    assert pseudometric(window18, (1, 1), (1, 1)) == 0.0
    assert pseudometric(window18, (0.1, 0), (-0.4, 0)) == 0.0
    assert pseudometric(window18, (0.6, 0), (2.4, 0)) == pytest.approx(1.8, abs=1e-12)
    assert pseudometric(window18, (0, 2), (0, -2)) == pytest.approx(4.0, abs=1e-12)


@pytest.mark.parametrize("x,y", [((0.6, 0), (2.4, 0)), ((0, 2), (0, -2)), ((0.2, 0.9), (4.1, -1.3)),
                                 ((2.2, 2.2), (-1.0, 0.7))])
def test_pseudometric_against_enumeration(window9, window18, x, y):
    brute = enumerate_point_distance(window9, x, y, max_intermediate=4)
    assert pseudometric(window18, x, y) == pytest.approx(brute, abs=1e-12)


def test_required_window():
    assert required_window(Point2(0, 0), Point2(9, 0)) == pytest.approx(13.0)
    assert required_window(Point2(2, -5), Point2(2, -5)) == pytest.approx(5 + 1 + 3)


def test_window_error_names_radius():
    with pytest.raises(WindowError, match="required radius is 13"):
        pseudometric(checkered_pattern(6), (0, 0), (9, 0))


@pytest.mark.parametrize("x,y", [((0, 0), (9, 0)), ((1.2, 0.4), (-4.4, 6.1)), ((7, 7), (7.5, 6))])
def test_window_stability(x, y):
    r = required_window(Point2(*x), Point2(*y))
    a = pseudometric(checkered_pattern(r), x, y)
    b = pseudometric(checkered_pattern(2 * r), x, y)
    assert abs(a - b) <= 1e-12


def test_geodesic_stationary(window9):
    g = geodesic(window9, (0.6, 0), (0.6, 0))
    assert g.distance == 0 and g.path.combinatorial_length == 0


def test_geodesic_single_diagonal(window9):
    g = geodesic(window9, (0.5, 0), (1.5, 1))
    assert g.distance == pytest.approx(SQ2, abs=1e-12)
    assert g.path.combinatorial_length == 1


def test_geodesic_to_6_3(window18):
    g = geodesic(window18, (0.2, 0), (6.3, 3))
    assert g.distance == pytest.approx(2 + 2 * SQ2, abs=1e-12)
    assert g.path.combinatorial_length == 3
    kinds = [cf.classify_network_part(s, window18).kind for s in g.path.segments]
    assert sorted(k.value for k in kinds) == sorted("→↗↗")
    assert g.stitch_count == 4


def test_geodesic_tie_break_is_lexicographic(window9):
    # two symmetric diagonal routes reach I_(0,3); the lower-left one wins
    g = geodesic(window9, StitchIndex.checkered(0, 0), StitchIndex.checkered(0, 3))
    assert [j.key for j in g.path.junctions] == [(-1.5, 1.5)]


def test_path_invariants(window18):
    rng = np.random.default_rng(5)
    for _ in range(30):
        x, y = rng.uniform(-4, 4, 2), rng.uniform(-4, 4, 2)
        g = geodesic(window18, tuple(x), tuple(y))
        assert abs(g.distance - pseudometric(window18, tuple(x), tuple(y))) <= 1e-12
        assert g.distance == pytest.approx(math.fsum(s.length for s in g.path.segments))
        for s, nxt, j in zip(g.path.segments, g.path.segments[1:], g.path.junctions):
            seg = window18.stitch(j).segment
            assert point_segment_distance(s.end, seg) < 1e-9
            assert point_segment_distance(nxt.start, seg) < 1e-9


def test_upper_bound_by_direct_hop(window18):
    rng = np.random.default_rng(6)
    for _ in range(50):
        x, y = rng.uniform(-4, 4, 2), rng.uniform(-4, 4, 2)
        assert pseudometric(window18, tuple(x), tuple(y)) <= np.hypot(*(x - y)) + 1e-12


@pytest.mark.slow
def test_network_path_property_radius_15():
    p = checkered_pattern(15)
    idx = [s.index for s in p]
    bad = []
    for t in idx:
        for s, seq in stitch_geodesics_to(p, t, idx).items():
            for a, b in zip(seq, seq[1:]):
                if (abs(b.j1 - a.j1), abs(b.j2 - a.j2)) not in NETWORK_OFFSETS:
                    bad.append((s, t.key))
    assert not bad


def test_checkered_metric_matches_graph(metric):
    p = checkered_pattern(36)
    rng = np.random.default_rng(11)
    for _ in range(60):
        x, y = rng.uniform(-8, 8, 2), rng.uniform(-8, 8, 2)
        assert metric.distance(x, y) == pytest.approx(pseudometric(p, tuple(x), tuple(y)), abs=1e-9)


def test_checkered_metric_stitches(metric):
    p = checkered_pattern(21)
    for k in p.restrict(9):
        for j in (ORIGIN, StitchIndex.checkered(1.5, -1.5)):
            assert metric.stitch_distance(j, k.index) == pytest.approx(stitch_distance(p, j, k.index), abs=1e-9)


def test_checkered_metric_vectorized(metric):
    rng = np.random.default_rng(2)
    xs, ys = rng.uniform(-30, 30, (40, 2)), rng.uniform(-30, 30, (40, 2))
    many = metric.distance_many(xs, ys)
    for i in range(40):
        assert many[i] == pytest.approx(metric.distance(xs[i], ys[i]), abs=1e-12)


small = st.tuples(st.floats(-5, 5, allow_nan=False), st.floats(-5, 5, allow_nan=False))


@settings(max_examples=40, deadline=None)
@given(small, small, small)
def test_axioms_small(x, y, z):
    p = checkered_pattern(22)
    dxy, dyx = pseudometric(p, x, y), pseudometric(p, y, x)
    assert abs(dxy - dyx) <= 1e-9
    assert pseudometric(p, x, z) <= dxy + pseudometric(p, y, z) + 1e-9
    assert pseudometric(p, x, x) == 0.0
    assert dxy <= math.dist(x, y) + 1e-12
