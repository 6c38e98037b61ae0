import itertools
import math

import numpy as np
import pytest

from smocking.geom import Point2, segment_segment_nearest
from smocking.pattern import (
    Orientation,
    Pattern,
    PatternError,
    Stitch,
    StitchIndex,
    checkered_indices,
    checkered_pattern,
    checkered_stitch_at,
    load_pattern,
    parse_pattern_file,
    separation_factor,
    smocking_depth,
)


def test_radius_zero_single_stitch():
    p = checkered_pattern(0)
    assert len(p) == 1
    s = p.stitches[0].segment
    assert (tuple(s.start), tuple(s.end)) == ((-0.5, 0.0), (0.5, 0.0))


def test_radius_two_has_vertical():
    p = checkered_pattern(2)
    s = p.stitch((1.5, 1.5))
    assert s.index.kind is Orientation.VERTICAL
    assert (tuple(s.segment.start), tuple(s.segment.end)) == ((1.5, 1.0), (1.5, 2.0))


@pytest.mark.parametrize("radius,h,v", [(0, 1, 0), (2, 1, 4), (4, 9, 4), (30, 441, 400)])
def test_window_counts(radius, h, v):
    idx = checkered_indices(radius)
    assert sum(j.horizontal for j in idx) == h
    assert sum(not j.horizontal for j in idx) == v
    # brute-force lattice enumeration
    grid = np.arange(-2 * radius - 3, 2 * radius + 4) * 1.5
    brute = {(a, b) for a in grid for b in grid if max(abs(a), abs(b)) <= radius
             and ((a % 3 == 0 and b % 3 == 0) or (a % 3 == 1.5 and b % 3 == 1.5))}
    assert brute == {j.key for j in idx}


def test_class_invariant():
    for j in checkered_indices(12):
        if j.horizontal:
            assert j.j1 % 3 == 0 and j.j2 % 3 == 0
        else:
            assert j.j1 % 3 == 1.5 and j.j2 % 3 == 1.5
    with pytest.raises(PatternError):
        StitchIndex.checkered(1.5, 0)


def test_separation_checkered():
    assert separation_factor(checkered_pattern(2)) == pytest.approx(math.sqrt(2), abs=1e-12)
    assert separation_factor(checkered_pattern(9)) == pytest.approx(math.sqrt(2), abs=1e-12)


def test_separation_two_horizontals():
    p = parse_pattern_file("H 0 0\nH 3 0\n")
    assert separation_factor(p) == pytest.approx(2.0, abs=1e-12)


def test_separation_single_stitch_errors():
    with pytest.raises(PatternError, match="separation undefined"):
        separation_factor(checkered_pattern(0))


def test_disjointness_pairwise():
    p = checkered_pattern(6)
    segs = [s.segment for s in p]
    for a, b in itertools.combinations(segs, 2):
        assert segment_segment_nearest(a, b).length >= math.sqrt(2) - 1e-12


def test_depth_default_grid():
    assert abs(smocking_depth(checkered_pattern(6), 0.01) - 1.5) <= 0.02


def test_depth_single_probe():
    d = smocking_depth(checkered_pattern(6), 0.01, points=[(0, 1.5)])
    assert d == pytest.approx(1.5, abs=1e-12)


def test_depth_zero_when_tiled():
    p = parse_pattern_file("H 0 0")
    assert smocking_depth(p, 0.05) == 0.0


def test_depth_nested_grids_monotone():
    p = checkered_pattern(6)
    vals = [smocking_depth(p, 3 / 2 ** k) for k in range(1, 8)]
    assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))
    assert vals[-1] <= 1.5 + 1e-12
    assert 1.5 - vals[-1] < 0.02


def test_pattern_depth_and_length():
    p = checkered_pattern(6)
    assert p.depth == pytest.approx(1.5, abs=1e-12)
    assert p.max_stitch_length == 1.0


def test_parse_two_stitches_matches_checkered():
    p = parse_pattern_file("H 0 0\nV 1.5 1.5\n")
    ref = checkered_pattern(2)
    for s in p:
        assert s == ref.stitch(s.index)


def test_parse_duplicate():
    with pytest.raises(PatternError, match="stitches not disjoint"):
        parse_pattern_file("H 0 0\nH 0 0\n")


def test_parse_three_stitches_delta():
    p = parse_pattern_file("# three\nH 0 0\n\nH 3 0\nV 1.5 1.5\n")
    assert len(p) == 3
    assert separation_factor(p) == pytest.approx(math.sqrt(2), abs=1e-12)


def test_parse_overlap_rejected():
    with pytest.raises(PatternError, match="stitches not disjoint"):
        parse_pattern_file("H 0 0\nV 0 0.2\n")


@pytest.mark.parametrize("text,line", [("H 0 0\nQ 1 2\n", 2), ("H 0 zero\n", 1), ("\n\nH 1\n", 3)])
def test_parse_malformed_reports_line(text, line):
    with pytest.raises(PatternError, match=f"line {line}"):
        parse_pattern_file(text)


def test_load_pattern(tmp_path):
    f = tmp_path / "p.txt"
    f.write_text("H 0 0\nV 1.5 1.5\n", encoding="utf-8")
    assert len(load_pattern(f)) == 2


def test_locate_and_analytic_lookup():
    p = checkered_pattern(6)
    for q in [(0.3, 0), (1.5, 1.2), (4.5, -1.9), (0.7, 0), (1, 1)]:
        assert p.locate(q) == checkered_stitch_at(q)
    assert checkered_stitch_at((0.3, 0)) == StitchIndex(0.0, 0.0, Orientation.HORIZONTAL)
    assert checkered_stitch_at((1, 1)) is None


def test_restrict():
    p = checkered_pattern(9)
    assert {s.index for s in p.restrict(4)} == set(checkered_indices(4))


def test_missing_index():
    with pytest.raises(PatternError):
        checkered_pattern(2).stitch((3, 0))


def test_stitch_unit_geometry():
    s = Stitch.unit(StitchIndex(4.5, 1.5, Orientation.VERTICAL))
    assert s.segment.start == Point2(4.5, 1.0) and s.length == 1.0
    assert Pattern([s]).window_radius == 4.5
