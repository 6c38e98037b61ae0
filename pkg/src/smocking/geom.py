"""Planar primitives: points, directed segments and nearest-point queries.

Scalar functions work on :class:`Point2` / :class:`DirectedSegment` values.
The ``*_many`` variants are vectorised over numpy arrays of segments and are
what the graph builders use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

TOL = 1e-9


@dataclass(frozen=True, order=True)
class Point2:
    x: float
    y: float

    def __post_init__(self):
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite coordinates: ({self.x}, {self.y})")

    def __iter__(self):
        yield self.x
        yield self.y

    def __sub__(self, other: Point2) -> Point2:
        return Point2(self.x - other.x, self.y - other.y)

    def __add__(self, other: Point2) -> Point2:
        return Point2(self.x + other.x, self.y + other.y)

    def scale(self, a: float) -> Point2:
        return Point2(a * self.x, a * self.y)

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def dist(self, other: Point2) -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def isclose(self, other: Point2, tol: float = TOL) -> bool:
        return abs(self.x - other.x) <= tol and abs(self.y - other.y) <= tol


def as_point(p) -> Point2:
    if isinstance(p, Point2):
        return p
    x, y = p
    return Point2(float(x), float(y))


@dataclass(frozen=True)
class DirectedSegment:
    start: Point2
    end: Point2

    @property
    def length(self) -> float:
        return self.start.dist(self.end)

    @property
    def is_degenerate(self) -> bool:
        return self.start == self.end

    def at(self, t: float) -> Point2:
        return Point2(
            self.start.x + t * (self.end.x - self.start.x),
            self.start.y + t * (self.end.y - self.start.y),
        )

    def reversed(self) -> DirectedSegment:
        return DirectedSegment(self.end, self.start)


def segment(x0, y0, x1, y1) -> DirectedSegment:
    return DirectedSegment(Point2(float(x0), float(y0)), Point2(float(x1), float(y1)))


class Nearest(NamedTuple):
    p1: Point2
    p2: Point2
    length: float


def _project(p: Point2, s: DirectedSegment) -> float:
    """Parameter in [0, 1] of the point of ``s`` nearest to ``p``."""
    dx = s.end.x - s.start.x
    dy = s.end.y - s.start.y
    den = dx * dx + dy * dy
    if den == 0.0:
        return 0.0
    t = ((p.x - s.start.x) * dx + (p.y - s.start.y) * dy) / den
    return min(1.0, max(0.0, t))


def nearest_point(p: Point2, s: DirectedSegment) -> Point2:
    return s.at(_project(p, s))


def point_segment_distance(p: Point2, s: DirectedSegment) -> float:
    """Euclidean distance from ``p`` to the closed segment ``s``.

    The minimising point is available from :func:`nearest_point`.
    """
    return p.dist(nearest_point(p, s))


def _cross(ax, ay, bx, by):
    return ax * by - ay * bx


def _intersection(s1: DirectedSegment, s2: DirectedSegment):
    """Smallest parameter pair (t1, t2) at which the segments meet, or None."""
    d1x, d1y = s1.end.x - s1.start.x, s1.end.y - s1.start.y
    d2x, d2y = s2.end.x - s2.start.x, s2.end.y - s2.start.y
    wx, wy = s2.start.x - s1.start.x, s2.start.y - s1.start.y
    den = _cross(d1x, d1y, d2x, d2y)
    if den != 0.0:
        t1 = _cross(wx, wy, d2x, d2y) / den
        t2 = _cross(wx, wy, d1x, d1y) / den
        if -1e-15 <= t1 <= 1 + 1e-15 and -1e-15 <= t2 <= 1 + 1e-15:
            return min(1.0, max(0.0, t1)), min(1.0, max(0.0, t2))
        return None
    # parallel (or degenerate): only a collinear overlap can touch
    if _cross(wx, wy, d1x, d1y) != 0.0 or _cross(wx, wy, d2x, d2y) != 0.0:
        return None
    hits = []
    for q in (s2.start, s2.end):
        if point_segment_distance(q, s1) == 0.0:
            hits.append(_project(q, s1))
    if point_segment_distance(s1.start, s2) == 0.0:
        hits.append(0.0)
    if not hits:
        return None
    t1 = min(hits)
    return t1, _project(s1.at(t1), s2)


def segment_segment_nearest(s1: DirectedSegment, s2: DirectedSegment) -> Nearest:
    """Closest pair of points between two closed segments.

    Ties are broken by the smallest parameter along ``s1`` and then along
    ``s2``, so parallel overlapping configurations resolve deterministically.
    """
    hit = _intersection(s1, s2)
    if hit is not None:
        p = s1.at(hit[0])
        return Nearest(p, p, 0.0)

    # disjoint segments: the minimum is attained at an endpoint of one of them
    candidates = []
    for t1 in (0.0, 1.0):
        p1 = s1.at(t1)
        t2 = _project(p1, s2)
        candidates.append((p1.dist(s2.at(t2)), t1, t2))
    for t2 in (0.0, 1.0):
        p2 = s2.at(t2)
        t1 = _project(p2, s1)
        candidates.append((s1.at(t1).dist(p2), t1, t2))

    best = min(c[0] for c in candidates)
    tied = [c for c in candidates if c[0] <= best + 1e-12]
    _, t1, t2 = min(tied, key=lambda c: (c[1], c[2]))
    if len(tied) > 1 and s1.length > 0 and s2.length > 0:
        # parallel segments: the tie can sit at an interior parameter of s1
        # (e.g. the foot of s2.start); recompute the partner for that t1
        t2 = _project(s1.at(t1), s2)
    p1, p2 = s1.at(t1), s2.at(t2)
    return Nearest(p1, p2, best)


# ---------------------------------------------------------------------------
# vectorised helpers; segments are arrays of shape (..., 2, 2) = [start, end]


def point_segment_distance_many(points: np.ndarray, segs: np.ndarray) -> np.ndarray:
    """Broadcasted distance from points ``(..., 2)`` to segments ``(..., 2, 2)``."""
    points = np.asarray(points, dtype=float)
    segs = np.asarray(segs, dtype=float)
    a = segs[..., 0, :]
    d = segs[..., 1, :] - a
    w = points - a
    den = np.einsum("...i,...i->...", d, d)
    num = np.einsum("...i,...i->...", w, d)
    with np.errstate(invalid="ignore", divide="ignore"):
        t = np.where(den > 0, num / np.where(den > 0, den, 1.0), 0.0)
    t = np.clip(t, 0.0, 1.0)
    q = a + t[..., None] * d
    return np.hypot(points[..., 0] - q[..., 0], points[..., 1] - q[..., 1])


def segment_segment_distance_many(s1: np.ndarray, s2: np.ndarray) -> np.ndarray:
    """Broadcasted minimum distance between segment arrays ``(..., 2, 2)``.

    Exact for non-crossing segments (minimum over the four endpoint-to-segment
    distances); crossing pairs are detected and reported as 0.
    """
    s1 = np.asarray(s1, dtype=float)
    s2 = np.asarray(s2, dtype=float)
    d = np.minimum.reduce([
        point_segment_distance_many(s1[..., 0, :], s2),
        point_segment_distance_many(s1[..., 1, :], s2),
        point_segment_distance_many(s2[..., 0, :], s1),
        point_segment_distance_many(s2[..., 1, :], s1),
    ])

    def orient(a, b, c):
        return np.sign(_cross(b[..., 0] - a[..., 0], b[..., 1] - a[..., 1],
                              c[..., 0] - a[..., 0], c[..., 1] - a[..., 1]))

    a, b = s1[..., 0, :], s1[..., 1, :]
    c, e = s2[..., 0, :], s2[..., 1, :]
    crossing = ((orient(a, b, c) * orient(a, b, e) < 0)
                & (orient(c, e, a) * orient(c, e, b) < 0))
    return np.where(crossing, 0.0, d)
