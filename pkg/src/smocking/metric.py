"""Smocked distances by shortest-path search.

Every stitch is a graph node; the weight between two nodes is the Euclidean
distance between their point sets, so a shortest path through ``k``
intermediate nodes is exactly a ``d_k`` term and the graph distance is the
minimum over all of them. Query points that are not on a stitch become
extra nodes (degenerate segments).

:class:`CheckeredMetric` answers the same queries for the infinite pattern H
using a translation-invariant distance table, which is what makes sweeps at
coordinates in the thousands feasible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence, Union

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra as _sparse_dijkstra

from .geom import (
    DirectedSegment,
    Point2,
    as_point,
    point_segment_distance_many,
    segment_segment_distance_many,
    segment_segment_nearest,
)
from .pattern import (
    HALF,
    PERIOD,
    Orientation,
    Pattern,
    PatternError,
    StitchIndex,
    checkered_stitch_at,
)

TIE_TOL = 1e-9
DENSE_LIMIT = 4000

Node = Union[StitchIndex, Point2]


class WindowError(ValueError):
    """The pattern window is too small for the requested query."""


@dataclass(frozen=True)
class Path:
    """Directed segments joined inside stitches.

    ``junctions[i]`` is the stitch holding the end of ``segments[i]`` and the
    start of ``segments[i + 1]``. ``source``/``target`` are the endpoints as
    given (a stitch index or a plane point).
    """

    segments: tuple[DirectedSegment, ...]
    junctions: tuple[StitchIndex, ...]
    source: Node | None = None
    target: Node | None = None

    @property
    def total_length(self) -> float:
        return math.fsum(s.length for s in self.segments)

    @property
    def combinatorial_length(self) -> int:
        return len(self.segments)

    @property
    def nodes(self) -> tuple[Node, ...]:
        if not self.segments:
            return (self.source,) if self.source is not None else ()
        return (self.source, *self.junctions, self.target)


@dataclass(frozen=True)
class GeodesicResult:
    path: Path
    distance: float
    stitch_count: int


def _node_segment(node: Node) -> np.ndarray:
    if isinstance(node, Point2):
        return np.array([[node.x, node.y], [node.x, node.y]])
    raise TypeError(node)


class StitchGraph:
    """Complete weighted graph over stitches plus up to two point nodes."""

    def __init__(self, pattern: Pattern, endpoints: Sequence[Point2] = ()):
        if len(endpoints) > 2:
            raise ValueError("at most two endpoint nodes")
        self.pattern = pattern
        self.labels: list[Node] = [s.index for s in pattern.stitches] + [as_point(p) for p in endpoints]
        extra = [_node_segment(as_point(p)) for p in endpoints]
        segs = pattern.segments
        self.segs = np.concatenate([segs, np.array(extra).reshape(-1, 2, 2)]) if extra else segs
        self.n = len(self.labels)
        self._order = None

    def __len__(self):
        return self.n

    def node_of(self, label: Node) -> int:
        if isinstance(label, StitchIndex):
            return self.pattern.position(label)
        p = as_point(label)
        for i in range(len(self.pattern), self.n):
            if self.labels[i] == p:
                return i
        raise KeyError(label)

    def row(self, u: int) -> np.ndarray:
        if self.n <= DENSE_LIMIT:
            return self.weights[u]
        return segment_segment_distance_many(self.segs[u][None], self.segs)

    @cached_property
    def weights(self) -> np.ndarray:
        w = segment_segment_distance_many(self.segs[:, None], self.segs[None, :])
        w = np.minimum(w, w.T)
        np.fill_diagonal(w, 0.0)
        return w

    @property
    def n_edges(self) -> int:
        return self.n * (self.n - 1) // 2

    def witness(self, u: int, v: int):
        """Nearest-point pair realising the weight of edge ``u -> v``."""
        a = DirectedSegment(Point2(*self.segs[u, 0]), Point2(*self.segs[u, 1]))
        b = DirectedSegment(Point2(*self.segs[v, 0]), Point2(*self.segs[v, 1]))
        return segment_segment_nearest(a, b)

    @property
    def lex_rank(self) -> np.ndarray:
        """Rank of each node in lexicographic label order (points last)."""
        if self._order is None:
            keys = [(0, *lab.key) if isinstance(lab, StitchIndex) else (1, lab.x, lab.y)
                    for lab in self.labels]
            order = sorted(range(self.n), key=lambda i: keys[i])
            rank = np.empty(self.n, dtype=int)
            rank[order] = np.arange(self.n)
            self._order = rank
        return self._order

    def shortest(self, source: int, target: int | None = None):
        """Label-setting search from ``source``.

        Returns ``(dist, hops)``; among paths whose lengths agree to
        ``TIE_TOL`` the one with fewer hops wins.
        """
        dist = np.full(self.n, np.inf)
        hops = np.full(self.n, np.iinfo(np.int64).max, dtype=np.int64)
        done = np.zeros(self.n, dtype=bool)
        dist[source] = 0.0
        hops[source] = 0
        for _ in range(self.n):
            u = int(np.argmin(np.where(done, np.inf, dist)))
            if done[u] or not np.isfinite(dist[u]):
                break
            done[u] = True
            if u == target:
                break
            nd = dist[u] + self.row(u)
            nh = hops[u] + 1
            better = ~done & ((nd < dist - TIE_TOL) | ((nd <= dist + TIE_TOL) & (nh < hops)))
            dist[better] = nd[better]
            hops[better] = nh
        return dist, hops


def build_stitch_graph(pattern: Pattern, endpoints: Sequence = ()) -> StitchGraph:
    return StitchGraph(pattern, [as_point(p) for p in endpoints])


def required_window(x, y, max_stitch_length: float = 1.0) -> float:
    """Index-window radius that contains every stitch a geodesic from x to y can use."""
    x, y = as_point(x), as_point(y)
    near = min(max(abs(x.x), abs(x.y)), max(abs(y.x), abs(y.y)))
    return near + x.dist(y) + max_stitch_length + 3.0


def _project(pattern: Pattern, p) -> Node:
    """Smocking map: a point on a stitch is that stitch."""
    if isinstance(p, StitchIndex):
        pattern.position(p)
        return p
    p = as_point(p)
    j = pattern.locate(p)
    return j if j is not None else p


def _check_window(pattern: Pattern, x: Node, y: Node):
    if not pattern.checkered:
        return
    px = as_point(x.key) if isinstance(x, StitchIndex) else x
    py = as_point(y.key) if isinstance(y, StitchIndex) else y
    need = required_window(px, py, pattern.max_stitch_length)
    if pattern.window_radius + 1e-12 < need:
        raise WindowError(f"pattern window {pattern.window_radius:g} too small; "
                          f"required radius is {need:g}")


def _query_graph(pattern: Pattern, x: Node, y: Node):
    if pattern.checkered:
        px = as_point(x.key) if isinstance(x, StitchIndex) else x
        py = as_point(y.key) if isinstance(y, StitchIndex) else y
        need = required_window(px, py, pattern.max_stitch_length)
        if need < pattern.window_radius:
            pattern = pattern.restrict(need)
    points = [p for p in (x, y) if isinstance(p, Point2)]
    if len(points) == 2 and points[0] == points[1]:
        points = points[:1]
    graph = StitchGraph(pattern, points)
    return graph, graph.node_of(x), graph.node_of(y)


def stitch_distance(pattern: Pattern, j, k) -> float:
    """Smocked distance between the stitches ``I_j`` and ``I_k`` of ``pattern``."""
    j = pattern.stitch(j).index
    k = pattern.stitch(k).index
    if j.key == k.key:
        return 0.0
    graph = _graph_for(pattern)
    s, t = pattern.position(j), pattern.position(k)
    dist, _ = graph.shortest(s, t)
    return float(dist[t])


def stitch_distances_from(pattern: Pattern, j) -> dict[tuple[float, float], float]:
    """Single-source distances from ``I_j`` to every stitch of ``pattern``."""
    graph = _graph_for(pattern)
    dist, _ = graph.shortest(pattern.position(j))
    return {s.index.key: float(d) for s, d in zip(pattern.stitches, dist)}


_GRAPHS: dict[int, StitchGraph] = {}


def _graph_for(pattern: Pattern) -> StitchGraph:
    g = _GRAPHS.get(id(pattern))
    if g is None or g.pattern is not pattern:
        g = StitchGraph(pattern)
        if len(_GRAPHS) > 8:
            _GRAPHS.clear()
        _GRAPHS[id(pattern)] = g
    return g


def pseudometric(pattern: Pattern, x, y) -> float:
    """Smocked pseudodistance between two plane points (or stitch indices)."""
    x, y = _project(pattern, x), _project(pattern, y)
    _check_window(pattern, x, y)
    if x == y or (isinstance(x, StitchIndex) and isinstance(y, StitchIndex) and x.key == y.key):
        return 0.0
    graph, s, t = _query_graph(pattern, x, y)
    dist, _ = graph.shortest(s, t)
    return float(dist[t])


def _reconstruct(graph: StitchGraph, s: int, t: int, dt=None, ht=None) -> list[int]:
    """Fewest-hop shortest node sequence, lexicographically smallest on ties.

    ``dt``/``ht`` are distances and hop counts to ``t`` when already known.
    """
    if dt is None:
        dt, ht = graph.shortest(t)
    total, hops = dt[s], int(ht[s])
    rank = graph.lex_rank
    seq = [s]
    acc, cur = 0.0, s
    for h in range(hops):
        w = graph.row(cur)
        ok = (acc + w + dt <= total + TIE_TOL) & (ht == hops - h - 1)
        ok[cur] = False
        cand = np.flatnonzero(ok)
        nxt = int(cand[np.argmin(rank[cand])])
        acc += w[nxt]
        seq.append(nxt)
        cur = nxt
    return seq


def geodesic(pattern: Pattern, x, y) -> GeodesicResult:
    """Witness path for :func:`pseudometric`.

    Among equal-length paths (to ``TIE_TOL``) the one with the fewest hops is
    returned, then the one whose stitch sequence is lexicographically smallest.
    """
    x, y = _project(pattern, x), _project(pattern, y)
    _check_window(pattern, x, y)
    same = x == y or (isinstance(x, StitchIndex) and isinstance(y, StitchIndex) and x.key == y.key)
    if same:
        return GeodesicResult(Path((), (), x, y), 0.0, 1 if isinstance(x, StitchIndex) else 0)
    graph, s, t = _query_graph(pattern, x, y)
    seq = _reconstruct(graph, s, t)
    segments = []
    for u, v in zip(seq, seq[1:]):
        p1, p2, _ = graph.witness(u, v)
        segments.append(DirectedSegment(p1, p2))
    junctions = tuple(graph.labels[i] for i in seq[1:-1])
    path = Path(tuple(segments), junctions, x, y)
    visited = sum(isinstance(graph.labels[i], StitchIndex) for i in seq)
    return GeodesicResult(path, path.total_length, visited)


# ---------------------------------------------------------------------------
# infinite checkered pattern

_C_MAX = math.sqrt(16 - 8 * math.sqrt(2)) / 3 + 1e-9  # max of the norm on the unit circle


def _norm(v: np.ndarray) -> np.ndarray:
    a = np.abs(v[..., 0])
    b = np.abs(v[..., 1])
    return math.sqrt(2) / 3 * (a + b) + (2 - math.sqrt(2)) / 3 * np.abs(a - b)


def _box_indices(cx: float, cy: float, r: float) -> tuple[np.ndarray, np.ndarray]:
    """Centres and horizontal flags of all stitches of H with centre in a box."""
    out, flags = [], []
    for off, horiz in ((0.0, True), (HALF, False)):
        a = np.arange(math.ceil((cx - r - off) / PERIOD), math.floor((cx + r - off) / PERIOD) + 1)
        b = np.arange(math.ceil((cy - r - off) / PERIOD), math.floor((cy + r - off) / PERIOD) + 1)
        ga, gb = np.meshgrid(a * PERIOD + off, b * PERIOD + off, indexing="ij")
        c = np.column_stack([ga.ravel(), gb.ravel()])
        out.append(c)
        flags.append(np.full(len(c), horiz))
    return np.concatenate(out), np.concatenate(flags)


def _unit_segments(centers: np.ndarray, horiz: np.ndarray) -> np.ndarray:
    d = np.where(horiz[:, None], [0.5, 0.0], [0.0, 0.5])
    return np.stack([centers - d, centers + d], axis=1)


class CheckeredMetric:
    """Exact smocked distances on the infinite checkered pattern H.

    Stitch-to-stitch distances come from one single-source search out of
    ``I_0``; the pattern's self-isometries (translations, the swap of
    coordinates followed by a half-period shift, and the two axis
    reflections) carry every pair to that source. The search runs on the
    quadrant ``j1, j2 >= 0`` (folding a path into the quadrant never lengthens
    it) and only on hops between neighbouring stitches: diagonal offsets
    ``(+-1.5, +-1.5)`` and axial offsets ``(+-3, 0)``, ``(0, +-3)`` within a
    class. Any longer hop is dominated by a chain of those, which the tests
    confirm against the complete graph.

    Point queries minimise over first and last stitches near each endpoint.
    The candidate sets are pruned with the lower bound ``F(k - j) <= d(I_j, I_k)``,
    which is checked against every table entry when the table is built.
    """

    def __init__(self, extent: float = 60.0):
        self._m = 0
        self._th = self._tv = None
        self._ensure(extent)

    @property
    def extent(self) -> float:
        """Largest coordinate offset covered by the table."""
        return PERIOD * (self._m - 1)

    def _ensure(self, extent: float):
        need = int(math.ceil(extent / PERIOD)) + 2
        if need <= self._m:
            return
        self._build(max(need, int(self._m * 1.5)))

    def _build(self, m: int):
        # nodes: H(a, b) at (3a, 3b), 0 <= a, b <= m; V(a, b) at (3a+1.5, 3b+1.5), 0 <= a, b < m
        nh = (m + 1) ** 2
        ah, bh = np.divmod(np.arange(nh), m + 1)
        av, bv = np.divmod(np.arange(m * m), m)
        centers = np.concatenate([np.column_stack([ah, bh]) * PERIOD,
                                  np.column_stack([av, bv]) * PERIOD + HALF])
        horiz = np.concatenate([np.ones(nh, bool), np.zeros(m * m, bool)])

        def hid(a, b):
            return a * (m + 1) + b

        def vid(a, b):
            return nh + a * m + b

        def weight(c0, h0, c1, h1):
            segs = _unit_segments(np.array([c0, c1], float), np.array([h0, h1]))
            return float(segment_segment_distance_many(segs[0], segs[1]))

        rows, cols, w = [], [], []

        def add(r, c, wt):
            rows.append(r.astype(np.int32))
            cols.append(c.astype(np.int32))
            w.append(np.full(len(r), wt))

        # same-class axial neighbours; edge weights depend only on the offset
        for da, db in ((1, 0), (0, 1)):
            ok = (ah + da <= m) & (bh + db <= m)
            add(hid(ah[ok], bh[ok]), hid(ah[ok] + da, bh[ok] + db),
                weight((0, 0), True, (PERIOD * da, PERIOD * db), True))
            ok = (av + da < m) & (bv + db < m)
            add(vid(av[ok], bv[ok]), vid(av[ok] + da, bv[ok] + db),
                weight((0, 0), False, (PERIOD * da, PERIOD * db), False))
        # diagonal neighbours at offsets (+-1.5, +-1.5)
        for da in (-1, 0):
            for db in (-1, 0):
                a, b = ah + da, bh + db
                ok = (a >= 0) & (a < m) & (b >= 0) & (b < m)
                add(hid(ah[ok], bh[ok]), vid(a[ok], b[ok]),
                    weight((0, 0), True, (PERIOD * da + HALF, PERIOD * db + HALF), False))
        rows = np.concatenate(rows)
        cols = np.concatenate(cols)
        n = len(centers)
        graph = coo_matrix((np.concatenate(w), (rows, cols)), shape=(n, n)).tocsr()
        dist = _sparse_dijkstra(graph, directed=False, indices=0)

        th = dist[:nh].reshape(m + 1, m + 1)
        tv = dist[nh:].reshape(m, m)
        self._m = m
        self._th, self._tv = th, tv
        low = _norm(centers) - dist
        if low.max() > 1e-9:
            i = int(np.argmax(low))
            raise RuntimeError(f"distance table violates the norm lower bound at {centers[i]}")

    def _lookup(self, delta: np.ndarray, same: np.ndarray) -> np.ndarray:
        d = np.abs(delta)
        out = np.empty(len(d))
        if same.any():
            ij = np.rint(d[same] / PERIOD).astype(int)
            out[same] = self._th[ij[:, 0], ij[:, 1]]
        if (~same).any():
            ij = np.rint((d[~same] - HALF) / PERIOD).astype(int)
            out[~same] = self._tv[ij[:, 0], ij[:, 1]]
        return out

    def stitch_distance_many(self, a: np.ndarray, a_horiz: np.ndarray,
                             b: np.ndarray, b_horiz: np.ndarray) -> np.ndarray:
        """Pairwise-broadcast distances between stitch centre arrays ``(n, 2)``."""
        a = np.asarray(a, float)
        b = np.asarray(b, float)
        a_h = np.asarray(a_horiz, bool)
        b_h = np.asarray(b_horiz, bool)
        delta = b - a
        delta = np.where(a_h[..., None], delta, delta[..., ::-1])
        shape = delta.shape[:-1]
        delta = delta.reshape(-1, 2)
        same = np.broadcast_to(a_h == b_h, shape).reshape(-1)
        self._ensure(float(np.abs(delta).max(initial=0.0)) + PERIOD)
        return self._lookup(delta, same).reshape(shape)

    def stitch_distance(self, j, k) -> float:
        j = StitchIndex.checkered(*tuple(j)[:2])
        k = StitchIndex.checkered(*tuple(k)[:2])
        return float(self.stitch_distance_many(np.array([j.key]), np.array([j.horizontal]),
                                               np.array([k.key]), np.array([k.horizontal]))[0])

    def _near(self, p: np.ndarray, r: float):
        centers, horiz = _box_indices(p[0], p[1], r)
        segs = _unit_segments(centers, horiz)
        gap = point_segment_distance_many(p, segs)
        keep = np.hypot(*(centers - p).T) <= r + 0.5
        return centers[keep], horiz[keep], gap[keep]

    def distance(self, x, y) -> float:
        """Pseudodistance between plane points of the infinite pattern."""
        xv = np.array(tuple(as_point(x)), float)
        yv = np.array(tuple(as_point(y)), float)
        direct = float(np.hypot(*(xv - yv)))
        if direct == 0.0:
            return 0.0
        f_xy = float(_norm(yv - xv))

        # seed the upper bound with the nearest stitches on each side
        cx, hx, ex = self._near(xv, 2.5)
        cy, hy, ey = self._near(yv, 2.5)
        ia, ib = int(np.argmin(ex)), int(np.argmin(ey))
        best = min(direct, ex[ia] + ey[ib] + float(
            self.stitch_distance_many(cx[ia:ia + 1], hx[ia:ia + 1], cy[ib:ib + 1], hy[ib:ib + 1])[0]))

        r = (best - f_xy + 1.0) / (1.0 - _C_MAX) + 1e-9
        cx, hx, ex = self._near(xv, r)
        cy, hy, ey = self._near(yv, r)
        keep_x = ex + _norm(yv - cx) - 0.5 <= best + TIE_TOL
        keep_y = ey + _norm(cy - xv) - 0.5 <= best + TIE_TOL
        cx, hx, ex = cx[keep_x], hx[keep_x], ex[keep_x]
        cy, hy, ey = cy[keep_y], hy[keep_y], ey[keep_y]
        if len(cx) and len(cy):
            t = self.stitch_distance_many(cx[:, None], hx[:, None], cy[None, :], hy[None, :])
            best = min(best, float((ex[:, None] + t + ey[None, :]).min()))
        return best

    def distance_many(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        return np.array([self.distance(x, y) for x, y in zip(xs, ys)])


__all__ = [
    "CheckeredMetric",
    "GeodesicResult",
    "Path",
    "StitchGraph",
    "WindowError",
    "build_stitch_graph",
    "geodesic",
    "pseudometric",
    "required_window",
    "stitch_distance",
    "stitch_distances_from",
]
