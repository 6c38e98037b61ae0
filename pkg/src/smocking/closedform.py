"""Closed-form objects for the checkered pattern H.

The estimating norm, the explicit stitch-to-stitch distance formula, the
explicit ("awesome") network paths that realise it, network-part
classification and the auxiliary inequalities used to compare those paths
with straight segments.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .geom import TOL, DirectedSegment, Point2, as_point, segment_segment_nearest
from .metric import Path
from .pattern import (
    ORIGIN,
    Pattern,
    PatternError,
    Stitch,
    StitchIndex,
    checkered_stitch_at,
)

SQRT2 = math.sqrt(2.0)
ALPHA = SQRT2 / 3          # weight of |x1| + |x2|
BETA = (2 - SQRT2) / 3     # weight of ||x1| - |x2||
SANDWICH_GAP = 2 * SQRT2 - 2
LIPSCHITZ_BOUND = 2 * SQRT2 / 3
DILATION_BOUND = (2 + SQRT2) / 3
UNIT_CIRCLE_MAX = math.sqrt(16 - 8 * SQRT2) / 3
SMOCKING_DEPTH = 1.5
SMOCKING_LENGTH = 1.0
DEVIATION_BOUND = 2 * SMOCKING_DEPTH + SANDWICH_GAP + 2 * DILATION_BOUND * (SMOCKING_DEPTH + SMOCKING_LENGTH)


def norm_F(v) -> float:
    """The octagonal norm that estimates the smocked distance of H."""
    x1, x2 = as_point(v)
    a, b = abs(x1), abs(x2)
    return ALPHA * (a + b) + BETA * abs(a - b)


def norm_F_many(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    a = np.abs(v[..., 0])
    b = np.abs(v[..., 1])
    return ALPHA * (a + b) + BETA * np.abs(a - b)


def _index(j) -> StitchIndex:
    if isinstance(j, StitchIndex):
        return j
    return StitchIndex.checkered(*tuple(j)[:2])


def d_H_closed_form(j) -> float:
    """Distance from ``I_0`` to ``I_j``; undefined at ``j = 0``."""
    j = _index(j)
    if j.j1 == 0 and j.j2 == 0:
        raise ValueError("closed form is not defined at j = (0, 0)")
    a, b = abs(j.j1), abs(j.j2)
    if j.j1 != 0:
        return ALPHA * (a + b) + BETA * abs(a - b)
    return 2 * SQRT2 + 2 * b / 3 - 2


def depth(j) -> float:
    j = _index(j)
    return (abs(j.j1) + abs(j.j2)) / 3


def max_diagonals(j) -> int:
    """Largest number of diagonals in a monotone network path from ``I_0``."""
    j = _index(j)
    if j.j1 == 0:
        raise ValueError("max_diagonals requires j1 != 0")
    return int(round(2 * min(abs(j.j1), abs(j.j2)) / 3))


def network_path_length(n: int, D: int) -> float:
    """Length of a network path of ``n`` parts, ``D`` of them diagonals."""
    if D < 0 or n < 0 or D > n:
        raise ValueError(f"need 0 <= D <= n, got n={n}, D={D}")
    return D * SQRT2 + 2 * (n - D)


# ---------------------------------------------------------------------------
# pattern isometries


@dataclass(frozen=True)
class Isometry:
    """``p -> swap(p) + shift`` where ``swap`` exchanges the coordinates."""

    swap: bool
    shift: tuple[float, float]

    def __call__(self, p) -> Point2:
        x, y = as_point(p)
        if self.swap:
            x, y = y, x
        return Point2(x + self.shift[0], y + self.shift[1])

    def index(self, k) -> StitchIndex:
        k = _index(k)
        return StitchIndex.checkered(*self(Point2(k.j1, k.j2)))

    def segment(self, s: DirectedSegment) -> DirectedSegment:
        return DirectedSegment(self(s.start), self(s.end))

    @property
    def inverse(self) -> Isometry:
        sx, sy = self.shift
        if self.swap:
            return Isometry(True, (-sy, -sx))
        return Isometry(False, (-sx, -sy))


def isometry_to_origin(j) -> Isometry:
    """Self-isometry of H taking ``I_j`` onto ``I_0``.

    Vertical indices are first reflected across ``y = x``, then everything is
    translated so the image of ``j`` is the origin.
    """
    j = _index(j)
    if j.horizontal:
        return Isometry(False, (-j.j1, -j.j2))
    return Isometry(True, (-j.j2, -j.j1))


def stitch_distance_closed_form(j, k) -> float:
    j, k = _index(j), _index(k)
    if j.key == k.key:
        return 0.0
    return d_H_closed_form(isometry_to_origin(j).index(k))


# ---------------------------------------------------------------------------
# network parts


class PartKind(enum.Enum):
    NE = "↗"
    NW = "↖"
    SE = "↘"
    SW = "↙"
    RIGHT = "→"
    LEFT = "←"
    UP = "↑"
    DOWN = "↓"

    @property
    def offset(self) -> tuple[float, float]:
        return _OFFSETS[self]

    @property
    def is_diagonal(self) -> bool:
        return self in (PartKind.NE, PartKind.NW, PartKind.SE, PartKind.SW)


_OFFSETS = {
    PartKind.NE: (1.5, 1.5), PartKind.NW: (-1.5, 1.5),
    PartKind.SE: (1.5, -1.5), PartKind.SW: (-1.5, -1.5),
    PartKind.RIGHT: (3.0, 0.0), PartKind.LEFT: (-3.0, 0.0),
    PartKind.UP: (0.0, 3.0), PartKind.DOWN: (0.0, -3.0),
}
_BY_OFFSET = {v: k for k, v in _OFFSETS.items()}

_REFLECT_X = {PartKind.NE: PartKind.SE, PartKind.SE: PartKind.NE,
              PartKind.NW: PartKind.SW, PartKind.SW: PartKind.NW,
              PartKind.UP: PartKind.DOWN, PartKind.DOWN: PartKind.UP}
_REFLECT_Y = {PartKind.NE: PartKind.NW, PartKind.NW: PartKind.NE,
              PartKind.SE: PartKind.SW, PartKind.SW: PartKind.SE,
              PartKind.RIGHT: PartKind.LEFT, PartKind.LEFT: PartKind.RIGHT}

QUADRANT_SETS = (
    frozenset({PartKind.UP, PartKind.RIGHT, PartKind.NE}),
    frozenset({PartKind.UP, PartKind.LEFT, PartKind.NW}),
    frozenset({PartKind.DOWN, PartKind.LEFT, PartKind.SW}),
    frozenset({PartKind.DOWN, PartKind.RIGHT, PartKind.SE}),
)


@dataclass(frozen=True)
class NetworkPart:
    kind: PartKind
    target: StitchIndex
    segment: DirectedSegment

    @property
    def source(self) -> StitchIndex:
        dx, dy = self.kind.offset
        return StitchIndex.checkered(self.target.j1 - dx, self.target.j2 - dy)


class NotNetworkPath(ValueError):
    pass


def _stitch_segment(j: StitchIndex, pattern: Pattern | None) -> DirectedSegment:
    if pattern is None:
        return Stitch.unit(j).segment
    return pattern.stitch(j).segment


def network_segment(j, k, pattern: Pattern | None = None) -> DirectedSegment:
    """Shortest directed segment from stitch ``I_j`` to stitch ``I_k``."""
    j, k = _index(j), _index(k)
    p1, p2, _ = segment_segment_nearest(_stitch_segment(j, pattern), _stitch_segment(k, pattern))
    return DirectedSegment(p1, p2)


def classify_network_part(s: DirectedSegment, pattern: Pattern | None = None) -> NetworkPart | None:
    """Identify ``s`` as a network part, or return None.

    Without a pattern, the infinite checkered pattern is used.
    """
    locate = checkered_stitch_at if pattern is None else pattern.locate
    a, b = locate(s.start), locate(s.end)
    if a is None or b is None or a.key == b.key:
        return None
    off = (b.j1 - a.j1, b.j2 - a.j2)
    kind = _BY_OFFSET.get((round(off[0] * 2) / 2 + 0.0, round(off[1] * 2) / 2 + 0.0))
    if kind is None or max(abs(off[0] - kind.offset[0]), abs(off[1] - kind.offset[1])) > TOL:
        return None
    if kind.is_diagonal:
        if a.kind is b.kind:
            return None
    elif kind in (PartKind.RIGHT, PartKind.LEFT):
        if not (a.horizontal and b.horizontal):
            return None
    elif a.horizontal or b.horizontal:
        return None
    ref = network_segment(a, b, pattern)
    if not (s.start.isclose(ref.start) and s.end.isclose(ref.end)):
        return None
    return NetworkPart(kind, b, s)


def monotone_check(p: Path, pattern: Pattern | None = None) -> bool:
    kinds = set()
    for s in p.segments:
        part = classify_network_part(s, pattern)
        if part is None:
            raise NotNetworkPath(f"not a network path: segment {s} is not a network part")
        kinds.add(part.kind)
    return any(kinds <= q for q in QUADRANT_SETS)


# ---------------------------------------------------------------------------
# awesome paths


def awesome_word(j) -> list[PartKind]:
    """Network-part word of the awesome path from ``I_0`` to ``I_j``."""
    j = _index(j)
    j1, j2 = j.j1, j.j2
    if j1 < 0:
        return [_REFLECT_Y.get(k, k) for k in awesome_word((-j1, j2))]
    if j2 < 0:
        return [_REFLECT_X.get(k, k) for k in awesome_word((j1, -j2))]
    if j1 == 0 and j2 == 0:
        return []
    if j1 == 0:
        return [PartKind.NE] + [PartKind.UP] * _count(j2 / 3 - 1) + [PartKind.NW]
    if j1 <= j2:
        return ([PartKind.NE] + [PartKind.UP] * _count((j2 - j1) / 3)
                + [PartKind.NE] * _count(2 * j1 / 3 - 1))
    return [PartKind.RIGHT] * _count((j1 - j2) / 3) + [PartKind.NE] * _count(2 * j2 / 3)


def _count(v: float) -> int:
    n = int(round(v))
    assert abs(n - v) < 1e-9 and n >= 0, v
    return n


def awesome_parts(j, k) -> list[NetworkPart]:
    """Network parts of the awesome path from ``I_j`` to ``I_k``.

    The word is built from ``I_0`` to the image of ``k`` and carried back by
    the inverse of :func:`isometry_to_origin`; each part starts on the stitch
    where the previous one ended.
    """
    j, k = _index(j), _index(k)
    if j.key == k.key:
        return []
    iso = isometry_to_origin(j)
    back = iso.inverse
    cur = ORIGIN
    parts = []
    for kind in awesome_word(iso.index(k)):
        dx, dy = kind.offset
        nxt = StitchIndex.checkered(cur.j1 + dx, cur.j2 + dy)
        seg = back.segment(network_segment(cur, nxt))
        part = classify_network_part(seg)
        assert part is not None, seg
        parts.append(part)
        cur = nxt
    assert parts[-1].target.key == k.key
    return parts


def awesome_path(j, k) -> Path:
    j, k = _index(j), _index(k)
    parts = awesome_parts(j, k)
    segs = tuple(p.segment for p in parts)
    return Path(segs, tuple(p.target for p in parts[:-1]), j, k)


def awesome_length(j, k) -> float:
    j, k = _index(j), _index(k)
    if j.key == k.key:
        return 0.0
    d = isometry_to_origin(j).index(k)
    a, b = abs(d.j1), abs(d.j2)
    if d.j1 != 0:
        return 2 * SQRT2 / 3 * min(a, b) + 2 / 3 * abs(a - b)
    return 2 * SQRT2 + 2 / 3 * b - 2


def euclidean_path_length(j, k) -> float:
    """Length of the straight segment joining the two stitches most closely."""
    return network_segment(j, k).length


def is_network_adjacent(j, k) -> bool:
    """True when a single network part joins ``I_j`` to ``I_k``."""
    j, k = _index(j), _index(k)
    return classify_network_part(network_segment(j, k)) is not None


# ---------------------------------------------------------------------------
# auxiliary inequalities


class Lemma(enum.Enum):
    INEQ1 = "Ineq1"   # vertical targets
    INEQ2 = "Ineq2"   # horizontal targets off the j1 = 0 column
    INEQ3 = "Ineq3"   # the j1 = 0 column


class LemmaCheck(NamedTuple):
    holds: bool
    slack: float


def _lemma_lhs(x: float, y: float) -> float:
    a, b = abs(x), abs(y)
    return (2 * SQRT2 / 3 * min(a, b) + 2 / 3 * abs(a - b)) ** 2


def lemma_sides(name, x: float, y: float) -> tuple[float, float]:
    """(LHS, RHS) of the named inequality; raises on a domain violation."""
    name = Lemma(name)
    if name is Lemma.INEQ1:
        if abs(x) < 1.5 or abs(y) < 1.5:
            raise ValueError("Ineq1 needs |x|, |y| >= 1.5")
        return _lemma_lhs(x, y), (abs(x) - 0.5) ** 2 + (abs(y) - 0.5) ** 2
    if name is Lemma.INEQ2:
        try:
            j = StitchIndex.checkered(x, y)
        except PatternError:
            j = None
        if j is None or not j.horizontal or abs(x) < 3:
            raise ValueError("Ineq2 needs (x, y) in 3Z x 3Z with |x| >= 3")
        return _lemma_lhs(x, y), (abs(x) - 1) ** 2 + y ** 2
    if abs(y) < 3:
        raise ValueError("Ineq3 needs |y| >= 3")
    return 2 * SQRT2 + 2 / 3 * abs(y) - 2, abs(y)


def lemma_inequality(name, x: float, y: float, tol: float = 1e-12) -> LemmaCheck:
    lhs, rhs = lemma_sides(name, x, y)
    slack = rhs - lhs
    return LemmaCheck(slack >= -tol, slack)
