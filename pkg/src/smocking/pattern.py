"""Smocking patterns: the checkered pattern H, file-defined patterns and
their derived constants (separation, depth, maximal stitch length).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .geom import (
    TOL,
    DirectedSegment,
    Point2,
    as_point,
    point_segment_distance_many,
    segment,
    segment_segment_distance_many,
)

PERIOD = 3.0
HALF = 1.5


class PatternError(ValueError):
    pass


class Orientation(enum.Enum):
    HORIZONTAL = "H"
    VERTICAL = "V"


def _on_lattice(v: float, offset: float = 0.0) -> bool:
    q = (v - offset) / PERIOD
    return abs(q - round(q)) * PERIOD <= TOL


@dataclass(frozen=True, order=True)
class StitchIndex:
    """A stitch label ``(j1, j2)`` with its orientation.

    Use :meth:`checkered` for indices of pattern H, where the orientation is
    implied by the lattice the point sits on.
    """

    j1: float
    j2: float
    kind: Orientation = field(compare=False, default=Orientation.HORIZONTAL)

    @classmethod
    def checkered(cls, j1: float, j2: float) -> StitchIndex:
        j1, j2 = float(j1), float(j2)
        if _on_lattice(j1) and _on_lattice(j2):
            return cls(_snap(j1), _snap(j2), Orientation.HORIZONTAL)
        if _on_lattice(j1, HALF) and _on_lattice(j2, HALF):
            return cls(_snap(j1), _snap(j2), Orientation.VERTICAL)
        raise PatternError(f"({j1}, {j2}) is not an index of the checkered pattern")

    @property
    def horizontal(self) -> bool:
        return self.kind is Orientation.HORIZONTAL

    @property
    def key(self) -> tuple[float, float]:
        return (self.j1, self.j2)

    def __iter__(self):
        yield self.j1
        yield self.j2

    def __str__(self):
        return f"{self.kind.value}({self.j1:g},{self.j2:g})"


def _snap(v: float) -> float:
    """Round to the nearest half-integer; lattice values are exact there."""
    return round(v * 2) / 2 + 0.0


ORIGIN = StitchIndex(0.0, 0.0, Orientation.HORIZONTAL)


@dataclass(frozen=True)
class Stitch:
    index: StitchIndex
    segment: DirectedSegment

    @classmethod
    def unit(cls, index: StitchIndex) -> Stitch:
        j1, j2 = index.j1, index.j2
        if index.horizontal:
            return cls(index, segment(j1 - 0.5, j2, j1 + 0.5, j2))
        return cls(index, segment(j1, j2 - 0.5, j1, j2 + 0.5))

    @property
    def length(self) -> float:
        return self.segment.length


class Pattern:
    """A finite, immutable collection of pairwise disjoint stitches.

    ``checkered`` marks windows of pattern H; some constants then use the
    pattern's translation symmetry instead of a generic computation.
    """

    def __init__(self, stitches: Iterable[Stitch], window_radius: float | None = None,
                 checkered: bool = False):
        self.stitches: tuple[Stitch, ...] = tuple(stitches)
        self.checkered = checkered
        if window_radius is None:
            window_radius = max((max(abs(s.index.j1), abs(s.index.j2)) for s in self.stitches),
                                default=0.0)
        self.window_radius = float(window_radius)
        self._pos = {s.index.key: i for i, s in enumerate(self.stitches)}
        if len(self._pos) != len(self.stitches):
            raise PatternError("stitches not disjoint: duplicate index")

    def __len__(self):
        return len(self.stitches)

    def __iter__(self):
        return iter(self.stitches)

    def __contains__(self, index) -> bool:
        return tuple(index)[:2] in self._pos

    def __repr__(self):
        tag = "checkered" if self.checkered else "custom"
        return f"Pattern({tag}, {len(self)} stitches, radius={self.window_radius:g})"

    def position(self, index) -> int:
        try:
            return self._pos[tuple(index)[:2]]
        except KeyError:
            raise PatternError(f"stitch {tuple(index)[:2]} not in pattern") from None

    def stitch(self, index) -> Stitch:
        return self.stitches[self.position(index)]

    @cached_property
    def segments(self) -> np.ndarray:
        """Array of shape (n, 2, 2) of stitch endpoints."""
        if not self.stitches:
            return np.zeros((0, 2, 2))
        return np.array([[tuple(s.segment.start), tuple(s.segment.end)] for s in self.stitches])

    @cached_property
    def centers(self) -> np.ndarray:
        return np.array([s.index.key for s in self.stitches], dtype=float).reshape(-1, 2)

    @cached_property
    def separation(self) -> float:
        return separation_factor(self)

    @cached_property
    def max_stitch_length(self) -> float:
        return max((s.length for s in self.stitches), default=0.0)

    @cached_property
    def depth(self) -> float:
        if self.checkered:
            # periodic: a radius-6 window covers the fundamental domain with margin
            return smocking_depth(checkered_pattern(6.0), 0.01)
        return smocking_depth(self, 0.01)

    def locate(self, p) -> StitchIndex | None:
        """Index of the stitch containing ``p`` (within ``TOL``), if any."""
        if not self.stitches:
            return None
        d = point_segment_distance_many(np.asarray(tuple(as_point(p))), self.segments)
        i = int(np.argmin(d))
        return self.stitches[i].index if d[i] <= TOL else None

    def restrict(self, radius: float) -> Pattern:
        """Sub-pattern of stitches whose index lies in the given window."""
        keep = [s for s in self.stitches if max(abs(s.index.j1), abs(s.index.j2)) <= radius + TOL]
        return Pattern(keep, min(radius, self.window_radius), self.checkered)


def checkered_indices(window_radius: float) -> list[StitchIndex]:
    """Indices of pattern H with ``max(|j1|, |j2|) <= window_radius``."""
    if window_radius < 0:
        raise PatternError("window_radius must be >= 0")
    out = []
    m = int(math.floor(window_radius / PERIOD + 1e-12))
    for a in range(-m, m + 1):
        for b in range(-m, m + 1):
            out.append(StitchIndex(PERIOD * a + 0.0, PERIOD * b + 0.0, Orientation.HORIZONTAL))
    m = int(math.floor((window_radius - HALF) / PERIOD + 1e-12)) if window_radius >= HALF else -1
    for a in range(-m - 1, m + 1):
        for b in range(-m - 1, m + 1):
            out.append(StitchIndex(PERIOD * a + HALF, PERIOD * b + HALF, Orientation.VERTICAL))
    return sorted(out)


def checkered_pattern(window_radius: float) -> Pattern:
    """Window of the checkered pattern H.

    Horizontal unit stitches sit on 3Z x 3Z, vertical ones on
    (3Z + 1.5) x (3Z + 1.5); the window is taken on indices, not geometry.
    """
    stitches = [Stitch.unit(j) for j in checkered_indices(window_radius)]
    return Pattern(stitches, window_radius, checkered=True)


def checkered_stitch_at(p) -> StitchIndex | None:
    """Stitch of the infinite pattern H containing ``p``, if any."""
    x, y = as_point(p)
    j1, j2 = PERIOD * round(x / PERIOD), PERIOD * round(y / PERIOD)
    if abs(y - j2) <= TOL and abs(x - j1) <= 0.5 + TOL:
        return StitchIndex(_snap(j1), _snap(j2), Orientation.HORIZONTAL)
    j1 = PERIOD * round((x - HALF) / PERIOD) + HALF
    j2 = PERIOD * round((y - HALF) / PERIOD) + HALF
    if abs(x - j1) <= TOL and abs(y - j2) <= 0.5 + TOL:
        return StitchIndex(_snap(j1), _snap(j2), Orientation.VERTICAL)
    return None


def separation_factor(pattern: Pattern) -> float:
    """Minimum Euclidean distance between two distinct stitches."""
    n = len(pattern)
    if n < 2:
        raise PatternError("separation undefined: fewer than 2 stitches")
    segs = pattern.segments
    best = math.inf
    # row blocks keep the pairwise matrix small for large windows
    for lo in range(0, n, 512):
        block = segs[lo:lo + 512]
        d = segment_segment_distance_many(block[:, None], segs[None, :])
        rows = np.arange(lo, lo + len(block))
        d[np.arange(len(block)), rows] = np.inf
        best = min(best, float(d.min()))
    return best


def smocking_depth(pattern: Pattern, probe_grid_step: float,
                   domain: tuple[float, float, float, float] | None = None,
                   points: Sequence | None = None) -> float:
    """Largest distance from a probe point to the nearest stitch.

    Probes a grid of spacing ``probe_grid_step`` over ``domain``
    (``xmin, xmax, ymin, ymax``), by default the fundamental domain
    ``[0, 3]^2`` for pattern H and the stitches' bounding box otherwise.
    Explicit ``points`` override the grid.
    """
    if probe_grid_step <= 0:
        raise PatternError("probe_grid_step must be > 0")
    if not len(pattern):
        raise PatternError("depth undefined for an empty pattern")
    if points is not None:
        probes = np.array([tuple(as_point(p)) for p in points], dtype=float)
    else:
        if domain is None:
            if pattern.checkered:
                domain = (0.0, PERIOD, 0.0, PERIOD)
            else:
                s = pattern.segments
                domain = (s[..., 0].min(), s[..., 0].max(), s[..., 1].min(), s[..., 1].max())
        x0, x1, y0, y1 = domain
        nx = max(1, int(round((x1 - x0) / probe_grid_step)))
        ny = max(1, int(round((y1 - y0) / probe_grid_step)))
        gx, gy = np.meshgrid(np.linspace(x0, x1, nx + 1), np.linspace(y0, y1, ny + 1))
        probes = np.column_stack([gx.ravel(), gy.ravel()])
    segs = pattern.segments
    best = 0.0
    for lo in range(0, len(probes), 4096):
        d = point_segment_distance_many(probes[lo:lo + 4096, None, :], segs[None])
        best = max(best, float(d.min(axis=1).max()))
    return best


def parse_pattern_file(text: str) -> Pattern:
    """Parse the line format ``H <j1> <j2>`` / ``V <j1> <j2>``.

    ``#`` starts a comment line and blank lines are skipped. Every stitch is a
    unit segment centred at ``(j1, j2)``.
    """
    stitches = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3 or parts[0].upper() not in ("H", "V"):
            raise PatternError(f"line {lineno}: expected 'H|V <j1> <j2>', got {raw!r}")
        try:
            j1, j2 = float(parts[1]), float(parts[2])
        except ValueError:
            raise PatternError(f"line {lineno}: malformed number in {raw!r}") from None
        if not (math.isfinite(j1) and math.isfinite(j2)):
            raise PatternError(f"line {lineno}: non-finite coordinate")
        kind = Orientation(parts[0].upper())
        stitches.append(Stitch.unit(StitchIndex(j1, j2, kind)))

    keys = [s.index.key for s in stitches]
    if len(set(keys)) != len(keys):
        raise PatternError("stitches not disjoint")
    pattern = Pattern(stitches)
    if len(pattern) >= 2 and separation_factor(pattern) <= 0:
        raise PatternError("stitches not disjoint")
    return pattern


def load_pattern(path) -> Pattern:
    with open(path, encoding="utf-8") as fh:
        return parse_pattern_file(fh.read())
