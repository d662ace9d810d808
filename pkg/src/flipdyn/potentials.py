"""Crossing and line potentials, line classification and flip drops."""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Optional, Tuple

import numpy as np

from .configurations import Configuration, Flip, crossings
from .geometry import Line, PointSet, convex_hull, in_convex_position, line, line_crosses_segment, orient


class LineSetKind(enum.Enum):
    FULL = "full"
    NEAR_CONVEX = "nearconvex"


@dataclass(frozen=True)
class LineSet:
    """Lines through point pairs, canonical and sorted.

    For the near-convex kind, ``l1`` holds the lines with at least one
    endpoint outside the convex subset and ``l2`` the lines through
    hull-consecutive points of the convex subset.
    """
    lines: Tuple[Line, ...]
    kind: LineSetKind = LineSetKind.FULL
    convex_subset: Optional[FrozenSet[int]] = None
    l1: Tuple[Line, ...] = ()
    l2: Tuple[Line, ...] = ()

    def __len__(self):
        return len(self.lines)

    def __iter__(self):
        return iter(self.lines)


@dataclass(frozen=True)
class PotentialReport:
    phi_x: int
    phi_l_total: int
    per_line: Dict[Line, int]


class LineClass(enum.Enum):
    DROPPING = "dropping"
    CRITICAL = "critical"
    STABLE = "stable"


def phi_x(c: Configuration) -> int:
    """Number of crossing pairs of segments."""
    return len(crossings(c))


def phi_line(l: Line, c: Configuration) -> int:
    """Number of segments of ``c`` crossed by the line ``l``."""
    p, q = l
    pts = c.points
    n = 0
    for a, b in c.edges:
        if orient(pts, p, q, a) * orient(pts, p, q, b) < 0:
            n += 1
    return n


def build_line_set(pts: PointSet, kind=LineSetKind.FULL, convex_subset: Optional[Iterable[int]] = None) -> LineSet:
    kind = LineSetKind(kind)
    if kind is LineSetKind.FULL:
        return LineSet(tuple(itertools.combinations(sorted(pts), 2)), kind)
    if convex_subset is None:
        raise ValueError("near-convex line set needs an explicit convex subset")
    hull_part = frozenset(convex_subset)
    if not hull_part <= set(pts):
        raise ValueError("convex subset references unknown points")
    if len(hull_part) < 3 or not in_convex_position(hull_part, pts):
        raise ValueError("designated subset is not in convex position")
    outside = set(pts) - hull_part
    l1 = sorted({line(a, b) for a in outside for b in pts if a != b})
    hull = convex_hull(hull_part, pts)
    l2 = sorted({line(hull[i], hull[(i + 1) % len(hull)]) for i in range(len(hull))})
    return LineSet(tuple(l1 + l2), kind, hull_part, tuple(l1), tuple(l2))


def _line_rows(L: LineSet, pts: PointSet) -> np.ndarray:
    """Orientation of every point w.r.t. every line of ``L``; shape (|L|, |P|)."""
    idx = pts.index
    lp = np.fromiter((idx[p] for p, _ in L.lines), np.intp, len(L.lines))
    lq = np.fromiter((idx[q] for _, q in L.lines), np.intp, len(L.lines))
    return pts.sides[lp, lq]


def _crossed(rows: np.ndarray, segs, pts: PointSet) -> np.ndarray:
    idx = pts.index
    a = np.fromiter((idx[s[0]] for s in segs), np.intp, len(segs))
    b = np.fromiter((idx[s[1]] for s in segs), np.intp, len(segs))
    return rows[:, a] * rows[:, b] < 0


def phi_L(c: Configuration, L: LineSet, with_phi_x: bool = True) -> PotentialReport:
    """Line potential of ``c`` summed over ``L`` (plus the crossing count)."""
    px = phi_x(c) if with_phi_x else -1
    if not L.lines or not c.edges:
        return PotentialReport(px, 0, dict.fromkeys(L.lines, 0))
    counts = _crossed(_line_rows(L, c.points), c.edges, c.points).sum(axis=1)
    per_line = dict(zip(L.lines, counts.tolist()))
    return PotentialReport(px, int(counts.sum()), per_line)


def line_delta(f: Flip, l: Line, pts: PointSet) -> int:
    """Drop of the line potential of ``l`` caused by ``f``.

    Computed from the four flip segments only, so it is the same for every
    host configuration.
    """
    before = sum(line_crosses_segment(l, s, pts) for s in f.removed)
    after = sum(line_crosses_segment(l, s, pts) for s in f.added)
    return before - after


def _sides(l: Line, s, pts):
    p, q = l
    return orient(pts, p, q, s[0]), orient(pts, p, q, s[1])


def classify_line(f: Flip, l: Line, pts: PointSet) -> LineClass:
    """Dropping / critical / stable classification of ``l`` w.r.t. ``f``.

    Diagnostic only: these are sufficient conditions, and some lines
    classified stable still lose one crossing (e.g. the supporting line of a
    removed segment).  Use :func:`line_delta` for the actual drop.
    """
    a = _sides(l, f.added[0], pts)
    b = _sides(l, f.added[1], pts)
    if (min(a) > 0 and max(b) < 0) or (max(a) < 0 and min(b) > 0):
        return LineClass.DROPPING
    on_line = sum(1 for v in a + b if v == 0)
    weakly_apart = (min(a) >= 0 and max(b) <= 0) or (max(a) <= 0 and min(b) >= 0)
    if on_line == 1 and weakly_apart:
        return LineClass.CRITICAL
    return LineClass.STABLE


def flip_drop(f: Flip, L: LineSet, pts: PointSet) -> int:
    """Total line-potential drop of ``f`` over ``L``; the sum of :func:`line_delta`."""
    if not L.lines:
        return 0
    rows = _line_rows(L, pts)
    return int(_crossed(rows, f.removed, pts).sum() - _crossed(rows, f.added, pts).sum())
