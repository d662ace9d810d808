"""Exact planar predicates over rational points.

Coordinates are :class:`fractions.Fraction` values.  Predicates that take a
point set work on an integer grid obtained by scaling every coordinate by the
lcm of all denominators, which leaves every orientation sign unchanged and
keeps the hot loops in plain integer arithmetic.
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Tuple

import numpy as np

Segment = Tuple[int, int]
Line = Tuple[int, int]


class Color(enum.Enum):
    RED = "red"
    BLUE = "blue"


@dataclass(frozen=True)
class Point:
    id: int
    x: Fraction
    y: Fraction
    color: Optional[Color] = None

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "y", Fraction(self.y))
        if self.color is not None and not isinstance(self.color, Color):
            object.__setattr__(self, "color", Color(self.color))


def segment(a: int, b: int) -> Segment:
    """Canonical segment (smaller id first)."""
    if a == b:
        raise ValueError(f"degenerate segment ({a}, {b})")
    return (a, b) if a < b else (b, a)


line = segment


class PointSet(Mapping[int, Point]):
    """Immutable id -> Point mapping with cached exact-arithmetic helpers."""

    def __init__(self, points: Iterable[Point]):
        pts = {}
        for p in points:
            if p.id in pts:
                raise ValueError(f"duplicate point id {p.id}")
            pts[p.id] = p
        self._pts = dict(sorted(pts.items()))

    def __getitem__(self, key: int) -> Point:
        return self._pts[key]

    def __iter__(self) -> Iterator[int]:
        return iter(self._pts)

    def __len__(self) -> int:
        return len(self._pts)

    def __hash__(self):
        return hash(tuple(self._pts.values()))

    def __eq__(self, other):
        if isinstance(other, PointSet):
            return self._pts == other._pts
        return NotImplemented

    def __repr__(self):
        return f"PointSet({list(self._pts.values())!r})"

    @cached_property
    def grid(self) -> dict:
        """Integer coordinates, all points scaled by one positive factor."""
        scale = 1
        for p in self._pts.values():
            scale = math.lcm(scale, p.x.denominator, p.y.denominator)
        return {
            i: (p.x.numerator * (scale // p.x.denominator),
                p.y.numerator * (scale // p.y.denominator))
            for i, p in self._pts.items()
        }

    @cached_property
    def index(self) -> dict:
        """Position of each id in iteration order (rows of :attr:`sides`)."""
        return {i: k for k, i in enumerate(self._pts)}

    @cached_property
    def sides(self) -> np.ndarray:
        """``sides[i, j, k]`` = orientation of points at positions i, j, k (int8).

        Signs are computed exactly; int64 vectorisation is used only when the
        grid coordinates are small enough that no product can overflow.
        """
        g = list(self.grid.values())
        n = len(g)
        if n and max(max(abs(x), abs(y)) for x, y in g) < 2 ** 30:
            xy = np.array(g, dtype=np.int64)
            d = xy[None, :, :] - xy[:, None, :]  # d[i, j] = p_j - p_i
            det = (d[:, :, None, 0] * d[:, None, :, 1]
                   - d[:, :, None, 1] * d[:, None, :, 0])
            return np.sign(det).astype(np.int8)
        out = np.zeros((n, n, n), dtype=np.int8)
        for i, j, k in itertools.combinations(range(n), 3):
            (ax, ay), (bx, by), (cx, cy) = g[i], g[j], g[k]
            o = _sign((bx - ax) * (cy - ay) - (by - ay) * (cx - ax))
            out[i, j, k] = out[j, k, i] = out[k, i, j] = o
            out[j, i, k] = out[i, k, j] = out[k, j, i] = -o
        return out

    @cached_property
    def general_position(self) -> bool:
        n = len(self)
        if len(set(self.grid.values())) < n:
            return False
        if n < 3:
            return True
        s = self.sides
        iu = np.array(list(itertools.combinations(range(n), 3)), dtype=np.intp)
        return bool(np.all(s[iu[:, 0], iu[:, 1], iu[:, 2]] != 0))

    def recolored(self, colors: Mapping[int, Optional[Color]]) -> "PointSet":
        return PointSet(Point(p.id, p.x, p.y, colors.get(p.id, p.color))
                        for p in self._pts.values())


def _sign(v: int) -> int:
    return (v > 0) - (v < 0)


def orientation(a: Point, b: Point, c: Point) -> int:
    """Sign of det(b - a, c - a): +1 counterclockwise, -1 clockwise, 0 collinear."""
    return _sign((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x))


def orient(pts: PointSet, i: int, j: int, k: int) -> int:
    """:func:`orientation` on point ids, evaluated on the integer grid."""
    g = pts.grid
    ax, ay = g[i]
    bx, by = g[j]
    cx, cy = g[k]
    return _sign((bx - ax) * (cy - ay) - (by - ay) * (cx - ax))


def segments_cross(s1: Segment, s2: Segment, pts: PointSet) -> bool:
    """True iff the closed segments meet in exactly one point interior to both.

    Shared endpoints, touching configurations and collinear overlaps all
    return False.
    """
    a, b = s1
    c, d = s2
    if a == c or a == d or b == c or b == d:
        return False
    o1 = orient(pts, a, b, c)
    o2 = orient(pts, a, b, d)
    if o1 * o2 >= 0:
        return False
    o3 = orient(pts, c, d, a)
    o4 = orient(pts, c, d, b)
    return o3 * o4 < 0


def line_crosses_segment(l: Line, s: Segment, pts: PointSet) -> bool:
    """True iff the endpoints of ``s`` lie strictly on opposite sides of ``l``."""
    p, q = l
    return orient(pts, p, q, s[0]) * orient(pts, p, q, s[1]) < 0


def convex_hull(ids: Iterable[int], pts: PointSet) -> list:
    """Strict convex hull vertices in counterclockwise order (monotone chain).

    Points lying on a hull edge are not reported as vertices.
    """
    g = pts.grid
    order = sorted(set(ids), key=lambda i: g[i])
    if len(order) < 3:
        return order

    def chain(seq):
        out = []
        for i in seq:
            while len(out) >= 2 and orient(pts, out[-2], out[-1], i) <= 0:
                out.pop()
            out.append(i)
        return out

    lower = chain(order)
    upper = chain(reversed(order))
    return lower[:-1] + upper[:-1]


def in_convex_position(subset: Iterable[int], pts: PointSet) -> bool:
    ids = list(subset)
    if len(ids) < 3:
        return True
    if len(set(pts.grid[i] for i in ids)) < len(ids):
        return False
    return len(convex_hull(ids, pts)) == len(ids)


def is_general_position(pts: PointSet) -> bool:
    """No two coincident points and no three collinear ones (all triples)."""
    g = pts.grid
    ids = list(pts)
    if len(set(g.values())) < len(ids):
        return False
    for i, j, k in itertools.combinations(ids, 3):
        ax, ay = g[i]
        bx, by = g[j]
        cx, cy = g[k]
        if (bx - ax) * (cy - ay) == (by - ay) * (cx - ax):
            return False
    return True


def replacement_pairs(s1: Segment, s2: Segment, pts: PointSet) -> Sequence[Tuple[Segment, Segment]]:
    """The two ways to re-pair the endpoints of a crossing pair.

    Each pair forms a 4-cycle together with ``s1`` and ``s2``; returned in
    canonical (sorted) order.
    """
    if not segments_cross(s1, s2, pts):
        raise ValueError("not a crossing pair")
    a, b = s1
    c, d = s2
    pairs = [
        tuple(sorted((segment(a, c), segment(b, d)))),
        tuple(sorted((segment(a, d), segment(b, c)))),
    ]
    return sorted(pairs)
