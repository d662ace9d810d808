"""Seeded instance generators.

All randomness goes through :class:`random.Random` (Mersenne Twister
MT19937) seeded with the integer seed given by the caller, so identical
inputs produce identical instances on every platform.
"""
from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List

from .configurations import Configuration, Version, validate
from .geometry import Color, Point, PointSet, segment

MAX_ATTEMPTS = 10_000


class GenKind(enum.Enum):
    RANDOM = "random"
    CONVEX = "convex"
    NEAR_CONVEX = "nearconvex"


@dataclass(frozen=True)
class GenSpec:
    kind: GenKind
    n_points: int
    seed: int = 0
    box: int = 1000
    t: int = 0  # interior points, NEAR_CONVEX only

    def __post_init__(self):
        object.__setattr__(self, "kind", GenKind(self.kind))


class GenerationError(RuntimeError):
    pass


def _collinear_with_any(g: dict, x, y) -> bool:
    items = list(g.values())
    for i in range(len(items)):
        ax, ay = items[i]
        if (ax, ay) == (x, y):
            return True
        for j in range(i + 1, len(items)):
            bx, by = items[j]
            if (bx - ax) * (y - ay) == (by - ay) * (x - ax):
                return True
    return False


def _parabola(rng: random.Random, n: int, box: int) -> List[Point]:
    if box + 1 < n:
        raise GenerationError(f"box {box} cannot host {n} distinct parabola abscissae")
    xs = sorted(rng.sample(range(box + 1), n))
    return [Point(i, x, x * x) for i, x in enumerate(xs)]


def convex_ids(spec: GenSpec) -> List[int]:
    """Ids of the convex-position part of a generated point set, in hull order."""
    if spec.kind is GenKind.RANDOM:
        raise ValueError("random point sets have no designated convex part")
    return list(range(spec.n_points - spec.t))


def gen_points(spec: GenSpec) -> PointSet:
    """Generate a general-position point set.

    Convex points lie on the parabola y = x^2 with distinct integer abscissae
    in [0, box] and get ids 0..m-1 in hull order.  Near-convex instances add
    ``t`` interior points (ids m..n-1), each a rational convex combination of
    three hull vertices with small positive weights.
    """
    if spec.n_points < 2:
        raise ValueError("need at least 2 points")
    rng = random.Random(spec.seed)
    if spec.kind is GenKind.RANDOM:
        g = {}
        attempts = 0
        while len(g) < spec.n_points:
            attempts += 1
            if attempts > MAX_ATTEMPTS:
                raise GenerationError(f"box {spec.box} too small for {spec.n_points} points")
            x, y = rng.randint(0, spec.box), rng.randint(0, spec.box)
            if not _collinear_with_any(g, x, y):
                g[len(g)] = (x, y)
        return PointSet(Point(i, x, y) for i, (x, y) in g.items())

    t = spec.t if spec.kind is GenKind.NEAR_CONVEX else 0
    if t and not t < spec.n_points - 2:
        raise ValueError("need t < n_points - 2")
    hull = _parabola(rng, spec.n_points - t, spec.box)
    pts = list(hull)
    attempts = 0
    while len(pts) < spec.n_points:
        attempts += 1
        if attempts > MAX_ATTEMPTS:
            raise GenerationError("could not place interior points in general position")
        a, b, c = rng.sample(hull, 3)
        w = [rng.randint(1, 9) for _ in range(3)]
        s = sum(w)
        x = Fraction(w[0] * a.x + w[1] * b.x + w[2] * c.x, s)
        y = Fraction(w[0] * a.y + w[1] * b.y + w[2] * c.y, s)
        cand = PointSet(pts + [Point(len(pts), x, y)])
        if cand.general_position:
            pts.append(Point(len(pts), x, y))
    out = PointSet(pts)
    if not out.general_position:
        raise GenerationError("parabola points not in general position")
    return out


def gen_configuration(pts: PointSet, version, seed: int = 0, n_edges: int = None,
                      max_degree: int = 3) -> Configuration:
    """Random configuration of the requested version on ``pts``.

    For RB, uncolored points get a fresh balanced random coloring.  For G,
    ``n_edges`` segments (default: number of points) are drawn with repetition
    allowed, subject to every degree staying at most ``max_degree``.
    """
    version = Version(version)
    rng = random.Random(seed)
    ids = list(pts)
    if version is Version.MM:
        if len(ids) % 2:
            raise ValueError("a perfect matching needs an even number of points")
        rng.shuffle(ids)
        edges = [segment(ids[i], ids[i + 1]) for i in range(0, len(ids), 2)]
    elif version is Version.RB:
        if len(ids) % 2:
            raise ValueError("a red-blue matching needs an even number of points")
        if all(p.color is not None for p in pts.values()):
            reds = [i for i in ids if pts[i].color is Color.RED]
            blues = [i for i in ids if pts[i].color is Color.BLUE]
        else:
            rng.shuffle(ids)
            half = len(ids) // 2
            reds, blues = sorted(ids[:half]), sorted(ids[half:])
            pts = pts.recolored({**{i: Color.RED for i in reds}, **{i: Color.BLUE for i in blues}})
        rng.shuffle(blues)
        edges = [segment(r, b) for r, b in zip(reds, blues)]
    elif version is Version.TSP:
        if len(ids) < 3:
            raise ValueError("a tour needs at least 3 points")
        rng.shuffle(ids)
        edges = [segment(ids[i], ids[(i + 1) % len(ids)]) for i in range(len(ids))]
    else:
        if len(ids) < 2:
            raise ValueError("need at least 2 points")
        target = len(ids) if n_edges is None else n_edges
        deg = dict.fromkeys(ids, 0)
        edges = []
        attempts = 0
        while len(edges) < target:
            attempts += 1
            if attempts > MAX_ATTEMPTS:
                raise GenerationError("degree bound too tight for the requested edge count")
            a, b = rng.sample(ids, 2)
            if deg[a] < max_degree and deg[b] < max_degree:
                deg[a] += 1
                deg[b] += 1
                edges.append(segment(a, b))
    c = Configuration(pts, tuple(edges), version)
    bad = validate(c)
    if bad:
        raise GenerationError("; ".join(bad))
    return c


def gen_max_crossing_matching(n: int, seed: int = 0, box: int = None) -> Configuration:
    """2n parabola points matched along long diagonals; all C(n, 2) pairs cross."""
    if n < 2:
        raise ValueError("need n >= 2")
    pts = gen_points(GenSpec(GenKind.CONVEX, 2 * n, seed, box if box is not None else 100 * n))
    # ids are in hull order, so i and i + n are antipodal
    edges = [segment(i, i + n) for i in range(n)]
    return Configuration(pts, tuple(edges), Version.MM)
