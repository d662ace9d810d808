"""Constructive reductions between flip versions and flip-sequence transfer.

Each reduction replaces points by clones within L-infinity distance epsilon
of the original.  For the doubling reductions a clone is offset perpendicular
to its incident segment, and one clone of each pair also gets a small
tangential offset whose size relative to epsilon shrinks as epsilon is
halved, so clone pairs do not keep a fixed direction (which could otherwise
make three points collinear for every epsilon).  Multigraph clones sit on
their own segment instead.

Constructions and transferred sequences are checked exactly after the fact;
on any failure epsilon is halved and everything is rebuilt.
"""
from __future__ import annotations

import enum
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, NamedTuple, Sequence, Tuple

from .configurations import (Configuration, Flip, FlipError, Version, apply_flip, crossings,
                             validate)
from .geometry import Color, Point, PointSet, Segment, segment, segments_cross

MAX_HALVINGS = 64


class ReductionKind(enum.Enum):
    G_TO_MM = "GtoMM"
    MM_TO_RB = "MMtoRB"
    RB_TO_TSP = "RBtoTSP"


class ReductionError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class Reduction:
    kind: ReductionKind
    source: Configuration
    target: Configuration
    point_map: Dict[int, Tuple[int, ...]]
    epsilon: Fraction
    origin: Dict[int, int]                      # target id -> source id
    copies: Dict[Segment, Tuple[Segment, ...]]  # source segment -> target segments
    connectors: Tuple[Segment, ...] = ()
    extra_crossings: Tuple[Tuple[Segment, Segment], ...] = field(default=())

    @property
    def expansion(self) -> int:
        return 1 if self.kind is ReductionKind.G_TO_MM else 2


# -- epsilon ------------------------------------------------------------------

def _linf_point_segment(p: Point, a: Point, b: Point) -> Fraction:
    """Exact L-infinity distance from ``p`` to the closed segment ``ab``."""
    dx, dy = b.x - a.x, b.y - a.y
    fx, fy = a.x - p.x, a.y - p.y
    cands = {Fraction(0), Fraction(1)}
    # max(|fx + t dx|, |fy + t dy|) is convex piecewise linear in t; its
    # breakpoints are where the two terms have equal magnitude
    for sgn in (1, -1):
        den = dx - sgn * dy
        if den:
            t = (sgn * fy - fx) / den
            if 0 <= t <= 1:
                cands.add(t)
    return min(max(abs(fx + t * dx), abs(fy + t * dy)) for t in cands)


def safe_epsilon(pts: PointSet, edges: Sequence[Segment]) -> Fraction:
    """Clearance / 2**10, the clearance being the smallest L-infinity distance
    between two points or between a point and a segment not incident to it."""
    ids = list(pts)
    best = None
    for i, a in enumerate(ids):
        for b in ids[i + 1:]:
            d = max(abs(pts[a].x - pts[b].x), abs(pts[a].y - pts[b].y))
            best = d if best is None else min(best, d)
    for a, b in set(edges):
        for p in ids:
            if p != a and p != b:
                best = min(best, _linf_point_segment(pts[p], pts[a], pts[b]))
    if best is None or best == 0:
        return Fraction(1)
    return best / 1024


def _unit(dx: Fraction, dy: Fraction) -> Tuple[Fraction, Fraction]:
    m = max(abs(dx), abs(dy))
    return dx / m, dy / m


def _frame(pts: PointSet, a: int, b: int):
    """(perpendicular, direction a->b), both with L-infinity norm 1."""
    dx, dy = pts[b].x - pts[a].x, pts[b].y - pts[a].y
    return _unit(-dy, dx), _unit(dx, dy)


def _at(p: Point, new_id: int, ox, oy, color=None) -> Point:
    return Point(new_id, p.x + ox, p.y + oy, color)


# -- constructions ------------------------------------------------------------

def _build_g_to_mm(c: Configuration, eps: Fraction, eps0: Fraction):
    # A clone of v for segment vw sits at v + h (w - v) / D, D the longest
    # segment: the clones at v are a homothetic copy of v's neighbours, so no
    # three are collinear, and in the limit clone segments are sub-segments of
    # the source segments (segments sharing an endpoint stay disjoint).
    # Copy sigma of a repeated segment is shifted by t = sigma * rho / sigma_max
    # across it and pulled back by t^2 / 2 along it: copies are parallel
    # translates whose clones at one endpoint lie on a parabola.
    pts = c.points
    rho = eps / eps0
    deg = c.degrees()
    mult = Counter(c.edges)
    sigma_max = (max(mult.values(), default=1) + 1) // 2
    h = eps / 2
    D = max((max(abs(pts[a].x - pts[b].x), abs(pts[a].y - pts[b].y)) for a, b in mult), default=1)
    next_id = max(pts) + 1
    new_pts, origin, point_map = [], {}, defaultdict(list)
    for i in pts:
        if deg[i] == 1:
            new_pts.append(pts[i])
            origin[i] = i
            point_map[i].append(i)
    copy_no = Counter()
    copies = defaultdict(list)
    for a, b in c.edges:
        m = copy_no[(a, b)]
        copy_no[(a, b)] += 1
        t = (m // 2 + 1) * (1 if m % 2 == 0 else -1) * rho / sigma_max
        along = 1 - t * t / 2
        nx, ny = (pts[a].y - pts[b].y) / D, (pts[b].x - pts[a].x) / D
        ends = []
        for v, w in ((a, b), (b, a)):
            if deg[v] == 1:
                ends.append(v)
                continue
            ux, uy = (pts[w].x - pts[v].x) / D, (pts[w].y - pts[v].y) / D
            new_pts.append(_at(pts[v], next_id, h * (along * ux + t * nx), h * (along * uy + t * ny)))
            origin[next_id] = v
            point_map[v].append(next_id)
            ends.append(next_id)
            next_id += 1
        copies[(a, b)].append(segment(*ends))
    target = Configuration(PointSet(new_pts), tuple(s for ss in copies.values() for s in ss), Version.MM)
    return target, origin, dict(point_map), copies, ()


def _build_mm_to_rb(c: Configuration, eps: Fraction, eps0: Fraction):
    pts = c.points
    rho = eps / eps0
    h = eps / 2
    red = {i: 2 * k for k, i in enumerate(pts)}
    blue = {i: 2 * k + 1 for k, i in enumerate(pts)}
    new_pts, copies = [], {}
    for p, q in c.edges:
        n, up = _frame(pts, p, q)
        _, uq = _frame(pts, q, p)
        # p side shifted by +n for red, q side by -n for red: the two copies
        # of pq are parallel translates by +-h n
        for v, s, u in ((p, 1, up), (q, -1, uq)):
            new_pts.append(_at(pts[v], red[v], s * h * n[0], s * h * n[1], Color.RED))
            new_pts.append(_at(pts[v], blue[v], -s * h * n[0] + h * rho * u[0],
                               -s * h * n[1] + h * rho * u[1], Color.BLUE))
        copies[(p, q)] = (segment(red[p], blue[q]), segment(blue[p], red[q]))
    origin = {**{v: k for k, v in red.items()}, **{v: k for k, v in blue.items()}}
    point_map = {i: (red[i], blue[i]) for i in pts}
    target = Configuration(PointSet(new_pts), tuple(s for ss in copies.values() for s in ss), Version.RB)
    return target, origin, point_map, copies, ()


def _build_rb_to_tsp(c: Configuration, eps: Fraction, eps0: Fraction):
    pts = c.points
    rho = eps / eps0
    h = eps / 2
    partner = {}
    for a, b in c.edges:
        r, b_ = (a, b) if pts[a].color is Color.RED else (b, a)
        partner[r] = b_
    reds = sorted(partner)
    plus = {r: 2 * k for k, r in enumerate(reds)}
    minus = {r: 2 * k + 1 for k, r in enumerate(reds)}
    blue_ids = {b: 2 * len(reds) + k for k, b in enumerate(sorted(partner.values()))}
    new_pts, copies = [], {}
    for r in reds:
        b = partner[r]
        n, u = _frame(pts, r, b)
        new_pts.append(_at(pts[r], plus[r], h * n[0], h * n[1]))
        new_pts.append(_at(pts[r], minus[r], -h * n[0] + h * rho * u[0], -h * n[1] + h * rho * u[1]))
        new_pts.append(Point(blue_ids[b], pts[b].x, pts[b].y))
        copies[segment(r, b)] = (segment(plus[r], blue_ids[b]), segment(minus[r], blue_ids[b]))
    connectors = tuple(segment(minus[reds[k]], plus[reds[(k + 1) % len(reds)]]) for k in range(len(reds)))
    origin = {**{v: k for k, v in plus.items()}, **{v: k for k, v in minus.items()},
              **{v: k for k, v in blue_ids.items()}}
    point_map = {**{r: (plus[r], minus[r]) for r in reds}, **{b: (v,) for b, v in blue_ids.items()}}
    edges = tuple(s for ss in copies.values() for s in ss) + connectors
    target = Configuration(PointSet(new_pts), edges, Version.TSP)
    return target, origin, point_map, copies, connectors


_BUILDERS = {
    ReductionKind.G_TO_MM: (Version.G, _build_g_to_mm),
    ReductionKind.MM_TO_RB: (Version.MM, _build_mm_to_rb),
    ReductionKind.RB_TO_TSP: (Version.RB, _build_rb_to_tsp),
}


def _positional_copies(c: Configuration, copies) -> List[Segment]:
    """Target segment for each source edge position (multiset order)."""
    used = Counter()
    out = []
    for s in c.edges:
        out.append(copies[s][used[s]])
        used[s] += 1
    return out


def _check_crossings(kind: ReductionKind, source: Configuration, target: Configuration, copies):
    """Compare crossing structure; returns (problem or None, extra crossings)."""
    tp = target.points
    if kind is ReductionKind.G_TO_MM:
        pos = _positional_copies(source, copies)
        for i in range(len(pos)):
            for j in range(i + 1, len(pos)):
                s, t = source.edges[i], source.edges[j]
                if segments_cross(s, t, source.points) != segments_cross(pos[i], pos[j], tp):
                    return f"crossing of copies of {s} and {t} differs from the source", ()
        return None, ()
    found = {tuple(sorted(p)) for p in crossings(target)}
    expected = set()
    for s, t in crossings(source):
        for a in copies[s]:
            for b in copies[t]:
                expected.add(tuple(sorted((a, b))))
    missing = expected - found
    if missing:
        return f"source crossings not reproduced: {sorted(missing)[:3]}", ()
    clone_segs = {x for ss in copies.values() for x in ss}
    extra = found - expected
    if any(a in clone_segs and b in clone_segs for a, b in extra):
        return "spurious crossing between clone segments", ()
    return None, tuple(sorted(extra))


def _construct(kind: ReductionKind, c: Configuration, eps: Fraction = None) -> Reduction:
    version, build = _BUILDERS[kind]
    if c.version is not version:
        raise ValueError(f"{kind.value} needs a {version.value} configuration, got {c.version.value}")
    bad = validate(c)
    if bad:
        raise ValueError(f"invalid source configuration: {bad}")
    eps0 = safe_epsilon(c.points, c.edges)
    eps = eps0 if eps is None else Fraction(eps)
    problem = None
    for _ in range(MAX_HALVINGS):
        target, origin, point_map, copies, connectors = build(c, eps, eps0)
        bad = validate(target)
        if bad:
            problem = "; ".join(bad)
        else:
            problem, extra = _check_crossings(kind, c, target, copies)
        if problem is None:
            return Reduction(kind, c, target, point_map, eps, origin,
                             {s: tuple(v) for s, v in copies.items()}, connectors, extra)
        eps /= 2
    raise ReductionError(f"epsilon refinement failed after {MAX_HALVINGS} halvings: {problem}")


def reduce_g_to_mm(c: Configuration, epsilon: Fraction = None) -> Reduction:
    """Multigraph -> matching: a point of degree d > 1 becomes d nearby clones."""
    return _construct(ReductionKind.G_TO_MM, c, epsilon)


def reduce_mm_to_rb(c: Configuration, epsilon: Fraction = None) -> Reduction:
    """Matching -> red-blue matching on doubled points, each segment doubled."""
    return _construct(ReductionKind.MM_TO_RB, c, epsilon)


def reduce_rb_to_tsp(c: Configuration, epsilon: Fraction = None) -> Reduction:
    """Red-blue matching -> tour r1 b1 r1' r2 b2 r2' ... on 3n points."""
    return _construct(ReductionKind.RB_TO_TSP, c, epsilon)


def reduce(c: Configuration, kind, epsilon: Fraction = None) -> Reduction:
    return _construct(ReductionKind(kind), c, epsilon)


# -- sequence transfer --------------------------------------------------------

def lift(r: Reduction, edges: Sequence[Segment]) -> Configuration:
    """Target configuration for source ``edges`` using the clones of ``r``.

    Defined for MMtoRB and RBtoTSP, where a source matching determines the
    target uniquely (connectors stay fixed for tours).
    """
    tgt = r.target.points
    out = []
    if r.kind is ReductionKind.MM_TO_RB:
        for p, q in edges:
            pr, pb = r.point_map[p]
            qr, qb = r.point_map[q]
            out += [segment(pr, qb), segment(pb, qr)]
    elif r.kind is ReductionKind.RB_TO_TSP:
        src = r.source.points
        for a, b in edges:
            red, blue = (a, b) if src[a].color is Color.RED else (b, a)
            (bt,) = r.point_map[blue]
            out += [segment(clone, bt) for clone in r.point_map[red]]
        out += list(r.connectors)
    else:
        raise ValueError("lift is not unique for GtoMM; use project()")
    return Configuration(tgt, tuple(out), r.target.version)


def project(r: Reduction, c: Configuration) -> Counter:
    """Multiset of source segments obtained by mapping clones back, connectors dropped.

    For the doubling reductions every source segment appears twice.
    """
    conn = Counter(r.connectors)
    out = Counter()
    for s in c.edges:
        if conn[s]:
            conn[s] -= 1
            continue
        out[segment(r.origin[s[0]], r.origin[s[1]])] += 1
    return out


def _orient_flip(f: Flip):
    """Label a source flip as removed (p, q), (u, v) and added (p, u), (q, v)."""
    (p, q), (u, v) = f.removed
    added = set(f.added)
    if segment(p, v) in added:
        u, v = v, u
    return p, q, u, v


def _simulate(r: Reduction, f: Flip, state: dict) -> List[Flip]:
    src = r.source.points
    p, q, u, v = _orient_flip(f)
    if r.kind is ReductionKind.G_TO_MM:
        copies, tp = state["copies"], r.target.points
        s1, s2 = f.removed
        for t1 in copies[s1]:
            hit = [t2 for t2 in copies[s2] if segments_cross(t1, t2, tp)]
            if hit:
                t2 = hit[0]
                break
        else:
            raise FlipError(f"no crossing copies of {s1} and {s2}")
        end = {r.origin[x]: x for x in t1 + t2}
        added = tuple(segment(end[a], end[b]) for a, b in f.added)
        copies[s1].remove(t1)
        copies[s2].remove(t2)
        for (a, b), t in zip(f.added, added):
            copies[segment(a, b)].append(t)
        return [Flip((t1, t2), added)]
    if r.kind is ReductionKind.MM_TO_RB:
        (pr, pb), (qr, qb) = r.point_map[p], r.point_map[q]
        (ur, ub), (vr, vb) = r.point_map[u], r.point_map[v]
        return [Flip(((pr, qb), (ub, vr)), ((pr, ub), (qb, vr))),
                Flip(((pb, qr), (ur, vb)), ((pb, ur), (qr, vb)))]
    # RB -> TSP: removed r_i b_i, r_j b_j; added r_i b_j, r_j b_i
    ri, bi = (p, q) if src[p].color is Color.RED else (q, p)
    rj, bj = (u, v) if src[u].color is Color.RED else (v, u)
    if segment(ri, bj) not in set(f.added):
        raise FlipError(f"source flip {f} is not color-preserving")
    ri_, ri2 = r.point_map[ri]
    rj_, rj2 = r.point_map[rj]
    (bi_,), (bj_,) = r.point_map[bi], r.point_map[bj]
    return [Flip(((ri_, bi_), (rj2, bj_)), ((ri_, bj_), (rj2, bi_))),
            Flip(((ri2, bi_), (rj_, bj_)), ((ri2, bj_), (rj_, bi_)))]


class Transformed(NamedTuple):
    reduction: Reduction
    flips: List[Flip]


def _try_transform(r: Reduction, seq: Sequence[Flip]) -> List[Flip]:
    state = {"copies": {s: list(v) for s, v in r.copies.items()}}
    state["copies"] = defaultdict(list, state["copies"])
    src, tgt = r.source, r.target
    out = []
    for i, f in enumerate(seq, start=1):
        src = apply_flip(src, f)
        sim = _simulate(r, f, state)
        if len(sim) == 2:
            a, b = sim
            if set(a.removed) & set(b.removed) or set(a.added) & set(b.added):
                raise AssertionError(f"step {i}: simulating flips share segments")
        for g in sim:
            try:
                tgt = apply_flip(tgt, g)
            except FlipError as exc:
                raise FlipError(f"step {i}: {exc}") from exc
            bad = validate(tgt)
            if bad:
                raise FlipError(f"step {i}: invalid target state: {bad}")
        if project(r, tgt) != Counter({e: m * r.expansion for e, m in Counter(src.edges).items()}):
            raise FlipError(f"step {i}: target no longer corresponds to the source")
        out.extend(sim)
    if r.kind is not ReductionKind.G_TO_MM and tgt != lift(r, src.edges):
        raise FlipError("final target differs from the lifted final source")
    return out


def transform_sequence(r: Reduction, seq: Sequence[Flip]) -> Transformed:
    """Expand a source flip sequence into a target flip sequence.

    If a simulated flip fails, epsilon is halved, the reduction rebuilt and
    the whole transfer retried.  Returns the (possibly rebuilt) reduction
    with the expanded sequence.
    """
    cur = r.source
    for f in seq:  # the source sequence itself must be valid
        cur = apply_flip(cur, f)
    first_error = None
    for _ in range(MAX_HALVINGS):
        try:
            return Transformed(r, _try_transform(r, seq))
        except FlipError as exc:
            first_error = first_error or str(exc)
            r = _construct(r.kind, r.source, r.epsilon / 2)
    raise ReductionError(f"retry budget exhausted; first failure at {first_error}")
