"""Segment configurations for the four flip versions and flip application."""
from __future__ import annotations

import enum
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, List, Tuple

from .geometry import Color, PointSet, Segment, replacement_pairs, segment, segments_cross


class Version(enum.Enum):
    MM = "MM"    # monochromatic perfect matching
    RB = "RB"    # red-blue perfect matching
    TSP = "TSP"  # Hamiltonian cycle
    G = "G"      # multigraph, any multiset of segments


class FlipError(ValueError):
    """A flip could not be applied to a configuration."""


FlipKey = Tuple[Segment, Segment, Segment, Segment]


@dataclass(frozen=True, eq=False)
class Flip:
    """Replace the crossing pair ``removed`` by the non-crossing pair ``added``.

    Two flips are equal when they exchange the same set of four segments.
    """
    removed: Tuple[Segment, Segment]
    added: Tuple[Segment, Segment]

    def __post_init__(self):
        object.__setattr__(self, "removed", tuple(sorted(segment(*s) for s in self.removed)))
        object.__setattr__(self, "added", tuple(sorted(segment(*s) for s in self.added)))

    @property
    def key(self) -> FlipKey:
        return canonical_flip_id(self)

    @property
    def points(self) -> Tuple[int, ...]:
        return tuple(sorted({i for s in self.removed for i in s}))

    def __eq__(self, other):
        if not isinstance(other, Flip):
            return NotImplemented
        return self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"Flip({self.removed} -> {self.added})"


def canonical_flip_id(f: Flip) -> FlipKey:
    """Sorted tuple of the four segments touched by ``f``."""
    return tuple(sorted(f.removed + f.added))


@dataclass(frozen=True)
class Configuration:
    """A multiset of segments over a point set, tagged with its version.

    ``edges`` is kept as a sorted tuple with repetitions so that equal
    multisets compare and hash equal.
    """
    points: PointSet
    edges: Tuple[Segment, ...]
    version: Version = Version.MM
    _hash: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(sorted(segment(*e) for e in self.edges)))
        object.__setattr__(self, "version", Version(self.version))
        object.__setattr__(self, "_hash", hash((self.edges, self.version)))

    def __hash__(self):
        return self._hash

    def multiplicity(self) -> Counter:
        return Counter(self.edges)

    def degrees(self) -> Counter:
        deg = Counter({i: 0 for i in self.points})
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg

    def with_edges(self, edges: Iterable[Segment]) -> "Configuration":
        return Configuration(self.points, tuple(edges), self.version)

    def as_version(self, version: Version) -> "Configuration":
        """Retag, e.g. view a tour or matching as a multigraph."""
        return Configuration(self.points, self.edges, version)


def _cycle_count(edges: Iterable[Segment]) -> int:
    adj = defaultdict(list)
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    seen = set()
    count = 0
    for start in adj:
        if start in seen:
            continue
        count += 1
        stack = [start]
        seen.add(start)
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
    return count


def tour_order(c: Configuration) -> List[int]:
    """Vertex order of a TSP configuration, starting at the smallest id."""
    adj = defaultdict(list)
    for a, b in c.edges:
        adj[a].append(b)
        adj[b].append(a)
    start = min(c.points)
    order = [start]
    prev, cur = start, min(adj[start])
    while cur != start and len(order) <= len(c.points):
        order.append(cur)
        a, b = adj[cur]
        prev, cur = cur, (b if a == prev else a)
    return order


def _version_violations(c: Configuration) -> List[str]:
    out = []
    mult = c.multiplicity()
    deg = c.degrees()
    if c.version in (Version.MM, Version.RB):
        if any(m > 1 for m in mult.values()):
            out.append("repeated segment in a matching")
        bad = sorted(i for i, d in deg.items() if d != 1)
        if bad:
            out.append(f"not a perfect matching: degree != 1 at {bad}")
    if c.version is Version.RB:
        reds = sum(1 for p in c.points.values() if p.color is Color.RED)
        blues = sum(1 for p in c.points.values() if p.color is Color.BLUE)
        if reds + blues != len(c.points):
            out.append("uncolored point in a red-blue instance")
        elif reds != blues:
            out.append(f"unbalanced coloring: {reds} red, {blues} blue")
        for a, b in mult:
            if c.points[a].color is c.points[b].color:
                out.append(f"monochromatic edge {(a, b)}")
    if c.version is Version.TSP:
        if any(m > 1 for m in mult.values()) or any(d != 2 for d in deg.values()) \
                or _cycle_count(c.edges) != 1 or len(c.points) < 3:
            out.append("not a single cycle")
    return out


def validate(c: Configuration) -> List[str]:
    """All violations of the version invariants and general position.

    An empty list means the configuration is valid.
    """
    out = []
    for a, b in c.edges:
        if a not in c.points or b not in c.points:
            out.append(f"segment {(a, b)} references an unknown point")
    if out:
        return out
    if not c.points.general_position:
        out.append("points not in general position")
    if c.version is not Version.RB:
        colored = sorted(i for i, p in c.points.items() if p.color is not None)
        if colored and c.version is not Version.G:
            out.append(f"colored points outside a red-blue instance: {colored}")
    out.extend(_version_violations(c))
    return out


def crossings(c: Configuration) -> List[Tuple[Segment, Segment]]:
    """Crossing pairs over multiset positions, each pair in canonical order.

    A segment of multiplicity m that crosses another segment contributes m
    entries.
    """
    pts = c.points
    edges = c.edges
    out = []
    for i in range(len(edges)):
        s = edges[i]
        for j in range(i + 1, len(edges)):
            if segments_cross(s, edges[j], pts):
                out.append((s, edges[j]))
    return out


def _distinct_crossing_pairs(c: Configuration):
    seen = set()
    for pair in crossings(c):
        if pair not in seen:
            seen.add(pair)
            yield pair


def _apply_unchecked(c: Configuration, f: Flip) -> Configuration:
    mult = c.multiplicity()
    for s in f.removed:
        mult[s] -= 1
    for s in f.added:
        mult[s] += 1
    return c.with_edges(mult.elements())


def applicable_flips(c: Configuration) -> List[Flip]:
    """Every legal flip of ``c``, sorted by canonical key."""
    flips = {}
    for s1, s2 in _distinct_crossing_pairs(c):
        for pair in replacement_pairs(s1, s2, c.points):
            f = Flip((s1, s2), pair)
            if c.version is Version.RB:
                if any(c.points[a].color is c.points[b].color for a, b in pair):
                    continue
            elif c.version is Version.TSP:
                if _cycle_count(_apply_unchecked(c, f).edges) != 1:
                    continue
            flips[f.key] = f
    return [flips[k] for k in sorted(flips)]


def apply_flip(c: Configuration, f: Flip) -> Configuration:
    """Return ``f(c)``; raises :class:`FlipError` naming the failed precondition."""
    mult = c.multiplicity()
    for s in f.removed:
        if mult[s] < 1:
            raise FlipError(f"segment not present: {s}")
    s1, s2 = f.removed
    if not segments_cross(s1, s2, c.points):
        raise FlipError(f"removed segments do not cross: {s1}, {s2}")
    if f.added not in [tuple(p) for p in replacement_pairs(s1, s2, c.points)]:
        raise FlipError(f"added pair {f.added} does not close a 4-cycle with {f.removed}")
    out = _apply_unchecked(c, f)
    bad = _version_violations(out)
    if bad:
        raise FlipError(f"version violation ({c.version.value}): {'; '.join(bad)}")
    return out
