"""Flip-sequence execution, audited records and brute-force oracles."""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence, Set, Tuple

from .configurations import (Configuration, Flip, FlipKey, Version, applicable_flips, apply_flip,
                             canonical_flip_id, validate)
from .potentials import LineSet, build_line_set, flip_drop, phi_L, phi_x

Chooser = Callable[[Configuration, List[Flip]], Flip]


class TerminationError(RuntimeError):
    """A run exceeded the step bound implied by the full line potential."""


class OracleScaleError(ValueError):
    """Instance too large for exhaustive search."""


# -- strategies ---------------------------------------------------------------

@dataclass(frozen=True)
class FirstLex:
    name = "first-lex"

    def chooser(self) -> Chooser:
        return lambda c, flips: flips[0]


@dataclass(frozen=True)
class Random:
    seed: int = 0
    name = "random"

    def chooser(self) -> Chooser:
        rng = random.Random(self.seed)
        return lambda c, flips: flips[rng.randrange(len(flips))]


@dataclass(frozen=True)
class GreedyMaxNewCrossings:
    """Pick the flip leaving the most crossings; ties go to the smallest key."""
    name = "greedy-max-crossings"

    def chooser(self) -> Chooser:
        def pick(c, flips):
            scores = [phi_x(apply_flip(c, f)) for f in flips]
            return flips[scores.index(max(scores))]
        return pick


@dataclass(frozen=True)
class GreedyMinDrop:
    """Pick the flip with the smallest potential drop over ``lines``."""
    lines: Optional[LineSet] = None
    name = "greedy-min-drop"

    def chooser(self) -> Chooser:
        def pick(c, flips):
            lines = self.lines if self.lines is not None else build_line_set(c.points)
            drops = [flip_drop(f, lines, c.points) for f in flips]
            return flips[drops.index(min(drops))]
        return pick


@dataclass(frozen=True)
class Exhaustive:
    """Follow a longest flip sequence (tiny instances only)."""
    name = "exhaustive"

    def chooser(self) -> Chooser:
        memo: Dict = {}

        def pick(c, flips):
            _check_oracle_scale(c)
            best = [1 + _longest(apply_flip(c, f), memo) for f in flips]
            return flips[best.index(max(best))]
        return pick


STRATEGIES = {
    "first-lex": FirstLex,
    "random": Random,
    "greedy-max-crossings": GreedyMaxNewCrossings,
    "greedy-min-drop": GreedyMinDrop,
    "exhaustive": Exhaustive,
}


# -- records ------------------------------------------------------------------

class Step(NamedTuple):
    flip: Flip
    phi_x: int
    phi_l: int
    drop: int


@dataclass
class SequenceRecord:
    initial: Configuration
    line_set: LineSet
    steps: List[Step] = field(default_factory=list)
    distinct_keys: Set[FlipKey] = field(default_factory=set)
    terminated: bool = False
    strategy: str = ""

    @property
    def flips(self) -> List[Flip]:
        return [s.flip for s in self.steps]

    def __len__(self):
        return len(self.steps)

    def replay(self) -> List[Configuration]:
        """All configurations M_0..M_m of the record."""
        states = [self.initial]
        for s in self.steps:
            states.append(apply_flip(states[-1], s.flip))
        return states

    def final(self) -> Configuration:
        return self.replay()[-1]


def certificate_bound(c: Configuration) -> int:
    """Step bound from the full line potential: every flip drops it by >= 2."""
    return phi_L(c, build_line_set(c.points), with_phi_x=False).phi_l_total // 2 + 1


def run(c: Configuration, strategy=FirstLex(), L: Optional[LineSet] = None,
        max_steps: Optional[int] = None) -> SequenceRecord:
    """Flip crossings of ``c`` until none remain, choosing flips per ``strategy``.

    ``L`` is the line set for the recorded potentials (full by default).  An
    explicit ``max_steps`` stops the run early (``terminated`` stays False);
    exceeding the full-potential certificate raises :class:`TerminationError`.
    """
    if validate(c):
        raise ValueError(f"invalid initial configuration: {validate(c)}")
    L = build_line_set(c.points) if L is None else L
    bound = certificate_bound(c)
    rec = SequenceRecord(c, L, strategy=strategy.name)
    choose = strategy.chooser()
    cur = c
    phi_l = phi_L(cur, L, with_phi_x=False).phi_l_total
    while True:
        flips = applicable_flips(cur)
        if not flips:
            rec.terminated = phi_x(cur) == 0
            break
        if len(rec.steps) >= bound:
            raise TerminationError(
                f"termination certificate violated: more than {bound} steps")
        if max_steps is not None and len(rec.steps) >= max_steps:
            break
        f = choose(cur, flips)
        if not any(f.removed == g.removed and f.added == g.added for g in flips):
            raise RuntimeError(f"strategy {strategy.name} chose an inapplicable flip {f}")
        cur = apply_flip(cur, f)
        bad = validate(cur)
        if bad:
            raise RuntimeError(f"flip {f} produced an invalid configuration: {bad}")
        drop = flip_drop(f, L, cur.points)
        phi_l -= drop
        rec.steps.append(Step(f, phi_x(cur), phi_l, drop))
        rec.distinct_keys.add(f.key)
    return rec


def record_from_flips(c: Configuration, flips: Sequence[Flip], L: Optional[LineSet] = None,
                      strategy: str = "replay") -> SequenceRecord:
    """Build an audited record for a given flip sequence by replaying it."""
    L = build_line_set(c.points) if L is None else L
    rec = SequenceRecord(c, L, strategy=strategy)
    cur = c
    for f in flips:
        cur = apply_flip(cur, f)
        rep = phi_L(cur, L)
        rec.steps.append(Step(f, rep.phi_x, rep.phi_l_total, flip_drop(f, L, cur.points)))
        rec.distinct_keys.add(f.key)
    rec.terminated = phi_x(cur) == 0
    return rec


def distinct_count(rec: SequenceRecord) -> int:
    return len(rec.distinct_keys)


# -- audit --------------------------------------------------------------------

@dataclass
class AuditReport:
    ok: bool
    failures: List[str]
    steps: int
    drop_split: Dict[int, Tuple[int, int]]  # k -> (#steps with drop >= k, #steps with drop < k)

    def __str__(self):
        head = "PASS" if self.ok else "FAIL"
        lines = [f"{head}: {self.steps} steps"]
        lines += [f"  {msg}" for msg in self.failures]
        for k, (big, small) in sorted(self.drop_split.items()):
            lines.append(f"  k={k}: {big} steps with drop >= k, {small} with drop < k")
        return "\n".join(lines)


def audit(rec: SequenceRecord, L: Optional[LineSet] = None, thresholds: Sequence[int] = ()) -> AuditReport:
    """Replay ``rec`` and check validity, snapshots and potential drops.

    Every recorded drop must equal both the measured potential difference
    and the configuration-free :func:`flip_drop` of its flip.
    """
    L = rec.line_set if L is None else L
    failures = []
    cur = rec.initial
    bad = validate(cur)
    if bad:
        failures.append(f"step 0: initial configuration invalid: {bad}")
        return AuditReport(False, failures, len(rec.steps), {})
    prev = phi_L(cur, L, with_phi_x=False).phi_l_total
    for i, step in enumerate(rec.steps, start=1):
        try:
            cur = apply_flip(cur, step.flip)
        except ValueError as exc:
            failures.append(f"step {i}: {exc}")
            break
        bad = validate(cur)
        if bad:
            failures.append(f"step {i}: invalid configuration: {bad}")
        rep = phi_L(cur, L)
        if rep.phi_x != step.phi_x:
            failures.append(f"step {i}: phi_x recorded {step.phi_x}, measured {rep.phi_x}")
        if rep.phi_l_total != step.phi_l:
            failures.append(f"step {i}: phi_L recorded {step.phi_l}, measured {rep.phi_l_total}")
        if rep.phi_l_total > prev:
            failures.append(f"step {i}: phi_L increased from {prev} to {rep.phi_l_total}")
        expected = flip_drop(step.flip, L, cur.points)
        if step.drop != expected or prev - rep.phi_l_total != expected:
            failures.append(f"step {i}: drop recorded {step.drop}, measured {prev - rep.phi_l_total}, "
                            f"flip_drop {expected}")
        prev = rep.phi_l_total
    if rec.terminated and phi_x(cur) != 0:
        failures.append("record marked terminated but crossings remain")
    if rec.distinct_keys != {s.flip.key for s in rec.steps}:
        failures.append("distinct-flip ledger does not match the steps")
    split = {k: (sum(s.drop >= k for s in rec.steps), sum(s.drop < k for s in rec.steps))
             for k in thresholds}
    return AuditReport(not failures, failures, len(rec.steps), split)


# -- oracles ------------------------------------------------------------------

ORACLE_MAX_EDGES = 4
ORACLE_MAX_TOUR_POINTS = 6


def _check_oracle_scale(c: Configuration):
    if c.version is Version.TSP:
        if len(c.points) > ORACLE_MAX_TOUR_POINTS:
            raise OracleScaleError(f"oracle scale exceeded: {len(c.points)} tour points "
                                   f"(max {ORACLE_MAX_TOUR_POINTS})")
    elif len(c.edges) > ORACLE_MAX_EDGES:
        raise OracleScaleError(f"oracle scale exceeded: {len(c.edges)} segments (max {ORACLE_MAX_EDGES})")


def _longest(c: Configuration, memo: Dict, depth: int = 0, cap: Optional[int] = None) -> int:
    if cap is not None and depth > cap:
        raise RuntimeError(f"depth cap {cap} exceeded")
    if c.edges in memo:
        return memo[c.edges]
    best = 0
    for f in applicable_flips(c):
        best = max(best, 1 + _longest(apply_flip(c, f), memo, depth + 1, cap))
    memo[c.edges] = best
    return best


def oracle_longest(c: Configuration, depth_cap: Optional[int] = None) -> Tuple[int, List[Flip]]:
    """Maximum flip-sequence length from ``c`` by exhaustive DFS, with a witness."""
    _check_oracle_scale(c)
    memo: Dict = {}
    length = _longest(c, memo, 0, depth_cap)
    witness = []
    cur = c
    while memo[cur.edges] > 0:
        for f in applicable_flips(cur):
            nxt = apply_flip(cur, f)
            if 1 + memo[nxt.edges] == memo[cur.edges]:
                witness.append(f)
                cur = nxt
                break
    return length, witness


def oracle_shortest_untangle(c: Configuration) -> int:
    """Fewest flips from ``c`` to a crossing-free configuration (BFS)."""
    _check_oracle_scale(c)
    seen = {c.edges}
    queue = deque([(c, 0)])
    while queue:
        cur, d = queue.popleft()
        flips = applicable_flips(cur)
        if not flips:
            return d
        for f in flips:
            nxt = apply_flip(cur, f)
            if nxt.edges not in seen:
                seen.add(nxt.edges)
                queue.append((nxt, d + 1))
    raise AssertionError("unreachable: flip sequences always terminate")
