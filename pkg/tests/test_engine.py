import dataclasses
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from flipdyn.configurations import Configuration, Flip, Version, applicable_flips, apply_flip
from flipdyn.engine import (AuditReport, Exhaustive, FirstLex, GreedyMaxNewCrossings, GreedyMinDrop,
                            OracleScaleError, Random, Step, TerminationError, audit, certificate_bound,
                            distinct_count, oracle_longest, oracle_shortest_untangle, record_from_flips, run)
from flipdyn.formats import read_instance
from flipdyn.generators import GenSpec, gen_configuration, gen_max_crossing_matching, gen_points
from flipdyn.potentials import build_line_set, flip_drop, phi_L, phi_x

from conftest import FIXTURES, ORACLE_VALUES, SQUARE, random_config


def naive_longest(c):
    """Unmemoized enumeration of every flip sequence."""
    return max((1 + naive_longest(apply_flip(c, f)) for f in applicable_flips(c)), default=0)


def test_square_first_lex(square_diagonals):
    rec = run(square_diagonals, FirstLex())
    assert len(rec) == 1 and rec.terminated
    assert rec.steps[0].phi_x == 0 and rec.steps[0].phi_l == 0 and rec.steps[0].drop == 2
    assert rec.final().edges == ((1, 2), (3, 4))


def test_convex_length_bounded():
    for seed in range(5):
        pts = gen_points(GenSpec("convex", 12, seed))
        c = gen_configuration(pts, Version.MM, seed)
        rec = run(c, Random(seed))
        assert len(rec) <= comb(6, 2)
        xs = [phi_x(c)] + [s.phi_x for s in rec.steps]
        assert all(a > b for a, b in zip(xs, xs[1:]))


def test_random_strategy_is_deterministic():
    c = random_config(Version.MM, 16, 3)
    a, b = run(c, Random(1)), run(c, Random(1))
    assert a.steps == b.steps and a.distinct_keys == b.distinct_keys


@pytest.mark.parametrize("strategy", [FirstLex(), Random(4), GreedyMaxNewCrossings(), GreedyMinDrop()])
@pytest.mark.parametrize("version", list(Version))
def test_every_strategy_terminates_and_audits(strategy, version):
    c = random_config(version, 10, 21)
    rec = run(c, strategy)
    assert rec.terminated and phi_x(rec.final()) == 0
    assert len(rec) <= certificate_bound(c)
    assert audit(rec).ok


def test_greedy_min_drop_contract():
    c = random_config(Version.MM, 14, 5)
    L = build_line_set(c.points)
    rec = run(c, GreedyMinDrop(L), L)
    for state, step in zip(rec.replay(), rec.steps):
        assert step.drop == min(flip_drop(f, L, c.points) for f in applicable_flips(state))


def test_greedy_max_crossings_contract():
    c = random_config(Version.TSP, 9, 5)
    rec = run(c, GreedyMaxNewCrossings())
    for state, step in zip(rec.replay(), rec.steps):
        assert step.phi_x == max(phi_x(apply_flip(state, f)) for f in applicable_flips(state))


def test_max_steps_stops_early():
    c = gen_max_crossing_matching(6)
    rec = run(c, FirstLex(), max_steps=2)
    assert len(rec) == 2 and not rec.terminated
    assert audit(rec).ok


def test_termination_certificate_violation_raises(monkeypatch):
    import flipdyn.engine as engine
    monkeypatch.setattr(engine, "certificate_bound", lambda c: 0)
    with pytest.raises(TerminationError, match="termination certificate violated"):
        run(gen_max_crossing_matching(3))


def test_run_rejects_invalid_start(square):
    with pytest.raises(ValueError):
        run(Configuration(square, ((1, 3),), Version.MM))


def test_inapplicable_strategy_choice_is_an_internal_error(square_diagonals):
    @dataclasses.dataclass(frozen=True)
    class Bogus:
        name = "bogus"

        def chooser(self):
            return lambda c, flips: Flip(((1, 2), (3, 4)), ((1, 3), (2, 4)))

    with pytest.raises(RuntimeError, match="inapplicable"):
        run(square_diagonals, Bogus())


def test_distinct_count():
    c = Configuration(SQUARE, ((1, 3), (2, 4)), Version.MM)
    rec = run(c)
    assert distinct_count(rec) == 1
    f = rec.steps[0].flip
    back = Flip(f.added, f.removed)  # not a legal flip, so build the record by hand
    rec.steps.append(Step(back, 1, 2, -2))
    rec.distinct_keys.add(back.key)
    assert distinct_count(rec) < len(rec)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_ledger_bounds(seed):
    c = random_config(Version.MM, 10, seed)
    rec = run(c, Random(seed))
    assert distinct_count(rec) <= len(rec) <= certificate_bound(c)
    assert distinct_count(rec) <= 2 * comb(len(c.points), 4)


def test_audit_honest_and_tampered():
    rec = run(gen_max_crossing_matching(5), Random(2))
    rep = audit(rec, thresholds=[2])
    assert rep.ok and isinstance(rep, AuditReport)
    big, small = rep.drop_split[2]
    assert big + small == len(rec)
    tampered = dataclasses.replace(rec, steps=list(rec.steps))
    s = tampered.steps[1]
    tampered.steps[1] = s._replace(drop=s.drop + 1)
    bad = audit(tampered)
    assert not bad.ok and any(msg.startswith("step 2:") for msg in bad.failures)
    assert "FAIL" in str(bad)


def test_audit_detects_snapshot_and_ledger_tampering():
    rec = run(random_config(Version.TSP, 10, 6), FirstLex())
    s = rec.steps[0]
    rec.steps[0] = s._replace(phi_x=s.phi_x + 1)
    assert any("phi_x" in m for m in audit(rec).failures)
    rec.steps[0] = s
    rec.distinct_keys.clear()
    assert any("ledger" in m for m in audit(rec).failures)


def test_replay_reproduces_snapshots():
    c = random_config(Version.RB, 12, 8)
    rec = run(c, Random(3))
    again = record_from_flips(c, rec.flips)
    assert again.steps == rec.steps


def test_drops_agree_across_records():
    pts = gen_points(GenSpec("random", 12, seed=9))
    L = build_line_set(pts)
    seen = {}
    for seed in range(10):
        rec = run(gen_configuration(pts, Version.MM, seed), Random(seed), L)
        for s in rec.steps:
            assert seen.setdefault(s.flip.key, s.drop) == s.drop


@pytest.mark.parametrize("name", sorted(ORACLE_VALUES))
def test_oracle_fixtures(name):
    c = read_instance(FIXTURES / f"{name}.json").config
    longest, shortest = ORACLE_VALUES[name]
    length, witness = oracle_longest(c)
    assert length == longest == naive_longest(c)
    assert len(witness) == length
    assert oracle_shortest_untangle(c) == shortest <= longest
    cur = c
    for f in witness:
        cur = apply_flip(cur, f)
    assert phi_x(cur) == 0 or applicable_flips(cur) == []
    assert len(run(c, Exhaustive())) == longest


def test_oracle_square(square_diagonals, square_sides):
    assert oracle_longest(square_diagonals)[0] == 1
    assert oracle_longest(square_sides) == (0, [])
    assert oracle_shortest_untangle(square_sides) == 0
    assert oracle_shortest_untangle(square_diagonals) == 1


def test_oracle_guards():
    with pytest.raises(OracleScaleError, match="oracle scale exceeded"):
        oracle_longest(gen_max_crossing_matching(5))
    with pytest.raises(OracleScaleError):
        oracle_shortest_untangle(random_config(Version.TSP, 7, 1))
    with pytest.raises(OracleScaleError):
        run(gen_max_crossing_matching(5), Exhaustive())


def test_oracle_depth_cap():
    with pytest.raises(RuntimeError, match="depth cap"):
        oracle_longest(gen_max_crossing_matching(4), depth_cap=1)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([Version.MM, Version.RB]), st.integers(0, 10 ** 6))
def test_shortest_never_exceeds_longest(version, seed):
    c = random_config(version, 8, seed)
    assert oracle_shortest_untangle(c) <= oracle_longest(c)[0]


def test_certificate_bound_matches_full_potential():
    c = random_config(Version.G, 9, 2)
    assert certificate_bound(c) == phi_L(c, build_line_set(c.points)).phi_l_total // 2 + 1
