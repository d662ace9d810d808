import json
from fractions import Fraction
from math import comb

import pytest

from flipdyn.cli import EXIT_FAIL, EXIT_OK, EXIT_ORACLE, EXIT_USAGE, main
from flipdyn.configurations import Configuration, Version, applicable_flips
from flipdyn.engine import Random, audit, run
from flipdyn.formats import (CSV_HEADER, FormatError, Instance, InvalidConfigurationError, instance_from_dict,
                             instance_to_dict, read_instance, read_record, read_steps_csv, steps_csv,
                             write_instance, write_record)
from flipdyn.generators import GenSpec, gen_configuration, gen_max_crossing_matching, gen_points
from flipdyn.geometry import Point, PointSet
from flipdyn.potentials import build_line_set, phi_L
from flipdyn.render import render_svg

from conftest import random_config


def test_instance_round_trip(tmp_path):
    pts = PointSet([Point(0, Fraction(-1, 3), Fraction(7, 2)), Point(1, 5, Fraction(10 ** 20 + 1, 7)),
                    Point(2, 0, 0), Point(3, 9, 1)])
    inst = Instance(Configuration(pts, ((0, 2), (0, 2), (1, 3)), Version.G))
    path = tmp_path / "a.json"
    write_instance(inst, path)
    back = read_instance(path)
    assert back == inst and back.config.points == pts
    write_instance(back, tmp_path / "b.json")
    assert path.read_bytes() == (tmp_path / "b.json").read_bytes()


def test_rb_and_convex_subset_round_trip(tmp_path):
    pts = gen_points(GenSpec("nearconvex", 10, seed=2, t=2))
    inst = Instance(gen_configuration(pts, Version.RB, 2), tuple(range(8)))
    write_instance(inst, tmp_path / "i.json")
    assert read_instance(tmp_path / "i.json") == inst


@pytest.mark.parametrize("mutate, field", [
    (lambda d: d.update(extra=1), "unknown field"),
    (lambda d: d["points"][0].update(x="0.5"), "points[0].x"),
    (lambda d: d["points"][1].pop("y"), "points[1]"),
    (lambda d: d.update(version="XX"), "version"),
    (lambda d: d["points"][0].update(color="green"), "points[0].color"),
    (lambda d: d["edges"].append([1]), "edges[2]"),
])
def test_strict_reader_names_field(mutate, field):
    d = instance_to_dict(Instance(random_config(Version.MM, 4, 1)))
    mutate(d)
    with pytest.raises(FormatError, match=field.replace("[", r"\[").replace("]", r"\]")):
        instance_from_dict(d)


def test_invalid_configuration_is_reported(tmp_path):
    d = instance_to_dict(Instance(random_config(Version.MM, 4, 1)))
    d["version"] = "TSP"
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(d))
    with pytest.raises(InvalidConfigurationError, match="not a single cycle"):
        read_instance(path)
    assert read_instance(path, check=False).config.version is Version.TSP


def test_record_round_trip_and_csv(tmp_path):
    c = gen_max_crossing_matching(6, seed=4)
    rec = run(c, Random(4))
    assert len(rec) > 1
    write_record(rec, tmp_path / "r.json")
    back = read_record(tmp_path / "r.json")
    assert back.steps == rec.steps and back.initial == rec.initial
    assert audit(back).ok
    write_record(back, tmp_path / "r2.json")
    assert (tmp_path / "r.json").read_bytes() == (tmp_path / "r2.json").read_bytes()
    rows = read_steps_csv(steps_csv(rec))
    assert list(rows[0]) == CSV_HEADER
    L = build_line_set(c.points)
    assert sum(r["drop"] for r in rows) == phi_L(c, L).phi_l_total - phi_L(rec.final(), L).phi_l_total
    assert rows[-1]["distinct_so_far"] == len(rec.distinct_keys)


def test_svg(square_diagonals):
    svg = render_svg(square_diagonals)
    assert svg.count("<circle") == 4 and svg.count("<line") == 2
    f = applicable_flips(square_diagonals)[0]
    hi = render_svg(square_diagonals, f)
    assert hi.count("<line") == 4
    assert hi.count('class="removed"') == 2 and hi.count('class="added"') == 2
    assert render_svg(square_diagonals, f) == hi


# -- command line --------------------------------------------------------------

def cli(*args):
    return main([str(a) for a in args])


def test_cli_convex_run(tmp_path, capsys):
    inst, rec = tmp_path / "i.json", tmp_path / "r.json"
    assert cli("gen", "--kind", "convex", "--points", 10, "--seed", 1, "-o", inst) == EXIT_OK
    assert cli("run", inst, "--strategy", "first-lex", "--record", rec) == EXIT_OK
    rows = read_steps_csv(capsys.readouterr().out)
    assert len(rows) <= comb(5, 2)
    assert cli("audit", rec) == EXIT_OK


def test_cli_reduce_with_sequence(tmp_path):
    inst, rec, out, out_rec = (tmp_path / n for n in ("i.json", "r.json", "o.json", "or.json"))
    cli("gen", "--kind", "random", "--points", 10, "--seed", 3, "-o", inst)
    cli("run", inst, "--strategy", "random", "--seed", 2, "--record", rec, "--csv", tmp_path / "s.csv")
    assert cli("reduce", inst, "--to", "rb", "--with-sequence", rec, "--record", out_rec, "-o", out) == EXIT_OK
    assert len(read_record(out_rec).steps) == 2 * len(read_record(rec).steps)
    assert read_instance(out).config.version is Version.RB
    assert cli("audit", out_rec) == EXIT_OK


def test_cli_reduce_chain(tmp_path):
    g, mm, rb, tsp = (tmp_path / f"{n}.json" for n in ("g", "mm", "rb", "tsp"))
    cli("gen", "--kind", "random", "--points", 6, "--version", "G", "--seed", 5, "-o", g)
    assert cli("reduce", g, "--to", "mm", "-o", mm) == EXIT_OK
    assert cli("reduce", mm, "--to", "rb", "-o", rb) == EXIT_OK
    assert cli("reduce", rb, "--to", "tsp", "-o", tsp) == EXIT_OK
    assert read_instance(tsp).config.version is Version.TSP


def test_cli_audit_detects_corruption(tmp_path, capsys):
    inst, rec = tmp_path / "i.json", tmp_path / "r.json"
    cli("gen", "--kind", "max-crossing", "--points", 10, "-o", inst)
    cli("run", inst, "--record", rec, "--csv", tmp_path / "s.csv")
    d = json.loads(rec.read_text())
    d["steps"][0]["drop"] += 1
    rec.write_text(json.dumps(d))
    assert cli("audit", rec, "--k", 2) == EXIT_FAIL
    assert "FAIL" in capsys.readouterr().out


def test_cli_oracle(tmp_path, capsys):
    small, big = tmp_path / "s.json", tmp_path / "b.json"
    cli("gen", "--kind", "max-crossing", "--points", 6, "-o", small)
    assert cli("oracle", small) == EXIT_OK
    assert capsys.readouterr().out.splitlines()[0] == "3"
    assert cli("oracle", small, "--mode", "shortest") == EXIT_OK
    assert capsys.readouterr().out.strip() == "1"
    cli("gen", "--kind", "max-crossing", "--points", 12, "-o", big)
    assert cli("oracle", big) == EXIT_ORACLE


def test_cli_errors(tmp_path, capsys):
    assert cli("audit", tmp_path / "missing.json") == EXIT_USAGE
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert cli("run", bad) == EXIT_USAGE
    bad.write_text(json.dumps({"version": "MM", "points": [], "edges": [], "typo": 1}))
    assert cli("run", bad) == EXIT_USAGE
    assert "typo" in capsys.readouterr().err
    d = instance_to_dict(Instance(random_config(Version.MM, 4, 1)))
    d["version"] = "TSP"
    bad.write_text(json.dumps(d))
    assert cli("run", bad) == EXIT_FAIL
    with pytest.raises(SystemExit) as exc:
        cli("run")
    assert exc.value.code == EXIT_USAGE


def test_cli_render_and_determinism(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert cli("gen", "--kind", "nearconvex", "--points", 12, "--t", 2, "--seed", 9, "-o", p) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    recs, csvs, svgs = [], [], []
    for k in range(2):
        rec, csv, svg = tmp_path / f"r{k}.json", tmp_path / f"c{k}.csv", tmp_path / f"s{k}.svg"
        cli("run", a, "--potential", "nearconvex", "--strategy", "greedy-min-drop", "--record", rec, "--csv", csv)
        assert cli("render", rec, "--step", 1, "-o", svg) == EXIT_OK
        recs.append(rec.read_bytes())
        csvs.append(csv.read_bytes())
        svgs.append(svg.read_bytes())
    assert recs[0] == recs[1] and csvs[0] == csvs[1] and svgs[0] == svgs[1]
    assert b'class="added"' in svgs[0]
    assert cli("render", a, "-o", tmp_path / "i.svg") == EXIT_OK
    assert cli("render", tmp_path / "r0.json", "--step", 999) == EXIT_USAGE
