"""Command-line entry point: ``flipdyn {gen,run,reduce,oracle,audit,render}``.

Exit codes: 0 success, 1 validation/audit failure, 2 usage or malformed
input, 3 oracle scale exceeded.
"""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import engine, generators, reductions
from .configurations import Version
from .formats import (FormatError, Instance, dumps, instance_to_dict, line_set_for, load_json, read_instance,
                      read_record, record_to_dict, steps_csv)
from .potentials import LineSetKind
from .render import render_svg

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_ORACLE = 0, 1, 2, 3


def _emit(text: str, path):
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_gen(args):
    if args.kind == "max-crossing":
        if args.points % 2:
            raise FormatError("--points must be even for max-crossing")
        c = generators.gen_max_crossing_matching(args.points // 2, args.seed, args.box)
        inst = Instance(c, tuple(c.points))
    else:
        spec = generators.GenSpec(args.kind, args.points, args.seed, args.box, args.t)
        pts = generators.gen_points(spec)
        c = generators.gen_configuration(pts, args.version, args.seed, max_degree=args.max_degree)
        convex = None if spec.kind is generators.GenKind.RANDOM else tuple(generators.convex_ids(spec))
        inst = Instance(c, convex)
    _emit(dumps(instance_to_dict(inst)), args.output)
    return EXIT_OK


def _strategy(args, L):
    if args.strategy == "random":
        return engine.Random(args.seed)
    if args.strategy == "greedy-min-drop":
        return engine.GreedyMinDrop(L)
    return engine.STRATEGIES[args.strategy]()


def cmd_run(args):
    inst = read_instance(args.instance)
    L = line_set_for(inst, args.potential)
    rec = engine.run(inst.config, _strategy(args, L), L, args.max_steps)
    if args.record:
        Path(args.record).write_text(dumps(record_to_dict(rec, inst.convex_subset)))
    _emit(steps_csv(rec), args.csv)
    return EXIT_OK


_TARGET = {"mm": reductions.ReductionKind.G_TO_MM, "rb": reductions.ReductionKind.MM_TO_RB,
           "tsp": reductions.ReductionKind.RB_TO_TSP}


def cmd_reduce(args):
    inst = read_instance(args.instance)
    kind = _TARGET[args.to]
    c = inst.config
    seq = []
    if args.with_sequence:
        rec = read_record(args.with_sequence)
        if rec.initial != c:
            raise FormatError(f"{args.with_sequence}: record instance differs from {args.instance}")
        seq = rec.flips
    if kind is reductions.ReductionKind.G_TO_MM and c.version is not Version.G:
        c = c.as_version(Version.G)  # any configuration is a multigraph
    r = reductions.reduce(c, kind)
    if args.with_sequence:
        r, flips = reductions.transform_sequence(r, seq)
        out = engine.record_from_flips(r.target, flips, strategy=f"transformed-{kind.value}")
        if not args.record:
            raise FormatError("--with-sequence needs --record for the transformed record")
        Path(args.record).write_text(dumps(record_to_dict(out)))
    _emit(dumps(instance_to_dict(Instance(r.target))), args.output)
    return EXIT_OK


def cmd_oracle(args):
    c = read_instance(args.instance).config
    if args.mode == "longest":
        length, witness = engine.oracle_longest(c)
        print(length)
        for f in witness:
            print(f"{list(f.removed)} -> {list(f.added)}")
    else:
        print(engine.oracle_shortest_untangle(c))
    return EXIT_OK


def cmd_audit(args):
    rec = read_record(args.record)
    ks = args.k or [max(1, math.ceil(len(rec.initial.edges) ** (1 / 3)))]
    report = engine.audit(rec, thresholds=ks)
    print(report)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_render(args):
    path = Path(args.input)
    kind = "record" if "flips" in load_json(path) else "instance"
    if kind == "instance":
        svg = render_svg(read_instance(path).config)
    else:
        rec = read_record(path)
        states = rec.replay()
        if not 0 <= args.step <= len(rec.steps):
            raise FormatError(f"--step must be in [0, {len(rec.steps)}]")
        nxt = rec.steps[args.step].flip if args.step < len(rec.steps) else None
        svg = render_svg(states[args.step], nxt)
    _emit(svg, args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="flipdyn", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate an instance file")
    g.add_argument("--kind", choices=["random", "convex", "nearconvex", "max-crossing"], required=True)
    g.add_argument("--points", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--box", type=int, default=1000)
    g.add_argument("--t", type=int, default=0, help="interior points (nearconvex)")
    g.add_argument("--version", choices=[v.value for v in Version], default="MM")
    g.add_argument("--max-degree", type=int, default=3, help="degree bound for G instances")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("run", help="run a flip sequence; CSV to stdout or --csv")
    r.add_argument("instance")
    r.add_argument("--strategy", choices=sorted(engine.STRATEGIES), default="first-lex")
    r.add_argument("--potential", choices=[k.value for k in LineSetKind], default="full")
    r.add_argument("--max-steps", type=int)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--record", help="write the record file here")
    r.add_argument("--csv")
    r.set_defaults(func=cmd_run)

    d = sub.add_parser("reduce", help="apply a reduction (G->MM, MM->RB, RB->TSP)")
    d.add_argument("instance")
    d.add_argument("--to", choices=sorted(_TARGET), required=True)
    d.add_argument("--with-sequence", help="record whose flips are transferred")
    d.add_argument("--record", help="where to write the transformed record")
    d.add_argument("-o", "--output")
    d.set_defaults(func=cmd_reduce)

    o = sub.add_parser("oracle", help="exhaustive longest / shortest untangling sequence")
    o.add_argument("instance")
    o.add_argument("--mode", choices=["longest", "shortest"], default="longest")
    o.set_defaults(func=cmd_oracle)

    a = sub.add_parser("audit", help="replay and check a record file")
    a.add_argument("record")
    a.add_argument("--k", type=int, action="append", help="drop threshold(s) to report")
    a.set_defaults(func=cmd_audit)

    v = sub.add_parser("render", help="SVG of an instance or a record step")
    v.add_argument("input")
    v.add_argument("--step", type=int, default=0)
    v.add_argument("-o", "--output")
    v.set_defaults(func=cmd_render)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except engine.OracleScaleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    except (FormatError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
