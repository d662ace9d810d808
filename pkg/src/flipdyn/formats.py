"""JSON instance/record files and the per-step CSV.

Rationals are written as "p/q" strings.  Readers are strict: unknown or
missing fields raise :class:`FormatError` naming the offending field.
"""
from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

from .configurations import Configuration, Flip, Version, validate
from .engine import SequenceRecord, Step
from .geometry import Color, Point, PointSet
from .potentials import LineSet, LineSetKind, build_line_set

CSV_HEADER = ["step", "flip_key", "phi_x", "phi_l", "drop", "distinct_so_far"]

_RATIONAL = re.compile(r"^-?\d+(/\d+)?$")


class FormatError(ValueError):
    pass


class InvalidConfigurationError(ValueError):
    """A well-formed file whose configuration fails validation."""


@dataclass(frozen=True)
class Instance:
    config: Configuration
    convex_subset: Optional[tuple] = None


def rational_to_str(v: Fraction) -> str:
    return f"{v.numerator}/{v.denominator}"


def parse_rational(s, where: str) -> Fraction:
    if not isinstance(s, str) or not _RATIONAL.match(s):
        raise FormatError(f"{where}: expected a 'p/q' rational string, got {s!r}")
    return Fraction(s)


def _check_keys(obj, allowed, required, where):
    if not isinstance(obj, dict):
        raise FormatError(f"{where}: expected an object")
    unknown = set(obj) - set(allowed)
    if unknown:
        raise FormatError(f"{where}: unknown field(s) {sorted(unknown)}")
    missing = set(required) - set(obj)
    if missing:
        raise FormatError(f"{where}: missing field(s) {sorted(missing)}")


def _pair(v, where):
    if not (isinstance(v, list) and len(v) == 2 and all(isinstance(i, int) for i in v)):
        raise FormatError(f"{where}: expected [id, id]")
    return tuple(v)


# -- instances ----------------------------------------------------------------

def instance_to_dict(inst: Instance) -> dict:
    c = inst.config
    pts = []
    for p in c.points.values():
        d = {"id": p.id, "x": rational_to_str(p.x), "y": rational_to_str(p.y)}
        if p.color is not None:
            d["color"] = p.color.value
        pts.append(d)
    out = {"version": c.version.value, "points": pts, "edges": [list(e) for e in c.edges]}
    if inst.convex_subset is not None:
        out["convex_subset"] = sorted(inst.convex_subset)
    return out


def instance_from_dict(d, where="instance") -> Instance:
    _check_keys(d, ("version", "points", "edges", "convex_subset"), ("version", "points", "edges"), where)
    try:
        version = Version(d["version"])
    except ValueError:
        raise FormatError(f"{where}.version: unknown version {d['version']!r}") from None
    if not isinstance(d["points"], list):
        raise FormatError(f"{where}.points: expected a list")
    points = []
    for k, p in enumerate(d["points"]):
        w = f"{where}.points[{k}]"
        _check_keys(p, ("id", "x", "y", "color"), ("id", "x", "y"), w)
        if not isinstance(p["id"], int):
            raise FormatError(f"{w}.id: expected an integer")
        color = p.get("color")
        if color is not None and color not in ("red", "blue"):
            raise FormatError(f"{w}.color: expected 'red' or 'blue'")
        points.append(Point(p["id"], parse_rational(p["x"], f"{w}.x"), parse_rational(p["y"], f"{w}.y"),
                            Color(color) if color else None))
    try:
        pts = PointSet(points)
    except ValueError as exc:
        raise FormatError(f"{where}.points: {exc}") from None
    if not isinstance(d["edges"], list):
        raise FormatError(f"{where}.edges: expected a list")
    edges = [_pair(e, f"{where}.edges[{k}]") for k, e in enumerate(d["edges"])]
    if any(a == b for a, b in edges):
        raise FormatError(f"{where}.edges: degenerate segment")
    convex = d.get("convex_subset")
    if convex is not None:
        if not (isinstance(convex, list) and all(isinstance(i, int) for i in convex)):
            raise FormatError(f"{where}.convex_subset: expected a list of ids")
        convex = tuple(sorted(convex))
    return Instance(Configuration(pts, tuple(edges), version), convex)


def dumps(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=False) + "\n"


def write_instance(inst: Instance, path) -> None:
    Path(path).write_text(dumps(instance_to_dict(inst)))


def load_json(path):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON ({exc})") from None


def read_instance(path, check=True) -> Instance:
    try:
        inst = instance_from_dict(load_json(path))
    except FormatError as exc:
        raise FormatError(f"{path}: {exc}") from None
    if check:
        bad = validate(inst.config)
        if bad:
            raise InvalidConfigurationError(f"{path}: invalid configuration: {'; '.join(bad)}")
    return inst


# -- records ------------------------------------------------------------------

def line_set_for(inst: Instance, kind) -> LineSet:
    kind = LineSetKind(kind)
    if kind is LineSetKind.NEAR_CONVEX and inst.convex_subset is None:
        raise FormatError("near-convex potential needs an instance with convex_subset")
    return build_line_set(inst.config.points, kind, inst.convex_subset)


def record_to_dict(rec: SequenceRecord, convex_subset=None) -> dict:
    return {
        "instance": instance_to_dict(Instance(rec.initial, convex_subset)),
        "line_set": rec.line_set.kind.value,
        "strategy": rec.strategy,
        "terminated": rec.terminated,
        "flips": [{"removed": [list(s) for s in st.flip.removed], "added": [list(s) for s in st.flip.added]}
                  for st in rec.steps],
        "steps": [{"phi_x": st.phi_x, "phi_l": st.phi_l, "drop": st.drop} for st in rec.steps],
    }


def record_from_dict(d, where="record") -> SequenceRecord:
    _check_keys(d, ("instance", "line_set", "strategy", "terminated", "flips", "steps"),
                ("instance", "line_set", "flips", "steps"), where)
    inst = instance_from_dict(d["instance"], f"{where}.instance")
    try:
        L = line_set_for(inst, d["line_set"])
    except ValueError as exc:
        raise FormatError(f"{where}.line_set: {exc}") from None
    if not isinstance(d["flips"], list) or not isinstance(d["steps"], list):
        raise FormatError(f"{where}: flips and steps must be lists")
    if len(d["flips"]) != len(d["steps"]):
        raise FormatError(f"{where}: {len(d['flips'])} flips but {len(d['steps'])} steps")
    rec = SequenceRecord(inst.config, L, strategy=d.get("strategy", ""), terminated=bool(d.get("terminated")))
    for k, (f, s) in enumerate(zip(d["flips"], d["steps"])):
        w = f"{where}.flips[{k}]"
        _check_keys(f, ("removed", "added"), ("removed", "added"), w)
        for key in ("removed", "added"):
            if not (isinstance(f[key], list) and len(f[key]) == 2):
                raise FormatError(f"{w}.{key}: expected two segments")
        try:
            flip = Flip(tuple(_pair(e, f"{w}.removed") for e in f["removed"]),
                        tuple(_pair(e, f"{w}.added") for e in f["added"]))
        except ValueError as exc:
            raise FormatError(f"{w}: {exc}") from None
        ws = f"{where}.steps[{k}]"
        _check_keys(s, ("phi_x", "phi_l", "drop"), ("phi_x", "phi_l", "drop"), ws)
        if not all(isinstance(s[x], int) for x in ("phi_x", "phi_l", "drop")):
            raise FormatError(f"{ws}: snapshot values must be integers")
        rec.steps.append(Step(flip, s["phi_x"], s["phi_l"], s["drop"]))
        rec.distinct_keys.add(flip.key)
    return rec


def write_record(rec: SequenceRecord, path, convex_subset=None) -> None:
    Path(path).write_text(dumps(record_to_dict(rec, convex_subset)))


def read_record(path) -> SequenceRecord:
    try:
        return record_from_dict(load_json(path))
    except FormatError as exc:
        raise FormatError(f"{path}: {exc}") from None


# -- CSV ----------------------------------------------------------------------

def flip_key_str(f: Flip) -> str:
    return "|".join(f"{a}-{b}" for a, b in f.key)


def steps_csv(rec: SequenceRecord) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    seen = set()
    for i, st in enumerate(rec.steps, start=1):
        seen.add(st.flip.key)
        w.writerow([i, flip_key_str(st.flip), st.phi_x, st.phi_l, st.drop, len(seen)])
    return buf.getvalue()


def read_steps_csv(text: str) -> List[dict]:
    rows = list(csv.DictReader(io.StringIO(text)))
    return [{k: (v if k == "flip_key" else int(v)) for k, v in r.items()} for r in rows]
