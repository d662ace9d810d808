"""Untangling runs on convex and near-convex point sets.

In convex position the crossing count itself falls at every step, so no run
can be longer than C(n, 2).  With a few interior points the count may rise,
and the near-convex line potential pays for it.
"""
from math import comb

from flipdyn.configurations import Version
from flipdyn.engine import GreedyMaxNewCrossings, run
from flipdyn.generators import GenSpec, convex_ids, gen_configuration, gen_max_crossing_matching, gen_points
from flipdyn.potentials import build_line_set

for n in (6, 9, 12):
    c = gen_max_crossing_matching(n)
    rec = run(c, GreedyMaxNewCrossings())
    xs = [s.phi_x for s in rec.steps]
    print(f"convex n={n}: {len(rec)} flips (bound {comb(n, 2)}), crossings {comb(n, 2)} -> {xs}")

print()
for t, seed in ((2, 31), (3, 21)):
    spec = GenSpec("nearconvex", 20, seed=seed, box=200, t=t)
    pts = gen_points(spec)
    L = build_line_set(pts, "nearconvex", convex_ids(spec))
    rec = run(gen_configuration(pts, Version.MM, seed), GreedyMaxNewCrossings(), L)
    xs = [s.phi_x for s in rec.steps]
    rises = sum(b > a for a, b in zip(xs, xs[1:]))
    print(f"near-convex t={t}, seed {seed}: {len(rec)} flips, {rises} steps raised the crossing count, "
          f"crossings {xs}, phi_L {[s.phi_l for s in rec.steps]}")
