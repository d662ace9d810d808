"""Carry a flip sequence across the reductions G -> MM -> RB -> TSP.

Each reduction clones points within a tiny L-infinity distance.  A source
flip becomes one flip (multigraph to matching) or two flips (the doubling
reductions) on the target, and replaying those lands on the lifted image
of the source's final state.
"""
from flipdyn.configurations import Version, apply_flip
from flipdyn.engine import Random, run
from flipdyn.generators import GenSpec, gen_configuration, gen_points
from flipdyn.reductions import lift, reduce_g_to_mm, reduce_mm_to_rb, reduce_rb_to_tsp, transform_sequence

pts = gen_points(GenSpec("random", 6, seed=7, box=50))
g = gen_configuration(pts, Version.G, seed=7, n_edges=6)
print("multigraph:", g.edges)

current, seq = g, run(g, Random(1)).flips
for step in (reduce_g_to_mm, reduce_mm_to_rb, reduce_rb_to_tsp):
    rb_flips = seq
    r, seq = transform_sequence(step(current), seq)
    current = r.target
    print(f"{r.kind.value}: {len(current.points)} points, {len(current.edges)} segments, "
          f"epsilon {r.epsilon}, {len(seq)} flips")

# replaying the transferred flips reaches the lifted image of the RB state
rb_state = r.source
for f in rb_flips:
    rb_state = apply_flip(rb_state, f)
tour = current
for f in seq:
    tour = apply_flip(tour, f)
print("tour matches the lifted RB end state:", tour == lift(r, rb_state.edges))
