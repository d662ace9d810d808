"""A single flip on four points, and what it does to the potentials.

Two diagonals of a quadrilateral cross.  A flip swaps them for a pair of
opposite sides; the crossing disappears and every line through two of the
points is crossed by at most as many segments as before.
"""
from flipdyn.configurations import Configuration, Version, applicable_flips, apply_flip
from flipdyn.geometry import Point, PointSet
from flipdyn.potentials import build_line_set, flip_drop, line_delta, phi_L

pts = PointSet([Point(1, 0, 0), Point(2, 0, 2), Point(3, 2, 2), Point(4, 2, 0)])
c = Configuration(pts, ((1, 3), (2, 4)), Version.MM)
L = build_line_set(pts)

print("start:", c.edges, phi_L(c, L))
for f in applicable_flips(c):
    after = apply_flip(c, f)
    print(f"\nflip {f.removed} -> {f.added}")
    print("  result:", after.edges, "crossings left:", phi_L(after, L).phi_x)
    for l in L:
        print(f"  line {l}: delta {line_delta(f, l, pts)}")
    print("  total drop:", flip_drop(f, L, pts))
