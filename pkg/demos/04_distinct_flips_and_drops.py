"""Distinct flips, drop sizes and audits.

A flip is identified by its four segments, so its drop is the same in any
configuration that contains it.  Long runs can repeat flips; the audit
splits steps by drop size against a threshold k.
"""
import math
from collections import Counter

from flipdyn.configurations import Version
from flipdyn.engine import Random, audit, distinct_count, run
from flipdyn.generators import GenSpec, gen_configuration, gen_points

pts = gen_points(GenSpec("random", 24, seed=11, box=300))
for seed in range(4):
    rec = run(gen_configuration(pts, Version.MM, seed), Random(seed))
    k = math.ceil(len(rec.initial.edges) ** (1 / 3))
    report = audit(rec, thresholds=[k])
    drops = Counter(s.drop for s in rec.steps)
    print(f"seed {seed}: {len(rec)} flips, {distinct_count(rec)} distinct, drops {dict(sorted(drops.items()))}")
    print("   ", str(report).replace("\n", "\n    "))
