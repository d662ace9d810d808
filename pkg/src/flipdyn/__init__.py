"""Flip dynamics on crossing segment configurations."""
from .configurations import (Configuration, Flip, FlipError, Version, applicable_flips, apply_flip,
                             canonical_flip_id, crossings, validate)
from .engine import (Exhaustive, FirstLex, GreedyMaxNewCrossings, GreedyMinDrop, Random,
                     SequenceRecord, audit, distinct_count, oracle_longest, oracle_shortest_untangle, run)
from .generators import GenKind, GenSpec, gen_configuration, gen_max_crossing_matching, gen_points
from .geometry import (Color, Point, PointSet, in_convex_position, is_general_position,
                       line_crosses_segment, orientation, replacement_pairs, segment, segments_cross)
from .potentials import (LineClass, LineSet, LineSetKind, build_line_set, classify_line, flip_drop,
                         line_delta, phi_L, phi_line, phi_x)
from .reductions import (Reduction, ReductionKind, reduce_g_to_mm, reduce_mm_to_rb, reduce_rb_to_tsp,
                         safe_epsilon, transform_sequence)

__version__ = "0.1.0"
