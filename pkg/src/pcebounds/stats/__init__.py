"""Degree sequences, their norms and compressions, and the catalog
entries built from them."""
from .degree import DegreeSequence, degree_sequence, log_lp_norm, lp_norm
from .compress import (CompressedDegreeSequence, cdf_dominates,
                       cdf_upper_compress, compressed_from_degrees,
                       elementwise_upper_compress, run_length_compress)
from .entries import (BUCKET, COMMON, GLOBAL, GLOBAL_CONDITION, MCV,
                      PER_VALUE, WHOLE, Condition, SequenceEntry, StatEntry)
from .conditional import build_conditional_stats, equi_depth_buckets
from .predicates import (NO_PREDICATE, PredicateExpr, and_, eq, in_, or_,
                         parse_predicate, restrict_predicate, select_stat)
