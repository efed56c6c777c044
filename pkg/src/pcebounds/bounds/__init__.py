"""Upper bounds on the output size of conjunctive queries."""
from .result import BoundResult, empty_result
from .instantiate import (CoverStatistic, InstantiatedStatistics,
                          NormConstraint, cardinality_statistics,
                          instantiate_statistics, log_statistic,
                          norm_constraint)
from .cover import (acyclic_chain_bound, agm_bound, bound_sketch,
                    chain_bound, evaluate_cover_witness, witness_keys)
from .polymatroid import (EntropyVector, drop_nonjoin_vars,
                          elemental_inequalities, polyb, remap_constraints)
from .dsb import (dsb_for_query, dsb_join_bound, dsb_join_bound_compressed,
                  dsb_join_bound_pair, rank_product)
from .closed_forms import FAMILIES, ClosedForm, closed_form
