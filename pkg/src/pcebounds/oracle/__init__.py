"""Ground truth for the bounds: exact evaluation, entropies and seeded
property suites."""
from .join import JoinResult, exact_join
from .entropy import (NormCheck, empirical_entropy, entropy_vector,
                      marginal_entropy, verify_norm_constraint)
from .instances import (SHAPES, random_database, random_instance,
                        random_relation, true_statistics)
from .inequalities import (INEQUALITY_FAMILIES, InequalityCheck,
                           closed_form_values, verify_inequalities)
from .suites import SUITES, SuiteReport, SuiteResult, run_suite
from .report import format_report_text, report_to_json, write_report
