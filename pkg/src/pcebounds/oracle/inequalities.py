"""Numeric checks of the closed-form bounds and of chain bound
coverage."""
import logging
from dataclasses import dataclass

from ..bounds.closed_forms import FAMILIES, TRIANGLE_QUERY, closed_form
from ..bounds.cover import chain_bound, covered_by, witness_keys
from ..bounds.instantiate import instantiate_statistics
from ..config import DEFAULT_ORACLE_CAP
from ..model import VariableOrdering, parse_query
from ..stats.degree import degree_sequence, lp_norm
from .instances import MAX_DEGREE, true_statistics
from .join import exact_join

logger = logging.getLogger(__name__)

CHAIN_COVERAGE = "chain_coverage"

INEQUALITY_FAMILIES = FAMILIES + (CHAIN_COVERAGE,)

# Relative tolerance of a check
CHECK_TOLERANCE = 1e-9


@dataclass(frozen=True)
class InequalityCheck:
    """One evaluated inequality ``lhs <= rhs``."""
    name: str
    lhs: float
    rhs: float
    tolerance: float = CHECK_TOLERANCE

    @property
    def slack(self):

        return self.rhs - self.lhs

    @property
    def passed(self):
        if self.lhs <= self.rhs:
            return True

        return self.lhs <= self.rhs + self.tolerance * max(1.0,
                                                           abs(self.rhs))


def closed_form_values(database, form):
    """The true statistics a closed form is evaluated at.

    :param database: Relations binding every atom of the form's query.
    :type database: :class:`~pcebounds.catalog.Database`

    :param form: The closed form.
    :type form: :class:`~pcebounds.bounds.closed_forms.ClosedForm`

    :return: One value per term.
    :rtype: list[float]
    """
    values = []
    for term in form.terms:
        atom = form.query.atoms[term.atom]
        relation = database[atom.relation]
        attribute_of = {var: attr for attr, var in form.query
                        .atom_attribute_map(term.atom, relation.attributes)
                        .items()}

        sequence = degree_sequence(relation,
                                   [attribute_of[v] for v in term.cond],
                                   [attribute_of[v] for v in term.target])
        values.append(lp_norm(sequence, term.p))

    return values


def _closed_form_check(database, family, p, cap):
    form = closed_form(family, p)
    values = closed_form_values(database, form)
    count = exact_join(database, form.query, cap).count

    name = family if p is None else f"{family}[p={p}]"

    return [InequalityCheck(name, float(count), form.evaluate(values))]


def _chain_coverage_checks(database, query, cap):
    catalog = true_statistics(database, query, kind=MAX_DEGREE)
    stats = instantiate_statistics(query, catalog).cover

    result = chain_bound(query, stats)
    count = exact_join(database, query, cap).count
    checks = [InequalityCheck(f"{CHAIN_COVERAGE}[bound]", float(count),
                              result.bound)]

    if "empty" in result.witness:
        return checks

    ordering = VariableOrdering(result.witness["order"])
    weights = result.witness["weights"]
    for var in query.variables:
        coverage = sum(weights.get(key, 0.0)
                       for stat, key in zip(stats, witness_keys(stats))
                       if covered_by(stat, var, ordering))
        checks.append(InequalityCheck(f"{CHAIN_COVERAGE}[{var}]", 1.0,
                                      coverage))

    return checks


def verify_inequalities(database, family, p=None, query=None,
                        cap=DEFAULT_ORACLE_CAP):
    """Evaluate one inequality family on a database.

    The closed forms compare the exact output size with their right-hand
    side at the true statistics. ``chain_coverage`` checks that the
    chain bound's weights cover every variable under its ordering, and
    that the bound is at least the output size.

    :param database: Relations R, S and T of the family's query, or of
        ``query`` for ``chain_coverage``.
    :type database: :class:`~pcebounds.catalog.Database`

    :param family: One of :data:`INEQUALITY_FAMILIES`.
    :type family: str

    :param p: The norm order of ``path3_lp``.

    :param query: The query of ``chain_coverage``, the triangle by
        default.
    :type query: :class:`~pcebounds.model.ConjunctiveQuery`, optional

    :rtype: list[:class:`InequalityCheck`]

    :raises ValueError: for an unknown family.
    """
    if family == CHAIN_COVERAGE:
        if query is None:
            query = parse_query(TRIANGLE_QUERY)
        checks = _chain_coverage_checks(database, query, cap)
    else:
        checks = _closed_form_check(database, family, p, cap)

    for check in checks:
        if not check.passed:
            logger.warning("Violated %s: %r > %r", check.name, check.lhs,
                           check.rhs)

    return checks
