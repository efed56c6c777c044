"""Statistics of a catalog instantiated on the atoms of a query.

A relation's statistic deg_R(V|U) becomes, for every atom over R, a
statistic on the variables at the positions of U and V. Self-joins
therefore get one copy per atom.
"""
import logging
import math
from dataclasses import dataclass

from sympy import oo

from ..config import norm_order
from ..exceptions import PredicateError
from ..stats.predicates import NO_PREDICATE, NONE, restrict_predicate, \
    select_stat
from ..utils import iter_wrapper

logger = logging.getLogger(__name__)


def log_statistic(value):
    """Natural log of a statistic value.

    Zero maps to ``-inf``. Norms of non-empty degree sequences are at
    least 1, so values in (0, 1) are raised to 1.
    """
    if value <= 0:
        return -math.inf

    return max(0.0, math.log(value))


@dataclass(frozen=True)
class NormConstraint:
    """The entropy constraint ``(1/p) h(U) + h(V|U) <= log_norm`` of a
    statistic ``||deg(V|U)||_p``, over query variables."""
    cond: frozenset
    target: frozenset
    p: object
    log_norm: float
    label: str = ""

    def __post_init__(self):
        cond = frozenset(iter_wrapper(self.cond))
        object.__setattr__(self, "cond", cond)
        object.__setattr__(self, "target",
                           frozenset(iter_wrapper(self.target)) - cond)
        object.__setattr__(self, "p", norm_order(self.p))
        object.__setattr__(self, "log_norm", float(self.log_norm))

    @property
    def variables(self):

        return self.cond | self.target


@dataclass(frozen=True)
class CoverStatistic:
    """A max-degree statistic ``||deg(V|U)||_inf`` of one atom.

    Cardinalities, and any statistic with empty U, are max-degree
    statistics of a sequence with a single element.
    """
    atom: int
    cond: frozenset
    target: frozenset
    log_value: float
    label: str = ""
    p: object = oo

    def __post_init__(self):
        cond = frozenset(iter_wrapper(self.cond))
        object.__setattr__(self, "cond", cond)
        object.__setattr__(self, "target",
                           frozenset(iter_wrapper(self.target)) - cond)
        object.__setattr__(self, "log_value", float(self.log_value))


@dataclass(frozen=True)
class InstantiatedStatistics:
    """Statistics of a query in the forms the bounds consume."""
    constraints: tuple = ()
    cover: tuple = ()

    def empty_label(self):
        """The label of a zero statistic, if any."""
        for stat in self.constraints + self.cover:
            log_value = getattr(stat, "log_norm", None)
            if log_value is None:
                log_value = stat.log_value
            if log_value == -math.inf:
                return stat.label

        return None


def _add_min(table, key, stat, log_value):
    current = table.get(key)
    if current is None or log_value < current[0]:
        table[key] = (log_value, stat)


def instantiate_statistics(query, catalog, pred=NO_PREDICATE):
    """Map the catalog's global statistics onto a query's atoms.

    With a predicate, every value is replaced by :func:`select_stat` on
    the part of the predicate the atom's relation can answer. Where the
    predicate cannot be combined for a norm order the unfiltered value
    is kept, which is still an upper bound.

    :param query: The query.
    :type query: :class:`~pcebounds.model.ConjunctiveQuery`

    :param catalog: The statistics.
    :type catalog: :class:`~pcebounds.catalog.StatisticsCatalog`

    :param pred: A filter on the relations.
    :type pred: :class:`~pcebounds.stats.predicates.PredicateExpr`

    :rtype: :class:`InstantiatedStatistics`

    :raises SchemaError: for unbound relations or wrong arities.
    """
    query.check_schemas(catalog.schemas)

    constraints = {}
    cover = {}

    for j, atom in enumerate(query.atoms):
        attributes = catalog.schemas[atom.relation]
        mapping = query.atom_attribute_map(j, attributes)
        restricted = restrict_predicate(pred, atom.relation, attributes)

        for entry in catalog.global_entries(atom.relation):
            value = entry.value
            if restricted.op != NONE:
                try:
                    value = select_stat(catalog, atom.relation, entry.cond,
                                        entry.target, entry.p, restricted)
                except PredicateError as err:
                    logger.debug("Keeping unfiltered %s: %s",
                                 entry.describe(), err)

            cond = frozenset(mapping[attr] for attr in entry.cond)
            target = frozenset(mapping[attr] for attr in entry.target)
            log_value = log_statistic(value)
            label = f"{atom}: {entry.describe()}"

            _add_min(constraints, (cond, target, entry.p),
                     NormConstraint(cond, target, entry.p, log_value, label),
                     log_value)

            if entry.p is oo or not cond:
                _add_min(cover, (j, cond, target),
                         CoverStatistic(j, cond, target, log_value, label,
                                        entry.p),
                         log_value)

    logger.debug("Instantiated %d norm constraints and %d cover statistics "
                 "for %s", len(constraints), len(cover), query.name)

    return InstantiatedStatistics(
        tuple(stat for _, stat in constraints.values()),
        tuple(stat for _, stat in cover.values()))


def cardinality_statistics(query, sizes):
    """Cover statistics holding only the atoms' cardinalities.

    :param sizes: One relation size per atom.
    :type sizes: list[float]

    :rtype: list[:class:`CoverStatistic`]
    """
    return [CoverStatistic(j, (), atom.args, log_statistic(size),
                           f"|{atom}|")
            for j, (atom, size) in enumerate(zip(query.atoms, sizes))]


def norm_constraint(cond, target, p, value, label=""):
    """A :class:`NormConstraint` from a linear-scale norm value."""
    return NormConstraint(cond, target, p, log_statistic(value), label)
