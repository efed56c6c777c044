"""Running several bounds on one query and taking the smallest."""
import logging
from dataclasses import dataclass

from .bounds.cover import acyclic_chain_bound, agm_bound, bound_sketch, \
    chain_bound
from .bounds.dsb import dsb_for_query
from .bounds.instantiate import instantiate_statistics
from .bounds.polymatroid import polyb
from .config import DEFAULT_MAX_VARS
from .exceptions import MethodUnavailableError, PCEError
from .stats.predicates import NO_PREDICATE, NONE

logger = logging.getLogger(__name__)

METHODS = ("agm", "cb", "boundsketch", "polyb", "dsb")


@dataclass(frozen=True)
class MethodOutcome:
    """The bound of one method, or why there is none.

    :param method: The method name.
    :type method: str

    :param result: The bound, if the method succeeded.
    :type result: :class:`~pcebounds.bounds.result.BoundResult`

    :param reason: Why the method failed or does not apply.
    :type reason: str

    :param unavailable: True if the method does not apply to the query,
        as opposed to having failed.
    :type unavailable: bool
    """
    method: str
    result: object = None
    reason: str = None
    unavailable: bool = False

    @property
    def ok(self):

        return self.result is not None


@dataclass(frozen=True)
class Estimate:
    """The outcomes of every requested method on a query."""
    query: object
    outcomes: tuple

    @property
    def best(self):
        """The smallest bound, ties going to the first method."""
        best = None
        for outcome in self.outcomes:
            if outcome.ok and (best is None or outcome.result.log_bound
                               < best.result.log_bound):
                best = outcome

        return best

    @property
    def all_failed(self):

        return bool(self.outcomes) and self.best is None


def parse_methods(text):
    """Parse a comma separated method list; ``all`` selects every
    method.

    :raises ValueError: for unknown methods.
    """
    names = [name.strip().lower() for name in text.split(",") if name.strip()]
    if not names or names == ["all"]:
        return METHODS

    unknown = [name for name in names if name not in METHODS]
    if unknown:
        raise ValueError(f"Unknown methods {', '.join(unknown)}; choose "
                         f"from {', '.join(METHODS)}")

    return tuple(dict.fromkeys(names))


def run_method(method, query, catalog, stats, pred=NO_PREDICATE,
               group_by=None, max_vars=DEFAULT_MAX_VARS, lp_method="auto"):
    """Compute one bound.

    :param stats: The catalog's statistics instantiated on the query.
    :type stats:
        :class:`~pcebounds.bounds.instantiate.InstantiatedStatistics`

    :rtype: :class:`~pcebounds.bounds.result.BoundResult`

    :raises MethodUnavailableError: if the method does not apply.
    """
    if method == "agm":
        return agm_bound(query, stats.cover)
    if method == "cb":
        result = acyclic_chain_bound(query, stats.cover)
        if result is None:
            result = chain_bound(query, stats.cover, max_vars)
        return result
    if method == "boundsketch":
        return bound_sketch(query, stats.cover)
    if method == "polyb":
        return polyb(query, stats.constraints, group_by, lp_method)
    if method == "dsb":
        if pred.op != NONE:
            raise MethodUnavailableError("does not support predicates")
        return dsb_for_query(query, catalog)

    raise ValueError(f"Unknown method {method!r}")


def estimate(query, catalog, methods=METHODS, pred=NO_PREDICATE,
             group_by=None, max_vars=DEFAULT_MAX_VARS, lp_method="auto"):
    """Bound a query with several methods.

    Failures are recorded per method and never propagate; only schema
    errors of the query itself are raised.

    :param query: The query.
    :type query: :class:`~pcebounds.model.ConjunctiveQuery`

    :param catalog: The statistics.
    :type catalog: :class:`~pcebounds.catalog.StatisticsCatalog`

    :param methods: Method names from :data:`METHODS`.
    :type methods: iterable[str], optional

    :param pred: A filter on the relations.
    :type pred: :class:`~pcebounds.stats.predicates.PredicateExpr`

    :param group_by: Variables of a group-by; the polymatroid bound
        then bounds their projection.
    :type group_by: iterable[str], optional

    :rtype: :class:`Estimate`

    :raises SchemaError: for unbound relations or wrong arities.
    """
    stats = instantiate_statistics(query, catalog, pred)

    outcomes = []
    for method in methods:
        try:
            result = run_method(method, query, catalog, stats, pred,
                                group_by, max_vars, lp_method)
        except MethodUnavailableError as err:
            outcomes.append(MethodOutcome(method, reason=str(err),
                                          unavailable=True))
        except (PCEError, ValueError, ArithmeticError) as err:
            logger.warning("Method %s failed on %s: %s", method, query.name,
                           err)
            outcomes.append(MethodOutcome(method, reason=str(err)))
        else:
            logger.info("%s bound of %s: log %s", method, query.name,
                        result.log_bound)
            outcomes.append(MethodOutcome(method, result))

    return Estimate(query, tuple(outcomes))
