"""Cover bounds: the AGM bound, the chain bound, BoundSketch and the
chain bound of acyclic statistics.

All of them bound ``|Q|`` by a product of max-degree statistics whose
weights cover every variable. They work in natural log space.
"""
import logging
import math
from collections import Counter

from sympy import oo

from ..config import BOUNDSKETCH_MAX_VARS, DEFAULT_MAX_VARS
from ..exceptions import LinearProgramError, MissingStatisticError, \
    UnboundedBoundError
from ..lp import GE, LinearProgram, Status, solve
from ..model import VariableOrdering, statistics_topological_order
from ..utils import from_mask, to_mask
from .result import BoundResult, empty_result

logger = logging.getLogger(__name__)

# Path costs closer than this count as ties
TIE_TOLERANCE = 1e-12


def _max_degree_statistics(stats):

    return [stat for stat in stats if stat.p is oo or not stat.cond]


def _empty_label(stats):
    for stat in stats:
        if stat.log_value == -math.inf:
            return stat.label

    return None


def covered_by(stat, var, ordering):
    """Test ``var`` in_pi ``(V|U)``, or plain membership in V without an
    ordering."""
    if ordering is None:
        return var in stat.target

    return ordering.covers(var, stat.target, stat.cond)


def _solve_cover(variables, stats, ordering, method):
    """Minimize sum w_i log d_i over weights covering every variable."""
    lp = LinearProgram(len(stats), [stat.log_value for stat in stats])

    for var in variables:
        lp.add_constraint({i: 1.0 for i, stat in enumerate(stats)
                           if covered_by(stat, var, ordering)}, GE, 1.0)

    result = solve(lp, method)
    if result.status is Status.INFEASIBLE:
        return None
    if not result.optimal:
        raise LinearProgramError(f"Cover LP {result.status.value}")

    return result


def witness_keys(stats):
    """The key of each statistic in a witness.

    A statistic is keyed by its label. Statistics sharing a label, such
    as those of repeated atoms in a self-join, get their atom index
    appended.

    :rtype: list[str]
    """
    counts = Counter(stat.label for stat in stats)

    return [stat.label if counts[stat.label] == 1
            else f"{stat.label} [atom {stat.atom}]" for stat in stats]


def _cover_witness(stats, weights, ordering=None):
    witness = {"weights": {key: float(w)
                           for key, w in zip(witness_keys(stats), weights)
                           if w > 0}}
    if ordering is not None:
        witness["order"] = ordering.pi

    return witness


def evaluate_cover_witness(stats, witness):
    """Recompute ``sum w_i log d_i`` from a cover witness."""
    logs = {stat.label: stat.log_value for stat in stats}
    logs.update(zip(witness_keys(stats),
                    (stat.log_value for stat in stats)))

    return sum(w * logs[label] for label, w in witness["weights"].items())


def agm_bound(query, stats, method="simplex"):
    """The AGM bound: the smallest ``prod |R_j|^w_j`` over fractional
    edge covers w.

    :param query: The query.
    :type query: :class:`~pcebounds.model.ConjunctiveQuery`

    :param stats: Cover statistics; only the cardinality of each atom
        (empty U, V all of the atom's variables) is used.
    :type stats: list[:class:`~pcebounds.bounds.instantiate.CoverStatistic`]

    :rtype: :class:`~pcebounds.bounds.result.BoundResult`

    :raises MissingStatisticError: if an atom has no cardinality.
    """
    cardinalities = []
    for j, atom in enumerate(query.atoms):
        candidates = [stat for stat in stats
                      if stat.atom == j and not stat.cond
                      and stat.target == atom.variables]
        if not candidates:
            raise MissingStatisticError(f"No cardinality of {atom}")
        cardinalities.append(min(candidates, key=lambda s: s.log_value))

    label = _empty_label(cardinalities)
    if label is not None:
        return empty_result("agm", label)

    result = _solve_cover(query.variables, cardinalities, None, method)

    return BoundResult("agm", result.value,
                       _cover_witness(cardinalities, result.point))


def _coverable_orderings(variables, stats):
    """Orderings in which every variable is covered by some statistic,
    pruned at the first uncoverable prefix."""
    variables = list(variables)

    def extend(prefix, placed):
        if len(prefix) == len(variables):
            yield tuple(prefix)
            return

        for var in variables:
            if var in placed:
                continue
            if not any(var in stat.target and stat.cond <= placed
                       for stat in stats):
                continue
            prefix.append(var)
            yield from extend(prefix, placed | {var})
            prefix.pop()

    yield from extend([], frozenset())


def chain_bound(query, stats, max_vars=DEFAULT_MAX_VARS, method="simplex"):
    """The chain bound: the smallest cover product over all variable
    orderings.

    Under an ordering, a statistic deg(V|U) covers X if X is in V and
    all of U precedes X. Orderings with equal coverage share one LP.

    :param query: The query.
    :type query: :class:`~pcebounds.model.ConjunctiveQuery`

    :param stats: The cover statistics; those with finite p and
        non-empty U are ignored.
    :type stats: list[:class:`~pcebounds.bounds.instantiate.CoverStatistic`]

    :param max_vars: Largest number of variables to enumerate
        orderings for.
    :type max_vars: int, optional

    :rtype: :class:`~pcebounds.bounds.result.BoundResult`

    :raises ValueError: if the query has more than ``max_vars``
        variables.
    :raises UnboundedBoundError: if no ordering covers every variable.
    """
    variables = query.variables
    if len(variables) > max_vars:
        raise ValueError(f"Chain bound enumerates orderings of at most "
                         f"{max_vars} variables, {query.name} has "
                         f"{len(variables)}")

    stats = _max_degree_statistics(stats)
    label = _empty_label(stats)
    if label is not None:
        return empty_result("cb", label)

    best = None
    solved = {}
    for pi in _coverable_orderings(variables, stats):
        ordering = VariableOrdering(pi)
        signature = tuple(frozenset(i for i, stat in enumerate(stats)
                                    if covered_by(stat, var, ordering))
                          for var in variables)
        if signature in solved:
            continue

        result = _solve_cover(variables, stats, ordering, method)
        solved[signature] = result
        if result is not None and (best is None or result.value
                                   < best[0].value - TIE_TOLERANCE):
            best = (result, ordering)

    logger.debug("Chain bound of %s: %d distinct coverings", query.name,
                 len(solved))

    if best is None:
        raise UnboundedBoundError(f"The statistics do not cover every "
                                  f"variable of {query.name}")

    result, ordering = best

    return BoundResult("cb", result.value,
                       _cover_witness(stats, result.point, ordering))


def bound_sketch(query, stats):
    """BoundSketch: the cheapest chain of statistics extending a
    variable set W to all variables, each step W -> W u V using some
    deg(V|U) with U contained in W and costing its log.

    This is a shortest path over the subset lattice. Ties go to the
    lexicographically smallest sequence of subsets.

    :rtype: :class:`~pcebounds.bounds.result.BoundResult`

    :raises ValueError: for more than 20 variables.
    :raises UnboundedBoundError: if all variables are unreachable.
    """
    variables = list(query.variables)
    if len(variables) > BOUNDSKETCH_MAX_VARS:
        raise ValueError(f"BoundSketch supports at most "
                         f"{BOUNDSKETCH_MAX_VARS} variables")

    stats = _max_degree_statistics(stats)
    label = _empty_label(stats)
    if label is not None:
        return empty_result("boundsketch", label)

    index = {var: i for i, var in enumerate(variables)}
    edges = [(to_mask(stat.cond, index), to_mask(stat.target, index), stat,
              key)
             for stat, key in zip(stats, witness_keys(stats))]
    goal = (1 << len(variables)) - 1

    # mask -> (cost, node sequence, keys of the statistics used)
    best = {0: (0.0, (0,), ())}
    for mask in range(goal + 1):
        if mask not in best:
            continue
        cost, nodes, used = best[mask]

        for cond, target, stat, key in edges:
            if cond & ~mask or not target & ~mask:
                continue
            new_mask = mask | target
            candidate = (cost + stat.log_value, nodes + (new_mask,),
                         used + (key,))

            current = best.get(new_mask)
            if (current is None
                    or candidate[0] < current[0] - TIE_TOLERANCE
                    or (candidate[0] <= current[0] + TIE_TOLERANCE
                        and candidate[1] < current[1])):
                best[new_mask] = candidate

    if goal not in best:
        raise UnboundedBoundError(f"The statistics do not cover every "
                                  f"variable of {query.name}")

    cost, nodes, used = best[goal]
    path = [{"statistic": key,
             "from": from_mask(before, variables),
             "to": from_mask(after, variables)}
            for key, before, after in zip(used, nodes, nodes[1:])]

    return BoundResult("boundsketch", cost,
                       {"path": path,
                        "weights": {key: 1.0 for key in used}})


def acyclic_chain_bound(query, stats, method="simplex"):
    """The chain bound for statistics without a dependency cycle.

    A topological order of the statistics, where every U precedes its
    V, is optimal for the chain bound, so a single LP suffices.

    :return: The bound, or ``None`` if the statistics are cyclic or
        leave some variable uncovered; :func:`chain_bound` then decides.
    :rtype: :class:`~pcebounds.bounds.result.BoundResult` or None
    """
    stats = _max_degree_statistics(stats)

    ordering = statistics_topological_order(
        [(stat.target, stat.cond) for stat in stats], query.variables)
    if ordering is None:
        return None

    label = _empty_label(stats)
    if label is not None:
        return empty_result("cb", label)

    result = _solve_cover(query.variables, stats, ordering, method)
    if result is None:
        return None

    return BoundResult("cb", result.value,
                       _cover_witness(stats, result.point, ordering))
