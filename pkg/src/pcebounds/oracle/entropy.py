"""Entropies of the uniform distribution on a query output, and the
norm constraints they must satisfy."""
import math
from collections import Counter
from dataclasses import dataclass

import numpy as np
from scipy.stats import entropy
from sympy import oo

from ..bounds.polymatroid import EntropyVector
from ..config import DEFAULT_ORACLE_CAP, norm_order
from ..stats.degree import degree_sequence, log_lp_norm
from ..utils import iter_wrapper, to_mask
from .join import exact_join

# Slack below this counts as a violation
NORM_TOLERANCE = 1e-9


def marginal_entropy(rows, positions):
    """Entropy of the projection of uniform rows on some columns."""
    counts = Counter(tuple(row[i] for i in positions) for row in rows)

    return float(entropy(np.fromiter(counts.values(), dtype=float)))


def entropy_vector(variables, rows):
    """The entropic vector of the uniform distribution on some rows.

    ``h(W)`` is the entropy, in nats, of the projection of the rows on
    W. The entropy of all variables is set to ``log(len(rows))``
    exactly.

    :param variables: The columns of the rows.
    :type variables: tuple[str, ...]

    :param rows: Distinct rows.
    :type rows: collection[tuple]

    :rtype: :class:`~pcebounds.bounds.polymatroid.EntropyVector`

    :raises ValueError: if there are no rows.
    """
    rows = list(rows)
    if not rows:
        raise ValueError("The entropy of an empty output is undefined")

    n = len(variables)
    values = [0.0] * (1 << n)
    for mask in range(1, 1 << n):
        positions = [i for i in range(n) if mask >> i & 1]
        values[mask] = marginal_entropy(rows, positions)
    values[-1] = math.log(len(rows))

    return EntropyVector(tuple(variables), tuple(values))


def empirical_entropy(database, query, subsets=None,
                      cap=DEFAULT_ORACLE_CAP):
    """Entropies of the uniform distribution on a query output.

    :param subsets: Variable sets to compute; by default the whole
        vector.
    :type subsets: iterable[iterable[str]], optional

    :return: The entropic vector, or h by subset when ``subsets`` is
        given.
    :rtype: :class:`~pcebounds.bounds.polymatroid.EntropyVector` or
        dict[frozenset, float]

    :raises ValueError: if the output is empty.
    :raises OracleCapError: if evaluation exceeds the cap.
    """
    result = exact_join(database, query, cap, materialize=True)
    if subsets is None:
        return entropy_vector(result.variables, result.tuples)

    if not result.count:
        raise ValueError("The entropy of an empty output is undefined")

    index = {var: i for i, var in enumerate(result.variables)}
    entropies = {}
    for subset in subsets:
        subset = frozenset(iter_wrapper(subset))
        mask = to_mask(subset, index)
        if mask == (1 << len(index)) - 1:
            entropies[subset] = math.log(result.count)
        else:
            entropies[subset] = marginal_entropy(
                result.tuples, [index[var] for var in sorted(
                    subset, key=index.get)])

    return entropies


@dataclass(frozen=True)
class NormCheck:
    """Both sides of ``(1/p) h(U) + h(V|U) <= log ||deg(V|U)||_p``."""
    lhs: float
    rhs: float

    @property
    def slack(self):

        return self.rhs - self.lhs

    @property
    def holds(self):

        return self.slack >= -NORM_TOLERANCE


def verify_norm_constraint(database, relation, cond, target, p, query=None,
                           atom=None, entropies=None):
    """Check the entropy constraint of one statistic of a relation.

    Without a query the distribution is uniform on the relation itself,
    over its attributes. With a query it is uniform on the query output
    and the attributes are read through the atom's variables; the
    output projected on an atom lies in its relation.

    :param database: The relations.
    :type database: :class:`~pcebounds.catalog.Database`

    :param relation: The relation the statistic is computed on.
    :type relation: :class:`~pcebounds.model.Relation`

    :param cond: The conditioning attributes U.
    :param target: The target attributes V.
    :param p: The norm order.

    :param query: The query whose output carries the distribution.
    :type query: :class:`~pcebounds.model.ConjunctiveQuery`, optional

    :param atom: Index of the query atom over ``relation``.
    :type atom: int, optional

    :param entropies: A precomputed entropic vector of the distribution.
    :type entropies: :class:`~pcebounds.bounds.polymatroid.EntropyVector`

    :rtype: :class:`NormCheck`

    :raises ValueError: if the relation, or the query output, is empty.
    """
    p = norm_order(p)
    cond = tuple(dict.fromkeys(iter_wrapper(cond)))
    target = tuple(attr for attr in dict.fromkeys(iter_wrapper(target))
                   if attr not in cond)

    if query is None:
        mapping = {attr: attr for attr in relation.attributes}
        if entropies is None:
            entropies = entropy_vector(relation.attributes, relation.tuples)
    else:
        mapping = query.atom_attribute_map(atom, relation.attributes)
        if entropies is None:
            entropies = empirical_entropy(database, query)

    cond_vars = {mapping[attr] for attr in cond}
    target_vars = {mapping[attr] for attr in target}

    weight = 0.0 if p is oo else 1.0 / float(p)
    lhs = weight * entropies[cond_vars] \
        + entropies.conditional(target_vars, cond_vars)
    rhs = log_lp_norm(degree_sequence(relation, cond, target), p)

    return NormCheck(lhs, rhs)
