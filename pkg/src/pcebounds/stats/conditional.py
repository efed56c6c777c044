"""Conditional statistics: most common values, common values and
equi-depth histogram buckets."""
import logging
from collections import defaultdict

from ..model import Relation
from ..utils import value_key
from .degree import degree_sequence, lp_norm
from .entries import (BUCKET, COMMON, MCV, PER_VALUE, WHOLE, Condition,
                      StatEntry)

logger = logging.getLogger(__name__)


def _norms(relation, cond, target, norms):
    sequence = degree_sequence(relation, cond, target)

    return [lp_norm(sequence, p) for p in norms]


def equi_depth_buckets(values, frequencies, buckets):
    """Split sorted values into buckets of roughly equal tuple counts.

    :param values: The distinct values, sorted.
    :type values: list

    :param frequencies: The tuple count of every value.
    :type frequencies: dict

    :param buckets: The maximum number of buckets.
    :type buckets: int

    :return: The values of every non-empty bucket, in order.
    :rtype: list[list]
    """
    if not values or buckets == 0:
        return []

    total = sum(frequencies[v] for v in values)
    depth = total / min(buckets, len(values))

    groups = [[]]
    filled = 0
    for value in values:
        if groups[-1] and filled >= depth * len(groups):
            groups.append([])
        groups[-1].append(value)
        filled += frequencies[value]

    return groups


def build_conditional_stats(relation, cond_attr, cond, target, norms,
                            mcv_count=0, buckets=0):
    """Norms of deg(V|U) restricted to values of one attribute A.

    For the ``mcv_count`` most frequent values a (ties broken by value
    order) the norms of deg_{sigma_{A=a}(R)}(V|U) are stored. The
    common entry holds the largest such norm over all other values.
    Those other values are also split into equi-depth buckets, each
    storing the largest per-value norm and the norm over the whole
    bucket.

    :param relation: The relation.
    :type relation: :class:`~pcebounds.model.Relation`

    :param cond_attr: The attribute A the predicates refer to.
    :type cond_attr: str

    :param cond: The conditioning attributes U.
    :type cond: iterable[str]

    :param target: The target attributes V.
    :type target: iterable[str]

    :param norms: The norm orders to compute.
    :type norms: iterable

    :param mcv_count: How many most common values to keep.
    :type mcv_count: int, optional

    :param buckets: The number of histogram buckets.
    :type buckets: int, optional

    :rtype: list[:class:`~pcebounds.stats.entries.StatEntry`]

    :raises ValueError: for negative counts.
    """
    if mcv_count < 0:
        raise ValueError("mcv_count must be non-negative")
    if buckets < 0:
        raise ValueError("buckets must be non-negative")

    norms = list(norms)
    cond = tuple(cond)
    target = tuple(target)
    (position,) = relation.positions(cond_attr)
    # Validates U and V up front
    relation.positions(cond + target)

    rows_by_value = defaultdict(list)
    for row in relation.tuples:
        rows_by_value[row[position]].append(row)

    def restricted(values):
        rows = frozenset(row for v in values for row in rows_by_value[v])
        return Relation(relation.name, relation.attributes, rows)

    by_frequency = sorted(rows_by_value,
                          key=lambda v: (-len(rows_by_value[v]),
                                         value_key(v)))
    mcvs = by_frequency[:mcv_count]
    others = sorted(by_frequency[mcv_count:], key=value_key)

    entries = []

    def add(values, condition):
        for p, value in zip(norms, values):
            entries.append(StatEntry(relation.name, cond, target, p, value,
                                     condition))

    for value in mcvs:
        add(_norms(restricted([value]), cond, target, norms),
            Condition(MCV, cond_attr, value=value))

    per_value = {value: _norms(restricted([value]), cond, target, norms)
                 for value in others}

    common = [max((per_value[v][i] for v in others), default=0.0)
              for i in range(len(norms))]
    add(common, Condition(COMMON, cond_attr))

    frequencies = {v: len(rows_by_value[v]) for v in others}
    for group in equi_depth_buckets(others, frequencies, buckets):
        lo, hi = group[0], group[-1]

        largest = [max(per_value[v][i] for v in group)
                   for i in range(len(norms))]
        add(largest, Condition(BUCKET, cond_attr, lo=lo, hi=hi,
                               scope=PER_VALUE))

        whole = _norms(restricted(group), cond, target, norms)
        add(whole, Condition(BUCKET, cond_attr, lo=lo, hi=hi, scope=WHOLE))

    logger.debug("%d conditional statistics on %s.%s", len(entries),
                 relation.name, cond_attr)

    return entries
