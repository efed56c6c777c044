"""Degree sequences and their lp-norms."""
import math
from collections import Counter
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp
from sympy import oo

from ..config import norm_order
from ..utils import iter_wrapper


@dataclass(frozen=True)
class DegreeSequence:
    """The sorted degree vector deg_R(V|U).

    :param relation: Name of the relation the sequence was computed on.
    :type relation: str

    :param cond: The conditioning attributes U.
    :type cond: tuple[str, ...]

    :param target: The target attributes V, without those in U.
    :type target: tuple[str, ...]

    :param degrees: The degrees, sorted non-increasing, all positive.
    :type degrees: tuple[int, ...]
    """
    relation: str
    cond: tuple
    target: tuple
    degrees: tuple

    def __post_init__(self):
        degrees = tuple(int(d) for d in self.degrees)

        if any(d < 1 for d in degrees):
            raise ValueError("Degrees must be positive")
        if any(d1 < d2 for d1, d2 in zip(degrees, degrees[1:])):
            raise ValueError("Degrees must be sorted non-increasing")

        object.__setattr__(self, "degrees", degrees)

    def __len__(self):

        return len(self.degrees)

    @property
    def values(self):
        """Distinct degree values with their multiplicities, as arrays."""
        counts = Counter(self.degrees)
        values = sorted(counts, reverse=True)

        return (np.array(values, dtype=float),
                np.array([counts[v] for v in values], dtype=float))

    def cdf(self):
        """Cumulative sums A_i of the degrees."""
        return np.cumsum(np.array(self.degrees, dtype=float))


def degree_sequence(relation, cond, target):
    """Compute deg_R(V|U): group sizes of the projection on U and V,
    grouped by U, sorted non-increasing.

    Since deg_R(V|U) = deg_R(UV|U), attributes of U in V are ignored.
    With empty U the result is the single degree ``|Pi_V(R)|``.

    :param relation: The relation.
    :type relation: :class:`~pcebounds.model.Relation`

    :param cond: The conditioning attributes U.
    :type cond: iterable[str]

    :param target: The target attributes V.
    :type target: iterable[str]

    :rtype: :class:`DegreeSequence`

    :raises SchemaError: for unknown attributes.
    """
    cond = tuple(dict.fromkeys(iter_wrapper(cond)))
    target = tuple(attr for attr in dict.fromkeys(iter_wrapper(target))
                   if attr not in cond)

    cond_positions = relation.positions(cond)
    all_positions = cond_positions + relation.positions(target)

    # Group sizes of the projection, keyed by the U-part
    projection = {tuple(row[i] for i in all_positions)
                  for row in relation.tuples}
    groups = Counter(row[:len(cond_positions)] for row in projection)

    degrees = sorted(groups.values(), reverse=True)

    return DegreeSequence(relation.name, cond, target, tuple(degrees))


def log_lp_norm(sequence, p):
    """Natural log of the lp-norm, computed in log-space.

    :return: ``-inf`` for an empty or all-zero sequence.
    :rtype: float
    """
    p = norm_order(p)
    values, lengths = sequence.values

    positive = values > 0
    if not positive.any():
        return -math.inf

    if p is oo:
        return math.log(values[positive].max())

    p = float(p)
    log_values = np.log(values[positive])

    return float(logsumexp(p * log_values, b=lengths[positive])) / p


def lp_norm(sequence, p):
    """The lp-norm ``(d1^p + ... + dn^p)^(1/p)`` of a degree sequence.

    ``p = oo`` gives the maximum degree and ``p = 1`` the exact sum.

    :param sequence: The sequence, exact or compressed.
    :type sequence: :class:`DegreeSequence` or
        :class:`~pcebounds.stats.compress.CompressedDegreeSequence`

    :param p: The norm order, positive rational or ``oo``.

    :rtype: float

    :raises ValueError: if ``p <= 0``.
    """
    p = norm_order(p)
    values, lengths = sequence.values

    if p == 1:
        return float(np.dot(values, lengths))
    if p is oo:
        return float(values.max()) if len(values) else 0.0

    log_norm = log_lp_norm(sequence, p)

    return math.exp(log_norm) if log_norm > -math.inf else 0.0
