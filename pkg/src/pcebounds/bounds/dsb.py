"""The degree sequence bound of a two-way join.

For R(X,Y) joined with S(Y,Z), with a = deg_R(*|Y) and b = deg_S(*|Y),
``|R join S| <= sum_i a_i b_i``: the join is largest when values of
equal degree rank match. The bound stays valid when a is replaced by
a sequence whose cumulative sums dominate those of a, provided b is
non-increasing.
"""
import logging
import math

from ..exceptions import MethodUnavailableError, MissingStatisticError, \
    UnboundedBoundError
from ..stats.compress import cdf_dominates
from .result import BoundResult

logger = logging.getLogger(__name__)


def _runs(sequence):
    runs = getattr(sequence, "runs", None)
    if runs is not None:
        return list(runs)

    values, lengths = sequence.values

    return [(float(v), int(n)) for v, n in zip(values, lengths)]


def _is_non_increasing(sequence):

    return getattr(sequence, "is_non_increasing", True)


def rank_product(a, b):
    """``sum_i a_i b_i`` by rank, the shorter sequence padded with zeros.

    Runs are aligned by the intersection of their rank intervals, so
    compressed sequences are never expanded.

    :param a: A degree sequence, exact or compressed.
    :param b: A degree sequence, exact or compressed.

    :rtype: float
    """
    runs_a, runs_b = _runs(a), _runs(b)

    total = 0.0
    i = j = 0
    left_a = runs_a[0][1] if runs_a else 0
    left_b = runs_b[0][1] if runs_b else 0
    while i < len(runs_a) and j < len(runs_b):
        overlap = min(left_a, left_b)
        total += runs_a[i][0] * runs_b[j][0] * overlap

        left_a -= overlap
        left_b -= overlap
        if not left_a:
            i += 1
            left_a = runs_a[i][1] if i < len(runs_a) else 0
        if not left_b:
            j += 1
            left_b = runs_b[j][1] if j < len(runs_b) else 0

    return total


def _result(total, witness):
    log_bound = math.log(total) if total > 0 else -math.inf

    return BoundResult("dsb", log_bound, dict(witness, sum=total))


def dsb_join_bound(a, b):
    """The degree sequence bound from two non-increasing sequences.

    :param a: deg_R(*|Y), exact or compressed.
    :param b: deg_S(*|Y), exact or compressed.

    :rtype: :class:`~pcebounds.bounds.result.BoundResult`

    :raises ValueError: if a sequence is not non-increasing.
    """
    if not (_is_non_increasing(a) and _is_non_increasing(b)):
        raise ValueError("Sequences must be non-increasing; use "
                         "dsb_join_bound_compressed for CDF compressions")

    return _result(rank_product(a, b), {})


def dsb_join_bound_compressed(a, a_compressed, b):
    """The degree sequence bound with a replaced by a compression.

    Summation by parts gives ``sum a''_i b_i >= sum a_i b_i`` whenever
    the cumulative sums of a'' dominate those of a and b is
    non-increasing.

    :param a: The exact sequence a, used to check dominance.
    :param a_compressed: The compression a''.
    :param b: A non-increasing sequence b.

    :rtype: :class:`~pcebounds.bounds.result.BoundResult`

    :raises ValueError: if a'' does not dominate a or b is not
        non-increasing.
    """
    if not _is_non_increasing(b):
        raise ValueError("b must be non-increasing")
    if not cdf_dominates(a_compressed.cdf(), a.cdf()):
        raise ValueError("The compressed CDF does not dominate the source")

    return _result(rank_product(a_compressed, b), {"compressed": "a"})


def dsb_join_bound_pair(a_compressed, b_compressed):
    """The degree sequence bound from two certified compressions.

    With b'' non-increasing, ``sum a''b'' >= sum a b'' >= sum a b``,
    applying summation by parts once per side; symmetrically when a''
    is non-increasing.

    :param a_compressed: A compression of deg_R(*|Y) whose CDF was
        checked to dominate the source.
    :type a_compressed:
        :class:`~pcebounds.stats.compress.CompressedDegreeSequence`

    :param b_compressed: Likewise for deg_S(*|Y).
    :type b_compressed:
        :class:`~pcebounds.stats.compress.CompressedDegreeSequence`

    :rtype: :class:`~pcebounds.bounds.result.BoundResult`

    :raises UnboundedBoundError: if a compression is not certified or
        neither is non-increasing.
    """
    for name, sequence in (("a", a_compressed), ("b", b_compressed)):
        if not sequence.certified:
            raise UnboundedBoundError(f"Compressed sequence {name} has no "
                                      "dominance certificate")

    if not (a_compressed.is_non_increasing
            or b_compressed.is_non_increasing):
        raise UnboundedBoundError("Neither compressed sequence is "
                                  "non-increasing")

    return _result(rank_product(a_compressed, b_compressed),
                   {"compressed": "ab"})


def _relation_size(catalog, relation):
    schema = catalog.schemas[relation]
    size = catalog.lookup(relation, (), schema, 1)
    if size is None:
        raise MissingStatisticError(f"No cardinality of {relation}")

    return size


def dsb_for_query(query, catalog):
    """The degree sequence bound of a two-atom query from the
    catalog's stored sequences.

    The join key is the set of shared variables; without shared
    variables the bound is the product of the cardinalities.

    :rtype: :class:`~pcebounds.bounds.result.BoundResult`

    :raises MethodUnavailableError: unless the query has two atoms.
    :raises MissingStatisticError: if a sequence is not stored.
    """
    if len(query.atoms) != 2:
        raise MethodUnavailableError("requires 2-atom query")

    query.check_schemas(catalog.schemas)
    shared = query.atoms[0].variables & query.atoms[1].variables

    if not shared:
        sizes = [_relation_size(catalog, atom.relation)
                 for atom in query.atoms]
        return _result(sizes[0] * sizes[1], {"key": ()})

    sequences = []
    for j, atom in enumerate(query.atoms):
        schema = catalog.schemas[atom.relation]
        mapping = query.atom_attribute_map(j, schema)
        key = [attr for attr in schema if mapping[attr] in shared]

        entry = catalog.sequence(atom.relation, key, schema)
        if entry is None:
            raise MissingStatisticError(
                f"No stored sequence deg_{atom.relation}(*|"
                f"{','.join(key)})")
        sequences.append(entry.sequence)

    a, b = sequences
    if a.lossless and b.lossless:
        result = dsb_join_bound(a, b)
    else:
        result = dsb_join_bound_pair(a, b)

    logger.debug("Degree sequence bound of %s: %d and %d runs", query.name,
                 len(a.runs), len(b.runs))

    return BoundResult("dsb", result.log_bound,
                       dict(result.witness, key=tuple(sorted(shared))))
