import math

import pytest

from pcebounds.bounds import (CoverStatistic, acyclic_chain_bound, agm_bound,
                              bound_sketch, cardinality_statistics,
                              chain_bound, evaluate_cover_witness,
                              witness_keys)
from pcebounds.exceptions import MissingStatisticError, UnboundedBoundError
from pcebounds.model import parse_query

J2 = parse_query("J2(X,Y,Z) :- R(X,Y), S(Y,Z).")
C3 = parse_query("C3(X,Y,Z) :- R(X,Y), S(Y,Z), T(Z,X).")


def _stat(atom, cond, target, value, label):

    return CoverStatistic(atom, cond, target, math.log(value), label)


@pytest.fixture
def j2_stats():
    """|R| = |S| = 8 and max deg_S(Z|Y) = 2."""
    return cardinality_statistics(J2, [8, 8]) + [
        _stat(1, "Y", "Z", 2, "deg_S(Z|Y)")]


def test_agm_of_a_triangle():
    result = agm_bound(C3, cardinality_statistics(C3, [4, 4, 4]))

    assert result.method == "agm"
    assert result.bound == pytest.approx(8.0)
    assert sorted(result.witness["weights"].values()) == \
        pytest.approx([0.5, 0.5, 0.5])


def test_agm_of_a_join():

    assert agm_bound(J2, cardinality_statistics(J2, [8, 8])).bound == \
        pytest.approx(64.0)


def test_agm_ignores_degree_statistics(j2_stats):

    assert agm_bound(J2, j2_stats).bound == pytest.approx(64.0)


def test_agm_needs_every_cardinality():
    with pytest.raises(MissingStatisticError):
        agm_bound(J2, cardinality_statistics(J2, [8, 8])[:1])


def test_chain_bound_uses_degrees(j2_stats):
    result = chain_bound(J2, j2_stats)

    assert result.bound == pytest.approx(16.0)
    assert result.witness["order"].index("Y") < \
        result.witness["order"].index("Z")
    assert evaluate_cover_witness(j2_stats, result.witness) == \
        pytest.approx(result.log_bound)


def test_chain_bound_with_cardinalities_is_agm():
    stats = cardinality_statistics(C3, [4, 4, 4])

    assert chain_bound(C3, stats).log_bound == \
        pytest.approx(agm_bound(C3, stats).log_bound)


def test_chain_bound_limits_variables(j2_stats):
    with pytest.raises(ValueError):
        chain_bound(J2, j2_stats, max_vars=2)


def test_uncovered_variable():
    stats = cardinality_statistics(J2, [8, 8])[:1]

    with pytest.raises(UnboundedBoundError):
        chain_bound(J2, stats)
    with pytest.raises(UnboundedBoundError):
        bound_sketch(J2, stats)
    # Left to the ordering search, which reports the failure
    assert acyclic_chain_bound(J2, stats) is None


def test_empty_statistic_forces_zero(j2_stats):
    stats = j2_stats + [CoverStatistic(0, (), "X", -math.inf, "|R.X|")]

    for bound in (chain_bound, bound_sketch):
        result = bound(J2, stats)
        assert result.bound == 0.0
        assert result.witness == {"empty": "|R.X|"}


def test_bound_sketch_path(j2_stats):
    result = bound_sketch(J2, j2_stats)

    assert result.bound == pytest.approx(16.0)
    assert [step["statistic"] for step in result.witness["path"]] == \
        ["|R(X,Y)|", "deg_S(Z|Y)"]
    assert result.witness["path"][-1]["to"] == ("X", "Y", "Z")


def test_bound_sketch_is_above_the_chain_bound():
    stats = cardinality_statistics(C3, [4, 4, 4])

    assert bound_sketch(C3, stats).bound == pytest.approx(16.0)
    assert chain_bound(C3, stats).bound == pytest.approx(8.0)


def test_acyclic_chain_bound(j2_stats):
    result = acyclic_chain_bound(J2, j2_stats)

    assert result.bound == pytest.approx(16.0)
    assert result.witness["order"] == ("X", "Y", "Z")


def test_cyclic_statistics_have_no_acyclic_bound():
    stats = [_stat(0, "X", "Y", 2, "deg_R(Y|X)"),
             _stat(0, "Y", "X", 2, "deg_R(X|Y)"),
             _stat(1, "Y", "Z", 2, "deg_S(Z|Y)")]

    assert acyclic_chain_bound(J2, stats) is None


def test_repeated_labels_stay_apart_in_witnesses():
    query = parse_query("Q(X,Y,Z) :- E(X,Y), E(Y,Z).")
    stats = [_stat(0, (), ("X", "Y"), 8, "|E|"),
             _stat(1, (), ("Y", "Z"), 8, "|E|")]
    keys = ["|E| [atom 0]", "|E| [atom 1]"]

    assert witness_keys(stats) == keys
    for bound in (agm_bound, chain_bound, acyclic_chain_bound):
        result = bound(query, stats)
        assert result.witness["weights"] == pytest.approx(
            {key: 1.0 for key in keys})
        assert evaluate_cover_witness(stats, result.witness) == \
            pytest.approx(math.log(64))

    result = bound_sketch(query, stats)
    assert [step["statistic"] for step in result.witness["path"]] == keys


def test_unique_labels_are_witness_keys(j2_stats):

    assert witness_keys(j2_stats) == [stat.label for stat in j2_stats]
