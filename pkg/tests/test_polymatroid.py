import math

import pytest

from pcebounds.bounds import (EntropyVector, agm_bound,
                              cardinality_statistics, drop_nonjoin_vars,
                              elemental_inequalities, norm_constraint,
                              polyb, remap_constraints)
from pcebounds.exceptions import UnboundedBoundError
from pcebounds.model import parse_query

J2 = parse_query("J2(X,Y,Z) :- R(X,Y), S(Y,Z).")
C3 = parse_query("C3(X,Y,Z) :- R(X,Y), S(Y,Z), T(Z,X).")


@pytest.mark.parametrize("n, count", [(1, 1), (2, 3), (3, 9), (4, 28),
                                      (5, 85)])
def test_number_of_elemental_inequalities(n, count):

    assert len(elemental_inequalities(n)) == count


def test_elemental_inequalities_limits():
    with pytest.raises(ValueError):
        elemental_inequalities(0)
    with pytest.raises(ValueError):
        elemental_inequalities(15)


def test_entropy_vector():
    log2 = math.log(2)
    # X uniform on two values, Y a copy of X
    h = EntropyVector(("X", "Y"), (0.0, log2, log2, log2))

    assert h["X"] == log2
    assert h[("X", "Y")] == log2
    assert h.conditional("Y", "X") == 0.0
    assert h.as_dict()[("X", "Y")] == log2
    assert h.shannon_violations() == []

    bad = EntropyVector(("X", "Y"), (0.0, log2, log2, 3 * log2))
    assert len(bad.shannon_violations()) == 1

    with pytest.raises(ValueError):
        EntropyVector(("X",), (0.0,))
    with pytest.raises(ValueError):
        EntropyVector(("X",), (1.0, 0.0))


def test_l2_join_bound():
    constraints = [norm_constraint("Y", "X", 2, math.sqrt(18)),
                   norm_constraint("Y", "Z", 2, math.sqrt(18))]

    assert polyb(J2, constraints).bound == pytest.approx(18.0)


def test_cardinalities_give_agm():
    constraints = [norm_constraint((), atom.args, 1, 4) for atom in C3.atoms]
    expected = agm_bound(C3, cardinality_statistics(C3, [4, 4, 4]))

    assert polyb(C3, constraints).bound == pytest.approx(expected.bound)
    assert polyb(C3, constraints, method="highs").bound == \
        pytest.approx(8.0)


def test_max_degree_constraint():
    constraints = [norm_constraint((), ("X", "Y"), 1, 8),
                   norm_constraint("Y", "Z", "inf", 2)]
    result = polyb(J2, constraints)

    assert result.bound == pytest.approx(16.0)
    assert result.witness["objective"] == ("X", "Y", "Z")
    assert result.witness["entropy"].shannon_violations(1e-7) == []


def test_group_by_bounds_the_projection():
    constraints = [norm_constraint((), ("X", "Y"), 1, 8)]

    assert polyb(J2, constraints, objective_vars=["Y"]).bound == \
        pytest.approx(8.0)
    with pytest.raises(UnboundedBoundError):
        polyb(J2, constraints)


def test_empty_statistic():
    constraints = [norm_constraint((), ("X", "Y"), 1, 0, "|R|"),
                   norm_constraint((), ("Y", "Z"), 1, 8)]
    result = polyb(J2, constraints)

    assert result.bound == 0.0
    assert result.witness == {"empty": "|R|"}


def test_invalid_objectives():
    constraints = [norm_constraint((), ("X", "Y"), 1, 8)]

    with pytest.raises(ValueError):
        polyb(J2, constraints, objective_vars=[])
    with pytest.raises(ValueError):
        polyb(J2, constraints, objective_vars=["W"])
    with pytest.raises(ValueError):
        polyb(J2, [norm_constraint((), ("X", "W"), 1, 8)])


def test_drop_nonjoin_vars():
    query = parse_query("Q(X,Y,Z,W) :- R(X,Y,Z), S(Z,W).")
    reduced, mapping = drop_nonjoin_vars(query)

    assert str(reduced) == "Q(X,Z,W) :- R(X,Z), S(Z,W)."
    assert mapping == {"X": "X", "Y": "X", "Z": "Z", "W": "W"}

    whole = norm_constraint((), ("X", "Y", "Z"), 1, 8)
    split = norm_constraint("X", "Y", "inf", 2)
    assert remap_constraints([whole], mapping)[0].target == {"X", "Z"}
    assert remap_constraints([whole, split], mapping) is None


def test_reduction_keeps_the_bound():
    query = parse_query("Q(X,Y,Z) :- R(X,Y,Z).")
    constraints = [norm_constraint((), ("X", "Y", "Z"), 1, 8)]

    reduced = polyb(query, constraints)
    full = polyb(query, constraints, reduce=False)

    assert reduced.bound == pytest.approx(8.0)
    assert full.bound == pytest.approx(8.0)
    assert reduced.witness["fused"] == {"Y": "X", "Z": "X"}
    assert "fused" not in full.witness


def test_reduction_is_skipped_for_split_groups():
    query = parse_query("Q(X,Y,Z) :- R(X,Y,Z).")
    constraints = [norm_constraint((), ("X", "Y", "Z"), 1, 8),
                   norm_constraint("X", "Y", "inf", 1)]
    result = polyb(query, constraints)

    assert result.bound == pytest.approx(8.0)
    assert "fused" not in result.witness
