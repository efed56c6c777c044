import math

import pytest
from sympy import oo

from pcebounds.bounds import (cardinality_statistics, instantiate_statistics,
                              log_statistic)
from pcebounds.exceptions import SchemaError
from pcebounds.model import parse_query
from pcebounds.stats import parse_predicate


def test_log_statistic():

    assert log_statistic(0) == -math.inf
    assert log_statistic(0.5) == 0.0
    assert log_statistic(math.e) == pytest.approx(1.0)


def test_triangle_statistics(fixture_catalog):
    query = parse_query("C3(X,Y,Z) :- R(X,Y), S(Y,Z), T(Z,X).")
    stats = instantiate_statistics(query, fixture_catalog)

    # |R| and deg(B|A), deg(A|B) at five norms, per atom
    assert len(stats.constraints) == 33
    assert len(stats.cover) == 9
    assert stats.empty_label() is None

    cover = {(stat.atom, stat.cond, stat.target): stat.log_value
             for stat in stats.cover}
    assert cover[(0, frozenset(), frozenset("XY"))] == \
        pytest.approx(math.log(4))
    assert cover[(2, frozenset("Z"), frozenset("X"))] == \
        pytest.approx(math.log(2))


def test_self_join_gets_one_copy_per_atom(fixture_catalog):
    query = parse_query("Q(X,Y,Z) :- R(X,Y), R(Y,Z).")
    stats = instantiate_statistics(query, fixture_catalog)

    assert len(stats.constraints) == 22
    assert {stat.atom for stat in stats.cover} == {0, 1}


def test_predicate_tightens_statistics(fixture_catalog):
    query = parse_query("Single(X,Y,Z) :- F(X,Y,Z).")

    def max_x(pred):
        stats = instantiate_statistics(query, fixture_catalog, pred)
        (constraint,) = [c for c in stats.constraints
                         if not c.cond and c.target == {"X"} and c.p is oo]
        return math.exp(constraint.log_norm)

    assert max_x(parse_predicate("")) == pytest.approx(4.0)
    assert max_x(parse_predicate("Y = b")) == pytest.approx(3.0)
    assert max_x(parse_predicate("F.Y = a")) == pytest.approx(2.0)
    assert max_x(parse_predicate("S.Y = b")) == pytest.approx(4.0)


def test_empty_relation(fixture_catalog):
    query = parse_query("Empty(X,Y,Z) :- R(X,Y), E(Y,Z).")
    stats = instantiate_statistics(query, fixture_catalog)

    assert stats.empty_label().startswith("E(Y,Z): ")


def test_unbound_relation(fixture_catalog):
    with pytest.raises(SchemaError):
        instantiate_statistics(parse_query("Q(X) :- W(X)."), fixture_catalog)
    with pytest.raises(SchemaError):
        instantiate_statistics(parse_query("Q(X) :- R(X)."), fixture_catalog)


def test_cardinality_statistics():
    query = parse_query("J2(X,Y,Z) :- R(X,Y), S(Y,Z).")
    (r, s) = cardinality_statistics(query, [8, 0])

    assert r.label == "|R(X,Y)|"
    assert r.target == {"X", "Y"}
    assert r.log_value == pytest.approx(math.log(8))
    assert s.log_value == -math.inf
