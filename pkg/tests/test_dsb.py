import math

import pytest

from pcebounds.bounds import (dsb_for_query, dsb_join_bound,
                              dsb_join_bound_compressed, dsb_join_bound_pair,
                              rank_product)
from pcebounds.catalog import StatisticsCatalog
from pcebounds.exceptions import (MethodUnavailableError,
                                  MissingStatisticError, UnboundedBoundError)
from pcebounds.model import parse_query
from pcebounds.stats import (CompressedDegreeSequence, DegreeSequence,
                             StatEntry, cdf_upper_compress,
                             compressed_from_degrees)


def _sequence(*degrees):

    return DegreeSequence("R", (), (), degrees)


def test_rank_product_aligns_runs():
    a = compressed_from_degrees((3, 3, 2, 1))
    b = compressed_from_degrees((4, 2, 2))

    assert rank_product(a, b) == 3 * 4 + 3 * 2 + 2 * 2
    assert rank_product(_sequence(3, 2, 1), _sequence(2, 2)) == 10
    assert rank_product(_sequence(), _sequence(2)) == 0


def test_join_bound():
    result = dsb_join_bound(_sequence(3, 2, 1), _sequence(2, 2))

    assert result.method == "dsb"
    assert result.bound == pytest.approx(10.0)
    assert result.witness["sum"] == 10.0


def test_join_bound_rejects_unsorted_sequences():
    unsorted = CompressedDegreeSequence(((1.0, 1), (2.0, 1)))

    with pytest.raises(ValueError):
        dsb_join_bound(unsorted, _sequence(2, 2))


def test_compressed_join_bound_dominates_the_exact_one():
    a = _sequence(4, 2, 2, 1, 1, 1)
    b = _sequence(2, 2, 2, 2, 2, 2)
    compressed = cdf_upper_compress(a, 2)

    exact = dsb_join_bound(a, b)
    lossy = dsb_join_bound_compressed(a, compressed, b)

    assert exact.bound == pytest.approx(22.0)
    assert lossy.bound == pytest.approx(28.0)

    with pytest.raises(ValueError):
        dsb_join_bound_compressed(a, compressed_from_degrees((4, 2)), b)


def test_pair_bound_needs_certificates():
    a = cdf_upper_compress(_sequence(5, 3, 3, 2, 1, 1, 1), 3)
    b = cdf_upper_compress(_sequence(4, 2, 2, 1, 1, 1), 2)

    assert dsb_join_bound_pair(a, b).bound >= rank_product(
        _sequence(5, 3, 3, 2, 1, 1, 1), _sequence(4, 2, 2, 1, 1, 1))

    with pytest.raises(UnboundedBoundError):
        dsb_join_bound_pair(CompressedDegreeSequence(((2.0, 2),)), b)


def test_skewed_join(fixture_catalog):
    result = dsb_for_query(parse_query("Q(X,Y,Z) :- L(X,Y), M(Y,Z)."),
                           fixture_catalog)

    assert result.bound == pytest.approx(22.0)
    assert result.witness["key"] == ("Y",)


def test_empty_side(fixture_catalog):
    result = dsb_for_query(parse_query("Q(X,Y,Z) :- R(X,Y), E(Y,Z)."),
                           fixture_catalog)

    assert result.bound == 0.0
    assert result.log_bound == -math.inf


def test_cross_product():
    catalog = StatisticsCatalog(
        [StatEntry("R", (), ("A", "B"), 1, 3),
         StatEntry("S", (), ("A", "B"), 1, 5)],
        schemas={"R": ("A", "B"), "S": ("A", "B")})
    result = dsb_for_query(parse_query("Q(X,Y,Z,U) :- R(X,Y), S(Z,U)."),
                           catalog)

    assert result.bound == pytest.approx(15.0)
    assert result.witness["key"] == ()


def test_missing_sequence():
    catalog = StatisticsCatalog(schemas={"R": ("A", "B"), "S": ("A", "B")})

    with pytest.raises(MissingStatisticError):
        dsb_for_query(parse_query("Q(X,Y,Z) :- R(X,Y), S(Y,Z)."), catalog)


def test_only_two_atoms(fixture_catalog):
    query = parse_query("C3(X,Y,Z) :- R(X,Y), S(Y,Z), T(Z,X).")

    with pytest.raises(MethodUnavailableError):
        dsb_for_query(query, fixture_catalog)
