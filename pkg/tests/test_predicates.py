import pytest
from sympy import Rational

from pcebounds.catalog import StatisticsCatalog
from pcebounds.exceptions import MissingStatisticError, PredicateError
from pcebounds.stats import (BUCKET, COMMON, MCV, NO_PREDICATE, PER_VALUE,
                             WHOLE, Condition, StatEntry, and_, eq, in_, or_,
                             parse_predicate, restrict_predicate, select_stat)


@pytest.fixture
def catalog():

    def entry(value, p=1, condition=Condition()):
        return StatEntry("R", (), "C", p, value, condition)

    return StatisticsCatalog(entries=[
        entry(20.0),
        entry(3.0, p=Rational(1, 2)),
        entry(5.0, condition=Condition(MCV, "A", value=1)),
        entry(9.0, condition=Condition(COMMON, "A")),
        entry(7.0, condition=Condition(MCV, "B", value=2)),
        entry(4.0, condition=Condition(BUCKET, "B", lo=10, hi=20,
                                       scope=PER_VALUE)),
        entry(6.0, condition=Condition(BUCKET, "B", lo=10, hi=20,
                                       scope=WHOLE)),
    ], schemas={"R": ("A", "B", "C")})


def test_no_predicate_uses_global(catalog):

    assert select_stat(catalog, "R", (), "C", 1) == 20.0
    assert select_stat(catalog, "R", (), "C", 1, NO_PREDICATE) == 20.0


def test_conjunction_takes_minimum(catalog):
    pred = and_(eq("A", 1), eq("B", 2))

    assert select_stat(catalog, "R", (), "C", 1, pred) == 5.0


def test_disjunction_takes_sum(catalog):
    pred = or_(eq("A", 1), eq("B", 2))

    assert select_stat(catalog, "R", (), "C", 1, pred) == 12.0


def test_non_mcv_value_uses_common_entry(catalog):

    assert select_stat(catalog, "R", (), "C", 1, eq("A", 3)) == 9.0


def test_value_in_bucket(catalog):

    assert select_stat(catalog, "R", (), "C", 1, eq("B", 15)) == 4.0
    assert select_stat(catalog, "R", (), "C", 1, eq("B", 99)) == 20.0


def test_membership(catalog):

    assert select_stat(catalog, "R", (), "C", 1, in_("A", [1, 3])) == 14.0
    assert select_stat(catalog, "R", (), "C", 1,
                       in_("A", [1, 3, 4])) == 20.0
    # Two values of one bucket never exceed the bucket total
    assert select_stat(catalog, "R", (), "C", 1, in_("B", [12, 15])) == 6.0


def test_sum_needs_p_at_least_one(catalog):
    pred = or_(eq("A", 1), eq("B", 2))

    with pytest.raises(PredicateError):
        select_stat(catalog, "R", (), "C", Rational(1, 2), pred)


def test_missing_global_statistic(catalog):
    with pytest.raises(MissingStatisticError):
        select_stat(catalog, "R", (), "C", 2)


def test_and_or_bracket_their_children(catalog):
    children = [eq("A", 1), eq("A", 3), eq("B", 2), eq("B", 15)]
    values = [select_stat(catalog, "R", (), "C", 1, child)
              for child in children]

    assert select_stat(catalog, "R", (), "C", 1, and_(*children)) <= \
        min(values)
    assert select_stat(catalog, "R", (), "C", 1, or_(*children)) >= \
        max(values)


def test_parse_predicate():

    assert parse_predicate("A=5 and (B=3 or B=4)") == \
        and_(eq("A", 5), or_(eq("B", 3), eq("B", 4)))
    assert parse_predicate("R.C in (1, 2, 'x')") == \
        in_("C", (1, 2, "x"), relation="R")
    assert parse_predicate("A = b OR A = -3") == \
        or_(eq("A", "b"), eq("A", -3))
    assert parse_predicate("  ") is NO_PREDICATE


@pytest.mark.parametrize("text", ["A=", "A 5", "A=5 or", "(A=1", "A=1 $"])
def test_predicate_syntax_errors(text):
    with pytest.raises(PredicateError):
        parse_predicate(text)


def test_restrict_predicate():
    attributes = ("A", "B", "C")

    assert restrict_predicate(and_(eq("A", 1, "R"), eq("D", 2)), "R",
                              attributes) == eq("A", 1, "R")
    assert restrict_predicate(or_(eq("A", 1), eq("D", 2)), "R",
                              attributes) == NO_PREDICATE
    assert restrict_predicate(eq("A", 1, "S"), "R",
                              attributes) == NO_PREDICATE
    assert restrict_predicate(or_(eq("A", 1), eq("B", 2)), "R",
                              attributes) == or_(eq("A", 1), eq("B", 2))
