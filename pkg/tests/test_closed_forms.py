import math

import pytest

from pcebounds.bounds import FAMILIES, closed_form, polyb
from pcebounds.oracle import closed_form_values, exact_join


def test_join_l2():
    form = closed_form("join_l2")

    assert [term.symbol.name for term in form.terms] == \
        ["||deg_R(X|Y)||_2", "||deg_S(Z|Y)||_2"]
    assert form.evaluate([3, 4]) == pytest.approx(12.0)
    assert form.log_evaluate([3, 4]) == pytest.approx(math.log(12))
    assert str(form).startswith("|J2| <= ")


def test_path_bound_drops_cardinality_at_p_two():
    form = closed_form("path3_lp", 2)

    assert form.terms[0].symbol.name == "|R|"
    assert form.terms[0].symbol not in form.expr.free_symbols
    assert form.evaluate([8, math.sqrt(18), 3, 2]) == \
        pytest.approx(2 * math.sqrt(54))
    # An unused zero statistic does not zero the bound
    assert form.log_evaluate([0, math.sqrt(18), 3, 2]) == \
        pytest.approx(math.log(2 * math.sqrt(54)))


def test_path_bound_at_p_three():
    form = closed_form("path3_lp", 3)

    assert [term.p for term in form.terms] == [1, 2, 2, 3]
    assert form.evaluate([2, 2, 2, 2]) == pytest.approx(
        (2 * 4 * 4 * 8) ** (1 / 3))


@pytest.mark.parametrize("p", [1, "3/2", "inf"])
def test_path_bound_needs_finite_p_at_least_two(p):
    with pytest.raises(ValueError):
        closed_form("path3_lp", p)


def test_unknown_family():
    with pytest.raises(ValueError):
        closed_form("square_l2")


@pytest.mark.parametrize("family", ["triangle_agm", "triangle_l2",
                                    "triangle_l3"])
def test_triangle_forms_are_tight_on_complete_relations(family,
                                                        triangle_db):
    form = closed_form(family)
    values = closed_form_values(triangle_db, form)

    assert form.evaluate(values) == pytest.approx(8.0)
    assert exact_join(triangle_db, form.query).count == 8


def test_zero_statistic():

    assert closed_form("join_l2").log_evaluate([0, 4]) == -math.inf


@pytest.mark.parametrize("family", FAMILIES)
def test_polymatroid_bound_implies_the_form(family):
    form = closed_form(family)
    values = [2.0 + i for i in range(len(form.terms))]

    result = polyb(form.query, form.constraints(values))

    assert result.log_bound <= form.log_evaluate(values) + 1e-7
