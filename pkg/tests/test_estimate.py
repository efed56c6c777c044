import pytest

from pcebounds.estimate import METHODS, estimate, parse_methods
from pcebounds.exceptions import SchemaError
from pcebounds.model import load_query, parse_query
from pcebounds.stats import parse_predicate


def _bounds(result):

    return {outcome.method: outcome.result.bound
            for outcome in result.outcomes if outcome.ok}


def test_parse_methods():

    assert parse_methods("all") == METHODS
    assert parse_methods("") == METHODS
    assert parse_methods(" cb, AGM,cb") == ("cb", "agm")
    with pytest.raises(ValueError):
        parse_methods("cb,exact")


def test_join_of_squares(fixture_catalog, fixture_dir):
    result = estimate(load_query(fixture_dir / "j2.cq"), fixture_catalog)
    bounds = _bounds(result)

    assert list(bounds) == list(METHODS)
    assert bounds["agm"] == pytest.approx(16.0)
    for method in ("cb", "boundsketch", "polyb", "dsb"):
        assert bounds[method] == pytest.approx(8.0)
    assert result.best.result.bound == pytest.approx(8.0)
    assert not result.all_failed


def test_triangle(fixture_catalog, fixture_dir):
    result = estimate(load_query(fixture_dir / "c3.cq"), fixture_catalog)
    bounds = _bounds(result)

    assert bounds["agm"] == pytest.approx(8.0)
    assert bounds["cb"] == pytest.approx(8.0)
    assert bounds["polyb"] == pytest.approx(8.0)
    (dsb,) = [outcome for outcome in result.outcomes
              if outcome.method == "dsb"]
    assert dsb.unavailable
    assert dsb.reason == "requires 2-atom query"


def test_skewed_join(fixture_catalog, fixture_dir):
    result = estimate(load_query(fixture_dir / "skew.cq"), fixture_catalog)
    bounds = _bounds(result)

    assert bounds["agm"] == pytest.approx(42.0)
    assert bounds["cb"] == pytest.approx(28.0)
    assert bounds["dsb"] == pytest.approx(22.0)
    assert 22.0 - 1e-6 <= bounds["polyb"] <= (27 * 18) ** 0.5 + 1e-6
    assert result.best.result.bound == pytest.approx(22.0)


def test_empty_relation_gives_zero(fixture_catalog, fixture_dir):
    result = estimate(load_query(fixture_dir / "empty.cq"), fixture_catalog)

    assert set(_bounds(result).values()) == {0.0}
    assert result.best.method == "agm"


def test_predicate(fixture_catalog, fixture_dir):
    query = load_query(fixture_dir / "single.cq")
    unfiltered = _bounds(estimate(query, fixture_catalog))
    filtered = estimate(query, fixture_catalog,
                        pred=parse_predicate("Y = b"))

    assert unfiltered["agm"] == pytest.approx(8.0)
    for method, bound in _bounds(filtered).items():
        assert bound <= unfiltered[method] * (1 + 1e-7)
    assert [outcome.method for outcome in filtered.outcomes
            if outcome.unavailable] == ["dsb"]


def test_selected_methods_only(fixture_catalog, fixture_dir):
    result = estimate(load_query(fixture_dir / "j2.cq"), fixture_catalog,
                      ("polyb", "agm"))

    assert [outcome.method for outcome in result.outcomes] == \
        ["polyb", "agm"]


def test_all_methods_failing(fixture_catalog, fixture_dir):
    result = estimate(load_query(fixture_dir / "c3.cq"), fixture_catalog,
                      ("dsb",))

    assert result.best is None
    assert result.all_failed


def test_failures_are_recorded(fixture_catalog):
    query = parse_query("Q(X,Y,Z,U) :- R(X,Y), S(Y,Z), T(Z,U).")
    result = estimate(query, fixture_catalog, ("cb", "polyb"), max_vars=3)
    (cb, polyb) = result.outcomes

    assert not cb.ok and not cb.unavailable
    assert "at most 3 variables" in cb.reason
    assert polyb.ok


def test_group_by(fixture_catalog, fixture_dir):
    result = estimate(load_query(fixture_dir / "j2.cq"), fixture_catalog,
                      ("polyb",), group_by=["Y"])

    assert result.best.result.bound == pytest.approx(4.0)
    assert result.best.result.witness["objective"] == ("Y",)


def test_schema_errors_propagate(fixture_catalog):
    with pytest.raises(SchemaError):
        estimate(parse_query("Q(X) :- Nowhere(X)."), fixture_catalog)
