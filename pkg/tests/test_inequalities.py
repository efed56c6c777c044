import pytest

from pcebounds.builder import load_directory
from pcebounds.model import load_query
from pcebounds.oracle.inequalities import CHAIN_COVERAGE, \
    INEQUALITY_FAMILIES, InequalityCheck, verify_inequalities


def test_check_tolerance():
    assert InequalityCheck("tight", 8.0, 8.0).passed
    assert InequalityCheck("rounding", 8.0 + 1e-12, 8.0).passed
    assert not InequalityCheck("violated", 9.0, 8.0).passed
    assert InequalityCheck("loose", 1.0, 2.0, tolerance=0.0).slack == 1.0


def test_families():
    assert INEQUALITY_FAMILIES == ("join_l2", "path3_lp", "triangle_agm",
                                   "triangle_l2", "triangle_l3",
                                   CHAIN_COVERAGE)


@pytest.mark.parametrize("family", ["triangle_agm", "triangle_l2",
                                    "triangle_l3", "join_l2"])
def test_closed_forms_hold(triangle_db, family):
    checks = verify_inequalities(triangle_db, family)

    assert [check.name for check in checks] == [family]
    assert checks[0].lhs == 8.0
    assert checks[0].passed


@pytest.mark.parametrize("p", [2, 3])
def test_path_bound_holds(triangle_db, p):
    checks = verify_inequalities(triangle_db, "path3_lp", p)

    assert [check.name for check in checks] == [f"path3_lp[p={p}]"]
    assert checks[0].lhs == 16.0
    assert checks[0].passed


def test_chain_coverage_on_triangle(triangle_db):
    checks = verify_inequalities(triangle_db, CHAIN_COVERAGE)

    assert [check.name for check in checks] == [
        "chain_coverage[bound]", "chain_coverage[X]", "chain_coverage[Y]",
        "chain_coverage[Z]"]
    assert all(check.passed for check in checks)
    assert checks[0].lhs == 8.0


def test_chain_coverage_on_query(fixture_dir):
    database = load_directory(fixture_dir)
    query = load_query(fixture_dir / "skew.cq")
    checks = verify_inequalities(database, CHAIN_COVERAGE, query=query)

    assert checks[0].lhs == 22.0
    assert all(check.passed for check in checks)


def test_unknown_family(triangle_db):
    with pytest.raises(ValueError, match="Unknown inequality family"):
        verify_inequalities(triangle_db, "square_l2")
    with pytest.raises(ValueError):
        verify_inequalities(triangle_db, "path3_lp", 1)
