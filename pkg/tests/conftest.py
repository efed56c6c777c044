"""Shared fixtures of the test suite."""
from pathlib import Path

import numpy as np
import pytest

from pcebounds.builder import build_catalog, load_database
from pcebounds.catalog import Database
from pcebounds.config import load_stats_config
from pcebounds.model import Relation

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "fixtures"

SKEWED_ROWS = [(1, "a", 1), (1, "b", 1), (1, "b", 2), (2, "a", 1),
               (2, "b", 1), (3, "b", 1), (3, "c", 1), (4, "d", 1)]

FULL_SQUARE = [(0, 0), (0, 1), (1, 0), (1, 1)]


@pytest.fixture
def skewed():
    """The eight-tuple relation R(X,Y,Z) with deg(Y|X) = (2,2,2,1)."""
    return Relation("R", ("X", "Y", "Z"), frozenset(SKEWED_ROWS))


@pytest.fixture
def triangle_db():
    """R, S and T all equal to {0,1}^2."""
    return Database.from_relations(
        Relation(name, ("A", "B"), frozenset(FULL_SQUARE))
        for name in ("R", "S", "T"))


@pytest.fixture
def fixture_dir():

    return FIXTURE_DIR


@pytest.fixture
def rng():

    return np.random.default_rng(2024)


@pytest.fixture(scope="session")
def fixture_catalog():
    """The catalog of the fixture directory's statistics configuration."""
    config = load_stats_config(FIXTURE_DIR / "stats.json")

    return build_catalog(load_database(FIXTURE_DIR, config), config,
                         FIXTURE_DIR)
