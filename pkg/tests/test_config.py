import json
import logging
import re

import pytest
from sympy import Rational, oo

from pcebounds.config import (DEFAULT_MAX_RUNS, DEFAULT_NORMS, LOG_ENV_VAR,
                              format_norm_order, load_stats_config,
                              log_level_from_env, norm_order,
                              parse_stats_config)
from pcebounds.exceptions import ConfigError


@pytest.mark.parametrize("value, expected", [
    (2, Rational(2)),
    ("3/2", Rational(3, 2)),
    (1.5, Rational(3, 2)),
    ("inf", oo),
    ("oo", oo),
    (float("inf"), oo),
])
def test_norm_order(value, expected):

    assert norm_order(value) == expected


@pytest.mark.parametrize("value", [0, -1, "x", "0/1"])
def test_invalid_norm_order(value):
    with pytest.raises(ValueError):
        norm_order(value)


def test_format_norm_order_inverts_norm_order():
    for p in DEFAULT_NORMS + (Rational(3, 2),):
        assert norm_order(format_norm_order(p)) == p


def test_log_level_from_env(monkeypatch):
    monkeypatch.setenv(LOG_ENV_VAR, "debug")
    assert log_level_from_env() == logging.DEBUG

    monkeypatch.setenv(LOG_ENV_VAR, "chatty")
    assert log_level_from_env() == logging.WARNING

    monkeypatch.delenv(LOG_ENV_VAR)
    assert log_level_from_env() == logging.WARNING


def test_fixture_config(fixture_dir):
    config = load_stats_config(fixture_dir / "stats.json")

    assert config.norms == DEFAULT_NORMS
    assert config.max_runs == 8
    assert [relation.name for relation in config.relations] == \
        ["F", "R", "S", "T", "L", "M", "E"]

    (full, conditional) = config.relation("F").statistics
    assert full.cond == ("X",) and full.target == ("Y",)
    assert full.norms == (1, 2, oo)
    assert full.sequence
    assert conditional.cond == ()
    assert conditional.cond_attr == "Y"
    assert (conditional.mcv_count, conditional.buckets) == (1, 2)

    assert config.relation("L").statistics[0].max_runs == 2


def test_defaults_of_an_empty_config():
    config = parse_stats_config({})

    assert config.relations == ()
    assert config.norms == DEFAULT_NORMS
    assert config.max_runs == DEFAULT_MAX_RUNS
    assert config.cardinality and config.full_sequences


@pytest.mark.parametrize("document, where", [
    ([], "JSON object"),
    ({"relations": {"R": {}}}, "relations.R"),
    ({"relations": {"R": {"file": "R.csv",
                          "statistics": [{"p": [0]}]}}},
     "relations.R.statistics[0].p"),
    ({"relations": {"R": {"file": "R.csv",
                          "statistics": [{"buckets": 201}]}}},
     "relations.R.statistics[0].buckets"),
    ({"relations": {"R": {"file": "R.csv",
                          "statistics": [{"cond": 3}]}}},
     "relations.R.statistics[0].cond"),
    ({"defaults": {"max_runs": 0}}, "defaults.max_runs"),
    ({"defaults": {"p": []}}, "defaults.p"),
])
def test_invalid_configs(document, where):
    with pytest.raises(ConfigError, match=re.escape(where)):
        parse_stats_config(document)


def test_unknown_relation():
    with pytest.raises(ConfigError):
        parse_stats_config({}).relation("R")


def test_invalid_json(tmp_path):
    path = tmp_path / "stats.json"
    path.write_text("{", encoding="utf-8")

    with pytest.raises(ConfigError):
        load_stats_config(path)

    path.write_text(json.dumps({"defaults": {"p": ["3/2"]}}),
                    encoding="utf-8")
    assert load_stats_config(path).norms == (Rational(3, 2),)
