"""Defaults and the statistics configuration file."""
import json
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path

from sympy import Rational, oo, sympify

from .exceptions import ConfigError

logger = logging.getLogger(__name__)

LOG_ENV_VAR = "PCE_LOG"

CATALOG_VERSION = 1

DEFAULT_NORMS = (Rational(1), Rational(2), Rational(3), Rational(4), oo)
DEFAULT_MAX_VARS = 8
DEFAULT_ORACLE_CAP = 10 ** 7
DEFAULT_MAX_BUCKETS = 200
DEFAULT_MAX_RUNS = 8

POLYB_MAX_VARS = 14
BOUNDSKETCH_MAX_VARS = 20

# Number of significant digits in every printed number
REPORT_DIGITS = 12


def norm_order(value):
    """Convert a norm order from its file or command line form.

    :param value: A positive number, a rational string such as
        ``"3/2"`` or one of ``"inf"``/``"oo"``.
    :type value: int or float or str or :class:`sympy.Expr`

    :return: The exact order, a positive rational or ``oo``.
    :rtype: :class:`sympy.Expr`

    :raises ValueError: if the order is not positive.
    """
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ("inf", "infinity", "oo", "∞"):
            return oo
        try:
            order = Rational(text)
        except (TypeError, ValueError) as err:
            raise ValueError(f"Invalid norm order {value!r}") from err
    elif isinstance(value, float):
        if value == float("inf"):
            return oo
        order = Rational(str(value))
    else:
        order = sympify(value)

    if order is not oo and not (order.is_Rational and order > 0):
        raise ValueError(f"Norm order must be positive, got {value!r}")

    return order


def format_norm_order(p):
    """Inverse of :func:`norm_order`: ``"inf"`` or a rational string."""
    if p is oo:
        return "inf"

    return str(p)


def log_level_from_env(default="WARNING"):
    """Read the log level named by the ``PCE_LOG`` environment variable."""
    name = os.environ.get(LOG_ENV_VAR, default).strip().upper()

    level = logging.getLevelName(name)
    if not isinstance(level, int):
        logger.warning("Ignoring unknown %s level %r", LOG_ENV_VAR, name)
        level = logging.getLevelName(default)

    return level


@dataclass(frozen=True)
class StatisticSpec:
    """One requested family of statistics on a relation.

    ``cond`` and ``target`` are the attribute sets U and V of
    deg(V|U). A non-empty ``cond_attr`` also requests conditional
    statistics on that attribute.
    """
    cond: tuple
    target: tuple
    norms: tuple
    cond_attr: str = None
    mcv_count: int = 0
    buckets: int = 0
    max_runs: int = None
    sequence: bool = False


@dataclass(frozen=True)
class RelationConfig:
    """Where a relation's data lives and which statistics to build."""
    name: str
    file: str
    header: bool = True
    statistics: tuple = ()


@dataclass(frozen=True)
class StatsConfig:
    """The parsed statistics configuration file."""
    relations: tuple = ()
    norms: tuple = DEFAULT_NORMS
    cardinality: bool = True
    full_sequences: bool = True
    max_runs: int = DEFAULT_MAX_RUNS
    source: str = None

    def relation(self, name):
        for relation in self.relations:
            if relation.name == name:
                return relation

        raise ConfigError(f"Relation {name!r} is not configured")


def _as_attr_tuple(value, where):
    if value is None:
        return ()
    if isinstance(value, str):
        return (value,)
    if isinstance(value, list) and all(isinstance(v, str) for v in value):
        return tuple(value)

    raise ConfigError(f"{where}: expected an attribute name or list of names")


def _as_count(value, where, default=0):
    if value is None:
        return default
    if not isinstance(value, int) or isinstance(value, bool) or value < 0:
        raise ConfigError(f"{where}: expected a non-negative integer")

    return value


def _as_norms(value, where, default):
    if value is None:
        return default
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{where}: expected a non-empty list of norm orders")

    try:
        return tuple(norm_order(p) for p in value)
    except ValueError as err:
        raise ConfigError(f"{where}: {err}") from err


def parse_stats_config(document, source=None):
    """Validate a decoded statistics configuration document.

    :param document: The decoded JSON document.
    :type document: dict

    :param source: Where the document came from, for messages.
    :type source: str, optional

    :return: The validated configuration.
    :rtype: :class:`StatsConfig`

    :raises ConfigError: naming the offending entry.
    """
    if not isinstance(document, dict):
        raise ConfigError("Statistics configuration must be a JSON object")

    defaults = document.get("defaults", {})
    if not isinstance(defaults, dict):
        raise ConfigError("defaults: expected an object")

    norms = _as_norms(defaults.get("p"), "defaults.p", DEFAULT_NORMS)
    max_runs = _as_count(defaults.get("max_runs"), "defaults.max_runs",
                         DEFAULT_MAX_RUNS)
    if max_runs < 1:
        raise ConfigError("defaults.max_runs: must be at least 1")

    relations_doc = document.get("relations", {})
    if not isinstance(relations_doc, dict):
        raise ConfigError("relations: expected an object")

    relations = []
    for name, rel_doc in relations_doc.items():
        where = f"relations.{name}"
        if not isinstance(rel_doc, dict) or "file" not in rel_doc:
            raise ConfigError(f"{where}: expected an object with a 'file'")

        specs = []
        for i, stat_doc in enumerate(rel_doc.get("statistics", [])):
            stat_where = f"{where}.statistics[{i}]"
            if not isinstance(stat_doc, dict):
                raise ConfigError(f"{stat_where}: expected an object")

            spec_max_runs = stat_doc.get("max_runs")
            if spec_max_runs is not None:
                spec_max_runs = _as_count(spec_max_runs,
                                          f"{stat_where}.max_runs")
                if spec_max_runs < 1:
                    raise ConfigError(f"{stat_where}.max_runs: must be "
                                      "at least 1")

            buckets = _as_count(stat_doc.get("buckets"),
                                f"{stat_where}.buckets")
            if buckets > DEFAULT_MAX_BUCKETS:
                raise ConfigError(f"{stat_where}.buckets: at most "
                                  f"{DEFAULT_MAX_BUCKETS} buckets")

            specs.append(StatisticSpec(
                cond=_as_attr_tuple(stat_doc.get("cond"),
                                    f"{stat_where}.cond"),
                target=_as_attr_tuple(stat_doc.get("target"),
                                      f"{stat_where}.target"),
                norms=_as_norms(stat_doc.get("p"), f"{stat_where}.p", norms),
                cond_attr=stat_doc.get("cond_attr"),
                mcv_count=_as_count(stat_doc.get("mcv_count"),
                                    f"{stat_where}.mcv_count"),
                buckets=buckets,
                max_runs=spec_max_runs,
                sequence=bool(stat_doc.get("sequence", False))))

        relations.append(RelationConfig(name=name, file=rel_doc["file"],
                                        header=bool(rel_doc.get("header",
                                                                True)),
                                        statistics=tuple(specs)))

    return StatsConfig(relations=tuple(relations), norms=norms,
                       cardinality=bool(defaults.get("cardinality", True)),
                       full_sequences=bool(defaults.get("full_sequences",
                                                        True)),
                       max_runs=max_runs, source=source)


def load_stats_config(path):
    """Read and validate a statistics configuration file.

    :param path: Path of the JSON file.
    :type path: str or :class:`pathlib.Path`

    :rtype: :class:`StatsConfig`
    """
    path = Path(path)

    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as err:
        raise ConfigError(f"{path}: invalid JSON ({err})") from err

    return parse_stats_config(document, source=str(path))
