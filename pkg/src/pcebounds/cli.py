"""The ``pce`` command line interface."""
import argparse
import json
import logging
import sys
from pathlib import Path

from printutils import format_number

from .builder import build_catalog, load_database, load_directory
from .catalog import load_catalog, save_catalog, stale_sources
from .config import DEFAULT_MAX_VARS, DEFAULT_ORACLE_CAP, REPORT_DIGITS, \
    load_stats_config, log_level_from_env
from .estimate import METHODS, estimate, parse_methods
from .exceptions import CatalogError, ConfigError, OracleCapError, \
    PredicateError, QuerySyntaxError, SchemaError
from .model import load_query
from .oracle.join import exact_join
from .oracle.report import format_report_text, write_report
from .oracle.suites import SUITES, run_suite
from .stats.predicates import parse_predicate

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_ALL_FAILED = 2
EXIT_ORACLE_CAP = 3
EXIT_VIOLATIONS = 4

INPUT_ERRORS = (SchemaError, CatalogError, QuerySyntaxError, ConfigError,
                PredicateError, OSError)


def _number(value):

    return format_number(value, REPORT_DIGITS)


def cmd_stats_build(args):
    """Build a catalog from CSV files and a statistics configuration."""
    config = load_stats_config(args.config)
    database = load_database(args.data, config)
    catalog = build_catalog(database, config, args.data, args.workers)
    save_catalog(catalog, args.catalog)

    for name, summary in catalog.meta["build"].items():
        print(f"{name}: {summary['entries']} statistics, "
              f"{summary['sequences']} sequences, "
              f"{summary['seconds']:.3f}s")
    print(f"wrote {len(catalog)} statistics to {args.catalog}")

    return EXIT_OK


def _witness_summary(result):
    witness = result.witness or {}
    if "empty" in witness:
        return f"empty statistic {witness['empty']}"

    parts = []
    if "path" in witness:
        parts.append(" -> ".join(
            f"{step['statistic']} [{','.join(step['to'])}]"
            for step in witness["path"]))
    elif "weights" in witness:
        parts.append(", ".join(f"{label} ^ {_number(weight)}"
                               for label, weight in witness["weights"].items()))
    if "order" in witness:
        parts.append(f"order {','.join(witness['order'])}")
    if "objective" in witness:
        parts.append(f"objective {','.join(witness['objective'])}")
    if witness.get("fused"):
        parts.append("fused " + ", ".join(
            f"{var}={rep}" for var, rep in sorted(witness["fused"].items())))
    if "key" in witness:
        parts.append(f"key {','.join(witness['key']) or '-'}")

    return "; ".join(parts)


def _estimate_document(result):
    methods = []
    for outcome in result.outcomes:
        entry = {"method": outcome.method}
        if outcome.ok:
            entry.update(status="ok",
                         bound=_number(outcome.result.bound),
                         log2=_number(outcome.result.log2_bound),
                         witness=_witness_summary(outcome.result))
        else:
            entry.update(status="unavailable" if outcome.unavailable
                         else "failed", reason=outcome.reason)
        methods.append(entry)

    document = {"query": str(result.query), "methods": methods, "min": None}
    best = result.best
    if best is not None:
        document["min"] = {"method": best.method,
                           "bound": _number(best.result.bound),
                           "log2": _number(best.result.log2_bound)}

    return document


def _estimate_text(document):
    lines = [f"query: {document['query']}"]
    for entry in document["methods"]:
        if entry["status"] == "ok":
            lines.append(f"{entry['method']}: {entry['bound']} "
                         f"(log2 {entry['log2']})")
            if entry["witness"]:
                lines.append(f"  witness: {entry['witness']}")
        else:
            lines.append(f"{entry['method']}: {entry['status']} "
                         f"({entry['reason']})")

    best = document["min"]
    if best is None:
        lines.append("min: none")
    else:
        lines.append(f"min: {best['bound']} (log2 {best['log2']}) "
                     f"[{best['method']}]")

    return "\n".join(lines)


def cmd_estimate(args):
    """Bound a query with the requested methods."""
    catalog = load_catalog(args.catalog)
    query = load_query(args.query)
    pred = parse_predicate(args.pred or "")
    group_by = (None if not args.group_by
                else [var.strip() for var in args.group_by.split(",")])

    if args.data is not None:
        for name in stale_sources(catalog, args.data):
            logger.warning("Statistics of %s are stale: its data file "
                           "changed since the catalog was built", name)

    result = estimate(query, catalog, args.methods, pred, group_by,
                      args.max_vars, args.lp)
    document = _estimate_document(result)

    if args.format == "json":
        print(json.dumps(document, indent=2))
    else:
        print(_estimate_text(document))

    return EXIT_ALL_FAILED if result.all_failed else EXIT_OK


def cmd_oracle(args):
    """Print the exact output size of a query."""
    if args.config is not None:
        database = load_database(args.data, load_stats_config(args.config))
    else:
        database = load_directory(args.data)
    query = load_query(args.query)

    print(exact_join(database, query, args.oracle_cap).count)

    return EXIT_OK


def cmd_verify(args):
    """Run property suites and report their violations."""
    report = run_suite(args.suite, args.seed, args.trials, args.data,
                       args.workers)

    print(format_report_text(report), end="")
    if args.out is not None:
        write_report(report, args.out)

    return EXIT_OK if report.ok else EXIT_VIOLATIONS


def _methods(text):
    try:
        return parse_methods(text)
    except ValueError as err:
        raise argparse.ArgumentTypeError(str(err)) from None


class _Parser(argparse.ArgumentParser):
    """Reports usage errors with the input error exit code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser():
    """The argument parser of ``pce``."""
    parser = _Parser(
        prog="pce",
        description="Pessimistic cardinality estimation: guaranteed upper "
                    "bounds on conjunctive query output sizes.")
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="log INFO, or DEBUG when given twice")
    commands = parser.add_subparsers(dest="command", required=True)

    stats = commands.add_parser("stats", help="statistics catalogs")
    stats_commands = stats.add_subparsers(dest="stats_command", required=True)
    build = stats_commands.add_parser("build", help="build a catalog")
    build.add_argument("--data", type=Path, required=True,
                       help="directory of the CSV files")
    build.add_argument("--config", type=Path, required=True,
                       help="statistics configuration (JSON)")
    build.add_argument("--catalog", type=Path, required=True,
                       help="catalog file to write")
    build.add_argument("--workers", type=int, default=None)
    build.set_defaults(func=cmd_stats_build)

    est = commands.add_parser("estimate", help="bound a query")
    est.add_argument("--catalog", type=Path, required=True)
    est.add_argument("--query", type=Path, required=True)
    est.add_argument("--methods", type=_methods, default=METHODS,
                     help=f"comma separated subset of {','.join(METHODS)}")
    est.add_argument("--pred", default=None,
                     help="filter, e.g. \"A=5 and (B=3 or B=4)\"")
    est.add_argument("--format", choices=("text", "json"), default="text")
    est.add_argument("--group-by", default=None,
                     help="comma separated variables to bound the "
                          "projection on")
    est.add_argument("--data", type=Path, default=None,
                     help="data directory, to warn about stale statistics")
    est.add_argument("--max-vars", type=int, default=DEFAULT_MAX_VARS)
    est.add_argument("--lp", choices=("simplex", "highs", "auto"),
                     default="auto", help="LP backend")
    est.set_defaults(func=cmd_estimate)

    oracle = commands.add_parser("oracle", help="evaluate a query exactly")
    oracle.add_argument("--data", type=Path, required=True)
    oracle.add_argument("--query", type=Path, required=True)
    oracle.add_argument("--config", type=Path, default=None,
                        help="statistics configuration naming the files; "
                             "by default every CSV file is loaded")
    oracle.add_argument("--oracle-cap", type=int, default=DEFAULT_ORACLE_CAP)
    oracle.set_defaults(func=cmd_oracle)

    verify = commands.add_parser("verify", help="run property suites")
    verify.add_argument("--suite", choices=SUITES + ("all",), default="all")
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--trials", type=int, default=20)
    verify.add_argument("--data", type=Path, default=None,
                        help="also check the queries of this directory")
    verify.add_argument("--out", type=Path, default=None,
                        help="directory for the text and JSON reports")
    verify.add_argument("--workers", type=int, default=None)
    verify.set_defaults(func=cmd_verify)

    return parser


def _configure_logging(verbose):
    level = log_level_from_env()
    if verbose:
        level = min(level, logging.INFO if verbose == 1 else logging.DEBUG)

    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)


def main(argv=None):
    """Run ``pce`` and return its exit code."""
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)

    try:
        return args.func(args)
    except OracleCapError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_ORACLE_CAP
    except INPUT_ERRORS as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT_ERROR
