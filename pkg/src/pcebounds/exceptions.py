"""Exceptions raised by the pessimistic cardinality estimator."""


class PCEError(Exception):
    """Base class of all errors raised by :mod:`pcebounds`."""


class QuerySyntaxError(PCEError, ValueError):
    """Raised when a query or predicate text cannot be parsed.

    :param message: Description of the problem.
    :type message: str

    :param position: Character offset in the parsed text, if known.
    :type position: int, optional
    """

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"

        super().__init__(message)

        self.position = position


class SchemaError(PCEError, ValueError):
    """Raised for unknown attributes or relations, arity mismatches and
    ragged input files."""


class CatalogError(PCEError, ValueError):
    """Raised when a catalog file is malformed or has the wrong
    version."""


class ConfigError(PCEError, ValueError):
    """Raised when a statistics configuration file is invalid."""


class PredicateError(PCEError, ValueError):
    """Raised for predicates that cannot be parsed or combined."""


class MissingStatisticError(PCEError, KeyError):
    """Raised when a required statistic is not in the catalog."""

    def __str__(self):
        # KeyError quotes its argument, which reads badly in reports
        return str(self.args[0]) if self.args else ""


class UnboundedBoundError(PCEError):
    """Raised when the available statistics do not bound the query."""


class LinearProgramError(PCEError):
    """Raised when the LP solver fails numerically."""


class OracleCapError(PCEError):
    """Raised when exact evaluation exceeds the intermediate size cap."""


class MethodUnavailableError(PCEError):
    """Raised when a bound does not apply to the shape of a query."""
