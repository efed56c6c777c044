"""Exact evaluation of conjunctive queries."""
import logging
from dataclasses import dataclass

from ..config import DEFAULT_ORACLE_CAP
from ..exceptions import OracleCapError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class JoinResult:
    """The output of a query over its variables.

    :param variables: The output columns, the query's variables in
        order of first occurrence.
    :type variables: tuple[str, ...]

    :param count: The output size.
    :type count: int

    :param tuples: The output rows, when they were kept.
    :type tuples: frozenset[tuple] or None
    """
    variables: tuple
    count: int
    tuples: frozenset = None


def _index(relation, key_positions):
    index = {}
    for row in relation.tuples:
        index.setdefault(tuple(row[i] for i in key_positions), []).append(row)

    return index


def exact_join(database, query, cap=DEFAULT_ORACLE_CAP, materialize=False):
    """Evaluate a query by joining its atoms left to right.

    Each atom is looked up through a hash index on the variables bound by
    the atoms before it. The output is a set over all query variables.

    :param database: The relations.
    :type database: :class:`~pcebounds.catalog.Database`

    :param query: The query.
    :type query: :class:`~pcebounds.model.ConjunctiveQuery`

    :param cap: Largest number of partial results allowed after any
        atom.
    :type cap: int, optional

    :param materialize: Keep the output rows.
    :type materialize: bool, optional

    :rtype: :class:`JoinResult`

    :raises SchemaError: for unbound relations or wrong arities.
    :raises OracleCapError: if a partial result exceeds the cap.
    """
    query.check_schemas(database.schemas)

    bound = []
    partial = [()]
    for atom in query.atoms:
        relation = database[atom.relation]

        key_positions = [i for i, var in enumerate(atom.args) if var in bound]
        new_positions = [i for i, var in enumerate(atom.args)
                         if var not in bound]
        lookup = [bound.index(atom.args[i]) for i in key_positions]

        index = _index(relation, key_positions)

        extended = []
        for row in partial:
            for match in index.get(tuple(row[k] for k in lookup), ()):
                extended.append(row + tuple(match[i] for i in new_positions))
            if len(extended) > cap:
                raise OracleCapError(f"Intermediate result of {query.name} "
                                     f"exceeds {cap} tuples at {atom}")

        bound.extend(atom.args[i] for i in new_positions)
        partial = extended

        if not partial:
            break

    logger.debug("Evaluated %s: %d tuples", query.name, len(partial))

    # Relations are sets, so the extensions are already distinct
    output = frozenset(partial)

    return JoinResult(query.variables, len(output),
                      output if materialize else None)
