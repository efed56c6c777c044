"""Random databases and their exact statistics."""
from itertools import combinations

import numpy as np
from sympy import oo

from ..catalog import Database, StatisticsCatalog
from ..config import DEFAULT_NORMS
from ..model import Atom, ConjunctiveQuery, Relation, parse_query
from ..stats.compress import run_length_compress
from ..stats.degree import degree_sequence, lp_norm
from ..stats.entries import SequenceEntry, StatEntry

SHAPE_QUERIES = {
    "J2": "J2(X,Y,Z) :- R(X,Y), S(Y,Z).",
    "J3": "J3(X,Y,Z,U) :- R(X,Y), S(Y,Z), T(Z,U).",
    "C3": "C3(X,Y,Z) :- R(X,Y), S(Y,Z), T(Z,X).",
    "star": "Star(X,Y,Z,U) :- R(X,Y), S(X,Z), T(X,U).",
}

SHAPES = tuple(SHAPE_QUERIES) + ("random",)

MAX_TUPLES = 50
MAX_VARIABLES = 4
MAX_ATOMS = 3

ATTRIBUTES = ("A", "B", "C")
RELATION_NAMES = ("R", "S", "T")

# What true_statistics computes
ALL = "all"
CARDINALITY = "cardinality"
MAX_DEGREE = "max_degree"


def _random_query(rng):
    variables = ["X", "Y", "Z", "U"][:int(rng.integers(2, MAX_VARIABLES + 1))]
    num_atoms = int(rng.integers(1, MAX_ATOMS + 1))

    atoms = []
    for j in range(num_atoms):
        arity = int(rng.integers(1, min(3, len(variables)) + 1))
        positions = sorted(rng.choice(len(variables), size=arity,
                                      replace=False))
        atoms.append(Atom(RELATION_NAMES[j],
                          tuple(variables[i] for i in positions)))

    # Variables no atom drew are left out of the head
    used = set().union(*(atom.variables for atom in atoms))

    return ConjunctiveQuery("Q", tuple(var for var in variables
                                       if var in used), tuple(atoms))


def random_relation(rng, name, arity, max_tuples=MAX_TUPLES):
    """A random relation with skewed values.

    Values are drawn from a small domain with probabilities falling as
    1/(rank + 1), which gives uneven degrees.

    :param rng: The random generator.
    :type rng: :class:`numpy.random.Generator`

    :rtype: :class:`~pcebounds.model.Relation`
    """
    domain = int(rng.integers(2, 7))
    weights = 1.0 / np.arange(1, domain + 1)
    size = int(rng.integers(1, max_tuples + 1))

    rows = rng.choice(domain, size=(size, arity), p=weights / weights.sum())

    return Relation(name, ATTRIBUTES[:arity],
                    frozenset(tuple(int(v) for v in row) for row in rows))


def random_database(rng, query, max_tuples=MAX_TUPLES):
    """A random database binding every relation of a query.

    :rtype: :class:`~pcebounds.catalog.Database`
    """
    arities = {}
    for atom in query.atoms:
        arities.setdefault(atom.relation, len(atom.args))

    return Database.from_relations(
        random_relation(rng, name, arity, max_tuples)
        for name, arity in arities.items())


def random_instance(rng, shape="random", max_tuples=MAX_TUPLES):
    """A query of a named shape and a random database for it.

    :param rng: The random generator.
    :type rng: :class:`numpy.random.Generator`

    :param shape: One of :data:`SHAPES`. Random queries have at most
        4 variables and 3 atoms.
    :type shape: str, optional

    :rtype: tuple[:class:`~pcebounds.model.ConjunctiveQuery`,
        :class:`~pcebounds.catalog.Database`]

    :raises ValueError: for an unknown shape.
    """
    if shape == "random":
        query = _random_query(rng)
    elif shape in SHAPE_QUERIES:
        query = parse_query(SHAPE_QUERIES[shape])
    else:
        raise ValueError(f"Unknown instance shape {shape!r}")

    return query, random_database(rng, query, max_tuples)


def _subsets(attributes):
    for size in range(len(attributes) + 1):
        yield from combinations(attributes, size)


def true_statistics(database, query=None, norms=DEFAULT_NORMS, kind=ALL):
    """Exact statistics of a database as a catalog.

    :param database: The relations.
    :type database: :class:`~pcebounds.catalog.Database`

    :param query: Restrict to the relations of this query.
    :type query: :class:`~pcebounds.model.ConjunctiveQuery`, optional

    :param norms: The norm orders of ``kind="all"``.

    :param kind: ``"all"``: every deg(V|U) at every norm;
        ``"max_degree"``: cardinalities and every max-degree statistic;
        ``"cardinality"``: cardinalities only. The catalog also holds a
        lossless sequence deg(*|U) for every non-empty U.
    :type kind: str, optional

    :rtype: :class:`~pcebounds.catalog.StatisticsCatalog`
    """
    names = (dict.fromkeys(atom.relation for atom in query.atoms)
             if query is not None else [r.name for r in database])

    entries = []
    sequences = []
    for name in names:
        relation = database[name]
        attributes = relation.attributes

        entries.append(StatEntry(name, (), attributes, 1, len(relation)))
        if kind == CARDINALITY:
            continue

        for cond in _subsets(attributes):
            rest = [attr for attr in attributes if attr not in cond]
            if cond:
                sequences.append(SequenceEntry(
                    name, cond, rest, run_length_compress(
                        degree_sequence(relation, cond, rest))))

            for target in _subsets(rest):
                if not target:
                    continue
                sequence = degree_sequence(relation, cond, target)
                orders = (oo,) if kind == MAX_DEGREE else norms
                for p in orders:
                    if not cond and set(target) == set(attributes) and p == 1:
                        continue
                    entries.append(StatEntry(name, cond, target, p,
                                             lp_norm(sequence, p)))

    return StatisticsCatalog(entries, sequences, database.schemas)
