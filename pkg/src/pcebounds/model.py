"""Relations, conjunctive queries and their hypergraphs."""
import re
from dataclasses import dataclass, field
from pathlib import Path

import networkx as nx
from networkx.utils import UnionFind

from .exceptions import QuerySyntaxError, SchemaError
from .utils import iter_wrapper, value_key, zip_strict


@dataclass(frozen=True)
class Relation:
    """A named finite set of tuples over a fixed attribute list.

    :param name: The relation name.
    :type name: str

    :param attributes: The attribute names, in column order.
    :type attributes: tuple[str, ...]

    :param tuples: The rows. Duplicates are collapsed, relations are
        sets.
    :type tuples: frozenset[tuple]
    """
    name: str
    attributes: tuple
    tuples: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        attributes = tuple(iter_wrapper(self.attributes))
        object.__setattr__(self, "attributes", attributes)

        if len(set(attributes)) != len(attributes):
            raise SchemaError(f"Relation {self.name} has repeated "
                              "attribute names")

        tuples = frozenset(tuple(row) for row in self.tuples)
        for row in tuples:
            if len(row) != len(attributes):
                raise SchemaError(f"Row {row} of {self.name} has arity "
                                  f"{len(row)}, expected {len(attributes)}")

        object.__setattr__(self, "tuples", tuples)

    def __len__(self):

        return len(self.tuples)

    @property
    def arity(self):

        return len(self.attributes)

    def positions(self, attrs):
        """Column positions of some attributes.

        :raises SchemaError: if an attribute is unknown.
        """
        positions = []
        for attr in iter_wrapper(attrs):
            try:
                positions.append(self.attributes.index(attr))
            except ValueError:
                raise SchemaError(f"Relation {self.name} has no attribute "
                                  f"{attr!r}") from None

        return tuple(positions)

    def project(self, attrs):
        """Set projection onto some attributes, in the given order."""
        positions = self.positions(attrs)

        return {tuple(row[i] for i in positions) for row in self.tuples}

    def select(self, attr, values):
        """The sub-relation where ``attr`` takes one of ``values``."""
        (position,) = self.positions(attr)
        values = set(values)

        return Relation(self.name, self.attributes,
                        frozenset(row for row in self.tuples
                                  if row[position] in values))

    def sorted_rows(self):
        """Rows in the total value order, for deterministic output."""
        return sorted(self.tuples,
                      key=lambda row: tuple(value_key(v) for v in row))


@dataclass(frozen=True)
class Atom:
    """One body atom ``relation(args...)`` of a conjunctive query."""
    relation: str
    args: tuple

    @property
    def variables(self):

        return frozenset(self.args)

    def attribute_map(self, relation):
        """Map attribute names of the bound relation to variables.

        :param relation: The relation the atom refers to.
        :type relation: :class:`Relation`

        :return: attribute -> variable.
        :rtype: dict[str, str]

        :raises SchemaError: if the arity does not match.
        """
        if relation.arity != len(self.args):
            raise SchemaError(f"Atom {self} has arity {len(self.args)} but "
                              f"relation {relation.name} has arity "
                              f"{relation.arity}")

        return dict(zip_strict(relation.attributes, self.args))

    def __str__(self):

        return f"{self.relation}({','.join(self.args)})"


@dataclass(frozen=True)
class ConjunctiveQuery:
    """A conjunctive query ``Q(head) :- R1(U1), ..., Rm(Um)``.

    The same relation name may occur in several atoms (self-joins).
    """
    name: str
    head_vars: tuple
    atoms: tuple

    def __post_init__(self):
        if not self.atoms:
            raise QuerySyntaxError(f"Query {self.name} has an empty body")

        body_vars = set().union(*(atom.variables for atom in self.atoms))
        for var in self.head_vars:
            if var not in body_vars:
                raise QuerySyntaxError(f"Head variable {var} of {self.name} "
                                       "does not occur in the body")

    @property
    def variables(self):
        """All variables, ordered by first occurrence in the body."""
        seen = {}
        for atom in self.atoms:
            for var in atom.args:
                seen.setdefault(var, None)

        return tuple(seen)

    def join_vars(self):
        """Variables that occur in more than one atom."""
        counts = {}
        for atom in self.atoms:
            for var in atom.variables:
                counts[var] = counts.get(var, 0) + 1

        return frozenset(var for var, count in counts.items() if count > 1)

    def atom_attribute_map(self, j, attributes):
        """Map the attributes of the ``j``-th atom's relation to the
        variables at the same positions.

        :raises SchemaError: if the arity does not match.
        """
        atom = self.atoms[j]
        attributes = tuple(attributes)
        if len(attributes) != len(atom.args):
            raise SchemaError(f"Atom {atom} has arity {len(atom.args)} but "
                              f"{atom.relation} has arity {len(attributes)}")

        return dict(zip(attributes, atom.args))

    def check_schemas(self, schemas):
        """Check atom arities against relation attribute lists.

        :param schemas: relation name -> attribute tuple.
        :type schemas: dict[str, tuple[str, ...]]

        :raises SchemaError: for unknown relations or wrong arities.
        """
        for atom in self.atoms:
            if atom.relation not in schemas:
                raise SchemaError(f"Relation {atom.relation} is not bound")
            if len(schemas[atom.relation]) != len(atom.args):
                raise SchemaError(f"Atom {atom} has arity {len(atom.args)} "
                                  f"but {atom.relation} has arity "
                                  f"{len(schemas[atom.relation])}")

    def __str__(self):

        return format_query(self)


@dataclass(frozen=True)
class Hypergraph:
    """Query variables as vertices, one edge per atom occurrence."""
    vertices: tuple
    edges: tuple

    @property
    def incidence(self):
        """Variable -> indices of the edges containing it."""
        incidence = {vertex: [] for vertex in self.vertices}
        for j, edge in enumerate(self.edges):
            for vertex in edge:
                incidence[vertex].append(j)

        return {vertex: tuple(js) for vertex, js in incidence.items()}


@dataclass(frozen=True)
class VariableOrdering:
    """A permutation ``pi`` of the query variables."""
    pi: tuple

    def __post_init__(self):
        if len(set(self.pi)) != len(self.pi):
            raise ValueError(f"Ordering {self.pi} repeats a variable")

    def position(self, var):

        return self.pi.index(var)

    def covers(self, var, target, cond):
        """Test ``var`` in_pi ``(target|cond)``: the variable is in the
        target and every conditioning variable strictly precedes it."""
        if var not in target or var in cond:
            return False

        position = self.position(var)

        return all(self.position(u) < position for u in cond)


_TOKEN_RE = re.compile(r"\s*(?:(?P<ident>[A-Za-z0-9_]+)|(?P<implies>:-)"
                       r"|(?P<punct>[(),.]))")


def _tokenize(text):
    position = 0
    tokens = []

    while position < len(text):
        if text[position:].strip() == "":
            break

        match = _TOKEN_RE.match(text, position)
        if not match:
            offset = position + len(text[position:]) - len(
                text[position:].lstrip())
            raise QuerySyntaxError(f"Unexpected character "
                                   f"{text[offset]!r}", offset)

        kind = match.lastgroup
        tokens.append((kind, match.group(kind), match.start(kind)))
        position = match.end()

    tokens.append(("end", "", len(text)))

    return tokens


class _QueryParser:
    """Recursive descent parser for datalog-style query text."""

    def __init__(self, text):

        self.tokens = _tokenize(text)
        self.index = 0

    def peek(self):

        return self.tokens[self.index]

    def expect(self, kind, value=None):
        token_kind, token_value, position = self.tokens[self.index]

        if token_kind != kind or (value is not None and token_value != value):
            expected = value if value is not None else kind
            found = token_value or "end of input"
            raise QuerySyntaxError(f"Expected {expected!r}, found {found!r}",
                                   position)

        self.index += 1

        return token_value, position

    def term(self):
        name, _ = self.expect("ident")
        self.expect("punct", "(")

        args = []
        if self.peek()[1] != ")":
            args.append(self.expect("ident"))
            while self.peek()[1] == ",":
                self.index += 1
                args.append(self.expect("ident"))

        self.expect("punct", ")")

        return name, args

    def query(self):
        name, head = self.term()
        self.expect("implies")

        atoms = [self.term()]
        while self.peek()[1] == ",":
            self.index += 1
            atoms.append(self.term())

        if self.peek()[1] == ".":
            self.index += 1
        self.expect("end")

        head_vars = tuple(var for var, _ in head)
        if len(set(head_vars)) != len(head_vars):
            raise QuerySyntaxError(f"Head of {name} repeats a variable",
                                   head[0][1])

        body = []
        for relation, args in atoms:
            arg_names = tuple(var for var, _ in args)
            if len(set(arg_names)) != len(arg_names):
                raise QuerySyntaxError(f"Atom {relation} repeats a variable",
                                       args[0][1])
            body.append(Atom(relation, arg_names))

        return ConjunctiveQuery(name, head_vars, tuple(body))


def parse_query(text):
    """Parse a query ``Head(v1,...,vk) :- R(w...), S(w...), ... .``.

    Identifiers consist of letters, digits and underscores; whitespace
    is insignificant and the final period is optional.

    :param text: The query text.
    :type text: str

    :return: The query with atoms in source order.
    :rtype: :class:`ConjunctiveQuery`

    :raises QuerySyntaxError: with the offending position.
    """
    return _QueryParser(text).query()


def format_query(query):
    """Canonical text form of a query, the inverse of
    :func:`parse_query`."""
    head = f"{query.name}({','.join(query.head_vars)})"
    body = ", ".join(str(atom) for atom in query.atoms)

    return f"{head} :- {body}."


def load_query(path):
    """Read a query file; lines starting with ``%`` are comments."""
    text = Path(path).read_text(encoding="utf-8")
    lines = [line for line in text.splitlines()
             if not line.lstrip().startswith("%")]

    return parse_query("\n".join(lines))


def build_hypergraph(query):
    """The hypergraph of a query, one edge per atom occurrence.

    Self-joins yield repeated edges.

    :rtype: :class:`Hypergraph`
    """
    return Hypergraph(query.variables,
                      tuple(atom.variables for atom in query.atoms))


def is_berge_acyclic(hypergraph):
    """Test if the variable/edge incidence graph has no cycle.

    Two edges sharing two or more variables close a cycle immediately.

    :param hypergraph: The hypergraph to test.
    :type hypergraph: :class:`Hypergraph`

    :rtype: bool
    """
    components = UnionFind()

    for j, edge in enumerate(hypergraph.edges):
        edge_node = ("edge", j)
        for vertex in sorted(edge):
            vertex_node = ("vertex", vertex)
            if components[edge_node] == components[vertex_node]:
                return False
            components.union(edge_node, vertex_node)

    return True


def statistics_topological_order(stats, variables):
    """Find an ordering where every statistic's conditioning variables
    precede its other target variables.

    :param stats: The ``(V, U)`` pairs of the statistics deg(V|U).
    :type stats: iterable[tuple[iterable[str], iterable[str]]]

    :param variables: The query variables; their order breaks ties.
    :type variables: iterable[str]

    :return: The ordering, or ``None`` when the statistics are cyclic.
    :rtype: :class:`VariableOrdering` or None
    """
    variables = list(variables)
    rank = {var: i for i, var in enumerate(variables)}

    graph = nx.DiGraph()
    graph.add_nodes_from(variables)

    for target, cond in stats:
        cond = set(iter_wrapper(cond))
        for v in set(iter_wrapper(target)) - cond:
            for u in cond:
                graph.add_edge(u, v)

    try:
        order = list(nx.lexicographical_topological_sort(graph,
                                                         key=rank.get))
    except nx.NetworkXUnfeasible:
        return None

    return VariableOrdering(tuple(order))
