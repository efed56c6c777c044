"""Filter predicates and the selection of conditional statistics.

Predicates pick which catalog entry bounds a degree sequence of a
filtered relation. AND takes the minimum of its children and OR their
sum, which is sound for lp-norms with p >= 1.
"""
import re
from dataclasses import dataclass

from ..config import format_norm_order, norm_order
from ..exceptions import MissingStatisticError, PredicateError
from .entries import BUCKET, COMMON, GLOBAL_CONDITION, MCV, PER_VALUE, WHOLE

EQ = "eq"
IN = "in"
AND = "and"
OR = "or"
NONE = "none"


@dataclass(frozen=True)
class PredicateExpr:
    """A node of a predicate tree.

    :param op: One of ``eq``, ``in``, ``and``, ``or`` and ``none``.
    :type op: str

    :param attr: The attribute, for ``eq`` and ``in``.
    :type attr: str

    :param values: The compared values, for ``eq`` (one value) and
        ``in``.
    :type values: tuple

    :param children: The operands, for ``and`` and ``or``.
    :type children: tuple[:class:`PredicateExpr`, ...]

    :param relation: An optional relation qualifier (``R.A = 5``).
    :type relation: str
    """
    op: str
    attr: str = None
    values: tuple = ()
    children: tuple = ()
    relation: str = None

    def __post_init__(self):
        if self.op not in (EQ, IN, AND, OR, NONE):
            raise PredicateError(f"Unknown predicate operator {self.op!r}")
        if self.op in (EQ, IN) and (self.attr is None or not self.values):
            raise PredicateError(f"{self.op} needs an attribute and values")
        if self.op == EQ and len(self.values) != 1:
            raise PredicateError("eq compares exactly one value")
        if self.op in (AND, OR) and not self.children:
            raise PredicateError(f"{self.op} needs operands")

    def __str__(self):
        if self.op == NONE:
            return "none"
        if self.op in (AND, OR):
            return "(" + f" {self.op} ".join(map(str, self.children)) + ")"

        attr = f"{self.relation}.{self.attr}" if self.relation else self.attr
        if self.op == EQ:
            return f"{attr}={self.values[0]!r}"

        return f"{attr} in ({','.join(repr(v) for v in self.values)})"


NO_PREDICATE = PredicateExpr(NONE)


def eq(attr, value, relation=None):

    return PredicateExpr(EQ, attr, (value,), relation=relation)


def in_(attr, values, relation=None):

    return PredicateExpr(IN, attr, tuple(values), relation=relation)


def and_(*children):

    return PredicateExpr(AND, children=tuple(children))


def or_(*children):

    return PredicateExpr(OR, children=tuple(children))


_TOKEN_RE = re.compile(r"\s*(?:(?P<number>-?\d+)(?![A-Za-z_])"
                       r"|(?P<string>'[^']*'|\"[^\"]*\")"
                       r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
                       r"|(?P<punct>[=(),.]))")


def _tokenize(text):
    tokens = []
    position = 0

    while text[position:].strip():
        match = _TOKEN_RE.match(text, position)
        if not match:
            raise PredicateError(f"Unexpected character in predicate at "
                                 f"position {position}: {text[position:]!r}")

        kind = match.lastgroup
        tokens.append((kind, match.group(kind)))
        position = match.end()

    tokens.append(("end", ""))

    return tokens


class _PredicateParser:

    def __init__(self, text):

        self.tokens = _tokenize(text)
        self.index = 0

    def peek(self):

        return self.tokens[self.index]

    def keyword(self, word):
        kind, value = self.peek()

        return kind == "ident" and value.lower() == word

    def expect(self, kind, value=None):
        token_kind, token_value = self.peek()
        if token_kind != kind or (value is not None and token_value != value):
            raise PredicateError(f"Expected {value or kind!r} in predicate, "
                                 f"found {token_value or 'end of input'!r}")
        self.index += 1

        return token_value

    def value(self):
        kind, value = self.peek()
        self.index += 1

        if kind == "number":
            return int(value)
        if kind == "string":
            return value[1:-1]
        if kind == "ident":
            return value

        raise PredicateError(f"Expected a value in predicate, found "
                             f"{value or 'end of input'!r}")

    def disjunction(self):
        children = [self.conjunction()]
        while self.keyword(OR):
            self.index += 1
            children.append(self.conjunction())

        return children[0] if len(children) == 1 else or_(*children)

    def conjunction(self):
        children = [self.comparison()]
        while self.keyword(AND):
            self.index += 1
            children.append(self.comparison())

        return children[0] if len(children) == 1 else and_(*children)

    def comparison(self):
        if self.peek() == ("punct", "("):
            self.index += 1
            expr = self.disjunction()
            self.expect("punct", ")")
            return expr

        relation = None
        attr = self.expect("ident")
        if self.peek() == ("punct", "."):
            self.index += 1
            relation, attr = attr, self.expect("ident")

        if self.peek() == ("punct", "="):
            self.index += 1
            return eq(attr, self.value(), relation)

        if self.keyword(IN):
            self.index += 1
            self.expect("punct", "(")
            values = [self.value()]
            while self.peek() == ("punct", ","):
                self.index += 1
                values.append(self.value())
            self.expect("punct", ")")
            return in_(attr, values, relation)

        raise PredicateError(f"Expected '=' or 'in' after {attr!r}")

    def parse(self):
        expr = self.disjunction()
        self.expect("end")

        return expr


def parse_predicate(text):
    """Parse a predicate like ``A=5 and (B=3 or B=4)`` or
    ``R.C in (1,2,'x')``.

    Integers become ints, quoted or bare words strings. Empty text is
    the empty predicate.

    :rtype: :class:`PredicateExpr`

    :raises PredicateError: on a syntax error.
    """
    if text is None or not text.strip():
        return NO_PREDICATE

    return _PredicateParser(text).parse()


def restrict_predicate(pred, relation, attributes):
    """Keep the part of a predicate one relation can answer.

    Comparisons on other relations or unknown attributes become
    ``none``. AND drops such children, an OR with one becomes ``none``.

    :param pred: The predicate.
    :type pred: :class:`PredicateExpr`

    :param relation: The relation name.
    :type relation: str

    :param attributes: The relation's attributes.
    :type attributes: iterable[str]

    :rtype: :class:`PredicateExpr`
    """
    attributes = set(attributes)

    if pred.op == NONE:
        return pred

    if pred.op in (EQ, IN):
        if pred.relation not in (None, relation) or pred.attr not in attributes:
            return NO_PREDICATE
        return pred

    children = [restrict_predicate(child, relation, attributes)
                for child in pred.children]

    if pred.op == AND:
        children = [child for child in children if child.op != NONE]
        if not children:
            return NO_PREDICATE
        return children[0] if len(children) == 1 else and_(*children)

    if any(child.op == NONE for child in children):
        return NO_PREDICATE

    return or_(*children)


def _require_additive(p, pred):
    if norm_order(p) < 1:
        raise PredicateError(f"Cannot combine {pred} by summation for "
                             f"p={format_norm_order(p)}; needs p >= 1")


class _Selector:
    """Resolves predicates against one (relation, U, V, p) slot."""

    def __init__(self, catalog, relation, cond, target, p):
        self.catalog = catalog
        self.relation = relation
        self.cond = frozenset(cond)
        self.target = frozenset(target) - self.cond
        self.p = norm_order(p)

        self.global_value = catalog.lookup(relation, self.cond, self.target,
                                           self.p, GLOBAL_CONDITION)
        if self.global_value is None:
            order = format_norm_order(self.p)
            raise MissingStatisticError(
                f"No statistic ||deg_{relation}("
                f"{','.join(sorted(self.target))}|"
                f"{','.join(sorted(self.cond))})||_{order}")

    def conditions(self, attr):

        return self.catalog.conditional_entries(self.relation, self.cond,
                                                self.target, self.p, attr)

    def equal(self, attr, value):
        entries = self.conditions(attr)

        for entry in entries:
            if entry.condition.kind == MCV and entry.condition.value == value:
                return entry.value

        for entry in entries:
            if entry.condition.kind == COMMON:
                return entry.value

        for entry in entries:
            if (entry.condition.kind == BUCKET
                    and entry.condition.scope == PER_VALUE
                    and entry.condition.contains(value)):
                return entry.value

        return self.global_value

    def member(self, pred):
        if len(set(pred.values)) == 1:
            return self.equal(pred.attr, pred.values[0])

        _require_additive(self.p, pred)

        entries = self.conditions(pred.attr)
        mcvs = {entry.condition.value for entry in entries
                if entry.condition.kind == MCV}
        wholes = [entry for entry in entries
                  if entry.condition.kind == BUCKET
                  and entry.condition.scope == WHOLE]

        total = 0.0
        by_bucket = {}
        for value in dict.fromkeys(pred.values):
            bucket = next((entry for entry in wholes if value not in mcvs
                           and entry.condition.contains(value)), None)
            if bucket is None:
                total += self.equal(pred.attr, value)
            else:
                by_bucket.setdefault(bucket, []).append(value)

        # sigma_{A in list} is contained in sigma_{A in bucket}
        for bucket, values in by_bucket.items():
            total += min(bucket.value,
                         sum(self.equal(pred.attr, v) for v in values))

        return min(total, self.global_value)

    def select(self, pred):
        if pred.op == NONE:
            return self.global_value
        if pred.op == EQ:
            return self.equal(pred.attr, pred.values[0])
        if pred.op == IN:
            return self.member(pred)

        values = [self.select(child) for child in pred.children]
        if pred.op == AND:
            return min(values)

        _require_additive(self.p, pred)

        return min(sum(values), self.global_value)


def select_stat(catalog, relation, cond, target, p, pred=NO_PREDICATE):
    """Bound ``||deg_{sigma_pred(R)}(V|U)||_p`` from catalog entries.

    ``none`` gives the global statistic. ``A = a`` uses the MCV entry
    of a, else the common entry of A, else the bucket holding a, else
    the global statistic. AND takes the minimum, OR and IN the sum
    (requiring p >= 1), never above the global statistic.

    :param catalog: Any object with ``lookup`` and
        ``conditional_entries``, normally a
        :class:`~pcebounds.catalog.StatisticsCatalog`.

    :param relation: The relation name.
    :type relation: str

    :param cond: The conditioning attributes U.
    :type cond: iterable[str]

    :param target: The target attributes V.
    :type target: iterable[str]

    :param p: The norm order.

    :param pred: The predicate on the relation.
    :type pred: :class:`PredicateExpr`, optional

    :return: The bound on the norm, in linear scale.
    :rtype: float

    :raises MissingStatisticError: without a global entry.
    :raises PredicateError: for a sum with p < 1.
    """
    selector = _Selector(catalog, relation, cond, target, p)

    return float(selector.select(pred))
