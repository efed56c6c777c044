"""Closed-form output size bounds of small queries.

Each family is an inequality ``|Q| <= f(statistics)`` over a fixed query
shape, with f a sympy expression in one symbol per statistic. They hold
for every database and are implied by the polymatroid bound with the
same statistics.
"""
import math
from dataclasses import dataclass

from sympy import Rational, Symbol, lambdify, oo

from printutils import report_str

from ..config import format_norm_order, norm_order
from ..model import parse_query
from .instantiate import NormConstraint, log_statistic

JOIN_QUERY = "J2(X,Y,Z) :- R(X,Y), S(Y,Z)."
PATH_QUERY = "J3(X,Y,Z,U) :- R(X,Y), S(Y,Z), T(Z,U)."
TRIANGLE_QUERY = "C3(X,Y,Z) :- R(X,Y), S(Y,Z), T(Z,X)."

FAMILIES = ("join_l2", "path3_lp", "triangle_agm", "triangle_l2",
            "triangle_l3")


@dataclass(frozen=True)
class StatisticTerm:
    """A statistic ``||deg_R(V|U)||_p`` of one atom, over query
    variables."""
    symbol: Symbol
    atom: int
    cond: tuple
    target: tuple
    p: object


@dataclass(frozen=True)
class ClosedForm:
    """The inequality ``|Q| <= expr`` of one family."""
    family: str
    query: object
    terms: tuple
    expr: object

    @property
    def symbols(self):

        return tuple(term.symbol for term in self.terms)

    def evaluate(self, values):
        """The right-hand side for statistic values in linear scale.

        :param values: One value per term, in term order.
        :type values: list[float]

        :rtype: float
        """
        function = lambdify(self.symbols, self.expr, modules="math",
                            dummify=True)

        return float(function(*(float(v) for v in values)))

    def log_evaluate(self, values):
        """Natural log of the right-hand side, ``-inf`` when a used
        statistic is zero."""
        if any(v <= 0 for term, v in zip(self.terms, values)
               if term.symbol in self.expr.free_symbols):
            return -math.inf

        logs = [math.log(v) if v > 0 else 0.0 for v in values]

        # The forms are monomials, so log f is linear in the logs
        log_function = lambdify(self.symbols, _log_monomial(self.expr),
                                modules="math", dummify=True)

        return float(log_function(*logs))

    def constraints(self, values):
        """The statistics as polymatroid norm constraints."""
        return [NormConstraint(term.cond, term.target, term.p,
                               log_statistic(value), term.symbol.name)
                for term, value in zip(self.terms, values)]

    def __str__(self):

        return f"|{self.query.name}| <= {report_str(self.expr)}"


def _log_monomial(expr):
    """log of a product of powers, as a linear form in log symbols."""
    powers = expr.as_powers_dict() if expr.is_Mul else None
    if expr.is_Pow:
        base, exponent = expr.as_base_exp()
        return exponent * _log_monomial(base)
    if expr.is_Symbol:
        return expr
    if powers is not None:
        return sum(exponent * _log_monomial(base)
                   for base, exponent in powers.items())

    raise ValueError(f"{expr} is not a monomial")


def _term(query, j, cond, target, p):
    atom = query.atoms[j]
    p = norm_order(p)
    cond = tuple(cond)
    target = tuple(target)

    if not cond and set(target) == atom.variables:
        name = f"|{atom.relation}|"
    else:
        name = (f"||deg_{atom.relation}({''.join(target)}|{''.join(cond)})"
                f"||_{format_norm_order(p)}")

    return StatisticTerm(Symbol(name, positive=True), j, cond, target, p)


def closed_form(family, p=None):
    """Build one family of closed-form bounds.

    ``join_l2``: ``|J2| <= ||deg_R(X|Y)||_2 ||deg_S(Z|Y)||_2``.

    ``path3_lp``, for ``p >= 2``: ``|J3| <= (|R|^(p-2)
    ||deg_R(X|Y)||_2^2 ||deg_S(Z|Y)||_(p-1)^(p-1)
    ||deg_T(U|Z)||_p^p)^(1/p)``.

    ``triangle_agm``: ``|C3| <= (|R| |S| |T|)^(1/2)``.

    ``triangle_l2``: ``|C3| <= (||deg_R(Y|X)||_2^2 ||deg_S(Z|Y)||_2^2
    ||deg_T(X|Z)||_2^2)^(1/3)``.

    ``triangle_l3``: ``|C3| <= (||deg_R(Y|X)||_3^3 ||deg_S(Y|Z)||_3^3
    |T|^5)^(1/6)``.

    :param family: One of :data:`FAMILIES`.
    :type family: str

    :param p: The norm order of ``path3_lp``, 2 by default.

    :rtype: :class:`ClosedForm`

    :raises ValueError: for unknown families or ``p < 2``.
    """
    if family == "join_l2":
        query = parse_query(JOIN_QUERY)
        terms = (_term(query, 0, "Y", "X", 2), _term(query, 1, "Y", "Z", 2))
        a, b = (term.symbol for term in terms)
        expr = a * b

    elif family == "path3_lp":
        p = norm_order(2 if p is None else p)
        if p is oo or p < 2:
            raise ValueError("path3_lp needs a finite p >= 2")

        query = parse_query(PATH_QUERY)
        terms = (_term(query, 0, (), "XY", 1), _term(query, 0, "Y", "X", 2),
                 _term(query, 1, "Y", "Z", p - 1),
                 _term(query, 2, "Z", "U", p))
        r, dr, ds, dt = (term.symbol for term in terms)
        expr = (r ** (p - 2) * dr ** 2 * ds ** (p - 1) * dt ** p) ** (1 / p)

    elif family == "triangle_agm":
        query = parse_query(TRIANGLE_QUERY)
        terms = (_term(query, 0, (), "XY", 1), _term(query, 1, (), "YZ", 1),
                 _term(query, 2, (), "ZX", 1))
        r, s, t = (term.symbol for term in terms)
        expr = (r * s * t) ** Rational(1, 2)

    elif family == "triangle_l2":
        query = parse_query(TRIANGLE_QUERY)
        terms = (_term(query, 0, "X", "Y", 2), _term(query, 1, "Y", "Z", 2),
                 _term(query, 2, "Z", "X", 2))
        r, s, t = (term.symbol for term in terms)
        expr = (r ** 2 * s ** 2 * t ** 2) ** Rational(1, 3)

    elif family == "triangle_l3":
        query = parse_query(TRIANGLE_QUERY)
        terms = (_term(query, 0, "X", "Y", 3), _term(query, 1, "Z", "Y", 3),
                 _term(query, 2, (), "ZX", 1))
        r, s, t = (term.symbol for term in terms)
        expr = (r ** 3 * s ** 3 * t ** 5) ** Rational(1, 6)

    else:
        raise ValueError(f"Unknown inequality family {family!r}")

    return ClosedForm(family, query, terms, expr)
