"""The polymatroid bound.

The bound maximizes h(all variables) over polymatroids h satisfying
the norm constraints of the statistics. Polymatroids are given by the
elemental Shannon inequalities over 2^n - 1 unknowns, one per non-empty
variable subset; h(empty set) is fixed at 0 and left out.
"""
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from sympy import oo

from ..config import POLYB_MAX_VARS
from ..exceptions import LinearProgramError, UnboundedBoundError
from ..lp import GE, LE, LinearProgram, Status, solve
from ..model import Atom, ConjunctiveQuery
from ..utils import from_mask, to_mask
from .instantiate import NormConstraint
from .result import BoundResult, empty_result

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EntropyVector:
    """A value h(W) for every subset W of some variables.

    :param variables: The variables; bit i of a mask is variable i.
    :type variables: tuple[str, ...]

    :param values: h by subset mask, ``2^n`` entries, h(empty set) = 0.
    :type values: tuple[float, ...]
    """
    variables: tuple
    values: tuple

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        if len(values) != 1 << len(self.variables):
            raise ValueError(f"An entropy vector over {len(self.variables)} "
                             f"variables has {1 << len(self.variables)} "
                             "entries")
        if values[0] != 0.0:
            raise ValueError("h of the empty set must be 0")

        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "values", values)

    def mask(self, subset):

        return to_mask(subset, {var: i for i, var
                                in enumerate(self.variables)})

    def __getitem__(self, subset):
        """h of a set of variables."""
        return self.values[self.mask(subset)]

    def conditional(self, target, cond):
        """h(V|U) = h(UV) - h(U)."""
        cond = set(cond)

        return self[cond | set(target)] - self[cond]

    def as_dict(self):
        """Subsets, as sorted variable tuples, to h."""
        return {from_mask(mask, self.variables): value
                for mask, value in enumerate(self.values)}

    def shannon_violations(self, tolerance=1e-9):
        """Elemental Shannon inequalities violated by more than the
        tolerance, with their values."""
        violations = []
        for inequality in elemental_inequalities(len(self.variables)):
            value = sum(coef * self.values[mask] for mask, coef in inequality)
            if value < -tolerance:
                violations.append((inequality, value))

        return violations


@lru_cache(maxsize=None)
def elemental_inequalities(n):
    """The elemental Shannon inequalities over n variables.

    These are the n monotonicity inequalities
    ``h(all) - h(all - {i}) >= 0`` and the ``n(n-1)2^(n-3)``
    submodularity inequalities
    ``h(Wi) + h(Wj) - h(Wij) - h(W) >= 0`` for ``i < j`` and W avoiding
    both.

    :param n: The number of variables.
    :type n: int

    :return: Each inequality as ``(mask, coefficient)`` pairs whose sum
        is non-negative; terms of the empty set are left out.
    :rtype: tuple[tuple[tuple[int, int], ...], ...]

    :raises ValueError: unless ``1 <= n <= 14``.
    """
    if not 1 <= n <= POLYB_MAX_VARS:
        raise ValueError(f"Elemental inequalities need 1 <= n <= "
                         f"{POLYB_MAX_VARS}, got {n}")

    everything = (1 << n) - 1
    # With n = 1 monotonicity is just h(X) >= 0
    inequalities = [tuple((mask, coef) for mask, coef
                          in ((everything, 1), (everything & ~(1 << i), -1))
                          if mask)
                    for i in range(n)]

    for i, j in combinations(range(n), 2):
        pair = (1 << i) | (1 << j)
        rest = everything & ~pair
        # Enumerate the subsets W of the other variables
        w = rest
        while True:
            terms = ((w | 1 << i, 1), (w | 1 << j, 1), (w | pair, -1),
                     (w, -1))
            inequalities.append(tuple((mask, coef) for mask, coef in terms
                                      if mask))
            if w == 0:
                break
            w = (w - 1) & rest

    return tuple(inequalities)


def drop_nonjoin_vars(query):
    """Fuse the variables that occur in a single atom.

    In every atom, the variables appearing in no other atom are
    replaced by the first of them.

    :return: The reduced query and the variable -> representative map.
    :rtype: tuple[:class:`~pcebounds.model.ConjunctiveQuery`, dict]
    """
    join = query.join_vars()

    mapping = {}
    for atom in query.atoms:
        nonjoin = [var for var in atom.args if var not in join]
        for var in nonjoin:
            mapping[var] = nonjoin[0]
    for var in query.variables:
        mapping.setdefault(var, var)

    atoms = tuple(Atom(atom.relation,
                       tuple(dict.fromkeys(mapping[v] for v in atom.args)))
                  for atom in query.atoms)
    head = tuple(dict.fromkeys(mapping[v] for v in query.head_vars))

    return ConjunctiveQuery(query.name, head, atoms), mapping


def remap_constraints(constraints, mapping):
    """Rewrite constraints onto fused variables.

    :return: The rewritten constraints, or ``None`` when a constraint
        splits a fused group, which would change the bound.
    :rtype: list[:class:`NormConstraint`] or None
    """
    groups = {}
    for var, rep in mapping.items():
        groups.setdefault(rep, set()).add(var)

    remapped = []
    for constraint in constraints:
        for group in groups.values():
            if len(group) < 2:
                continue
            in_cond = group & constraint.cond
            in_target = group & constraint.target
            if in_cond and in_cond != group:
                return None
            if in_target and in_target != group:
                return None

        remapped.append(NormConstraint(
            {mapping[var] for var in constraint.cond},
            {mapping[var] for var in constraint.target},
            constraint.p, constraint.log_norm, constraint.label))

    return remapped


def _polymatroid_lp(variables, constraints, objective_mask):
    n = len(variables)
    index = {var: i for i, var in enumerate(variables)}

    objective = [0.0] * ((1 << n) - 1)
    objective[objective_mask - 1] = 1.0
    lp = LinearProgram(len(objective), objective, maximize=True)

    for inequality in elemental_inequalities(n):
        lp.add_constraint({mask - 1: coef for mask, coef in inequality}, GE,
                          0.0)

    for constraint in constraints:
        cond = to_mask(constraint.cond, index)
        joint = cond | to_mask(constraint.target, index)
        if not joint:
            continue

        coefficients = {joint - 1: 1.0}
        if cond:
            weight = 0.0 if constraint.p is oo else 1.0 / float(constraint.p)
            coefficients[cond - 1] = coefficients.get(cond - 1, 0.0) \
                + weight - 1.0
        lp.add_constraint(coefficients, LE, constraint.log_norm)

    return lp


def _solve_polymatroid(variables, constraints, objective_vars, method):
    if len(variables) > POLYB_MAX_VARS:
        raise ValueError(f"The polymatroid bound supports at most "
                         f"{POLYB_MAX_VARS} variables")

    index = {var: i for i, var in enumerate(variables)}
    lp = _polymatroid_lp(variables, constraints,
                         to_mask(objective_vars, index))

    result = solve(lp, method)
    if result.status is Status.UNBOUNDED:
        raise UnboundedBoundError("The statistics do not bound the query")
    if not result.optimal:
        raise LinearProgramError(f"Polymatroid LP {result.status.value}")

    return result.value, EntropyVector(variables,
                                       (0.0,) + tuple(result.point))


def polyb(query, constraints, objective_vars=None, method="auto",
          reduce=True):
    """The polymatroid bound of a query.

    :param query: The query.
    :type query: :class:`~pcebounds.model.ConjunctiveQuery`

    :param constraints: The norm constraints over query variables.
    :type constraints: list[:class:`NormConstraint`]

    :param objective_vars: The variables whose projection is bounded,
        all of them by default. Fewer variables bound a group-by.
    :type objective_vars: iterable[str], optional

    :param method: The LP method, see :func:`pcebounds.lp.solve`.
    :type method: str, optional

    :param reduce: Fuse non-join variables first when that keeps the
        bound, only for the full objective.
    :type reduce: bool, optional

    :rtype: :class:`~pcebounds.bounds.result.BoundResult`

    :raises UnboundedBoundError: if some variable is unconstrained.
    :raises ValueError: for more than 14 variables or constraints on
        unknown variables.
    """
    variables = query.variables
    objective_vars = (frozenset(variables) if objective_vars is None
                      else frozenset(objective_vars))

    if not objective_vars:
        raise ValueError("The objective needs at least one variable")
    if not objective_vars <= set(variables):
        raise ValueError(f"Objective variables {sorted(objective_vars)} are "
                         f"not all in {query.name}")
    for constraint in constraints:
        if not constraint.variables <= set(variables):
            raise ValueError(f"Constraint {constraint.label} mentions "
                             "variables outside the query")

    for constraint in constraints:
        if constraint.log_norm == -math.inf:
            return empty_result("polyb", constraint.label)

    witness = {}
    if reduce and objective_vars == set(variables):
        reduced, mapping = drop_nonjoin_vars(query)
        remapped = remap_constraints(constraints, mapping)

        if remapped is not None and len(reduced.variables) < len(variables):
            logger.debug("Reduced %s from %d to %d variables", query.name,
                         len(variables), len(reduced.variables))
            variables = reduced.variables
            constraints = remapped
            objective_vars = frozenset(variables)
            witness["fused"] = {var: rep for var, rep in mapping.items()
                                if var != rep}

    value, entropy = _solve_polymatroid(variables, constraints,
                                        objective_vars, method)
    witness["entropy"] = entropy
    witness["objective"] = tuple(var for var in variables
                                 if var in objective_vars)

    return BoundResult("polyb", value, witness)
