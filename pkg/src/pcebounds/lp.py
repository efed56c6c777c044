"""Linear programs and a dense two-phase simplex solver.

Every bound LP is small and formulated in log space. The simplex
solver uses Bland's rule, so it terminates on degenerate programs;
scipy's HiGHS solver is available for programs whose dense tableau
would be large.
"""
import enum
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import csr_matrix

from .exceptions import LinearProgramError

logger = logging.getLogger(__name__)

LE = "<="
GE = ">="
EQ = "=="

SENSES = (LE, GE, EQ)

# Absolute feasibility tolerance, scaled by the magnitude of the rhs
FEASIBILITY_TOLERANCE = 1e-9

# Pivot and reduced cost tolerance of the simplex solver
PIVOT_TOLERANCE = 1e-11

# Tableaus larger than this are solved by HiGHS when method="auto"
AUTO_DENSE_CELLS = 2 * 10 ** 6


class Status(enum.Enum):
    """Outcome of a solve."""
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    FAILED = "failed"


@dataclass(frozen=True)
class LPResult:
    """The status, optimal value and point of a solved program.

    ``value`` and ``point`` are only meaningful for
    :attr:`Status.OPTIMAL`.
    """
    status: Status
    value: float = math.nan
    point: np.ndarray = None
    iterations: int = 0
    method: str = None

    @property
    def optimal(self):

        return self.status is Status.OPTIMAL


class LinearProgram:
    """A linear program over ``num_vars`` real variables.

    :param num_vars: The number of variables.
    :type num_vars: int

    :param objective: The objective coefficients, zero by default.
    :type objective: array_like, optional

    :param maximize: Maximize instead of minimize.
    :type maximize: bool, optional

    :param nonneg: Whether every variable, or each variable, must be
        non-negative.
    :type nonneg: bool or array_like[bool], optional
    """
    def __init__(self, num_vars, objective=None, maximize=False,
                 nonneg=True):

        self.num_vars = int(num_vars)

        if objective is None:
            objective = np.zeros(self.num_vars)
        self.objective = np.asarray(objective, dtype=float)
        if self.objective.shape != (self.num_vars,):
            raise ValueError(f"Objective has {self.objective.size} "
                             f"coefficients, expected {self.num_vars}")
        if not np.all(np.isfinite(self.objective)):
            raise ValueError("Objective coefficients must be finite")

        self.maximize = maximize

        if isinstance(nonneg, bool):
            nonneg = [nonneg] * self.num_vars
        self.nonneg = np.asarray(nonneg, dtype=bool)
        if self.nonneg.shape != (self.num_vars,):
            raise ValueError("One nonnegativity flag per variable expected")

        self.constraints = []

    def add_constraint(self, coefficients, sense, rhs):
        """Add the constraint ``coefficients . x <sense> rhs``.

        :param coefficients: A dense vector, or a mapping from variable
            index to coefficient.
        :type coefficients: array_like or dict[int, float]

        :param sense: One of ``"<="``, ``">="`` and ``"=="``.
        :type sense: str

        :param rhs: The right-hand side.
        :type rhs: float
        """
        if sense not in SENSES:
            raise ValueError(f"Unknown constraint sense {sense!r}")

        if isinstance(coefficients, dict):
            row = {int(j): float(a) for j, a in coefficients.items() if a}
        else:
            dense = np.asarray(coefficients, dtype=float)
            if dense.shape != (self.num_vars,):
                raise ValueError(f"Constraint has {dense.size} "
                                 f"coefficients, expected {self.num_vars}")
            row = {int(j): float(dense[j]) for j in np.flatnonzero(dense)}

        for j, a in row.items():
            if not 0 <= j < self.num_vars:
                raise ValueError(f"Variable index {j} out of range")
            if not math.isfinite(a):
                raise ValueError("Constraint coefficients must be finite")

        rhs = float(rhs)
        if not math.isfinite(rhs):
            raise ValueError("Constraint right-hand sides must be finite")

        self.constraints.append((row, sense, rhs))

    def __repr__(self):

        direction = "max" if self.maximize else "min"

        return (f"LinearProgram({direction}, {self.num_vars} variables, "
                f"{len(self.constraints)} constraints)")

    def dense(self):
        """The constraint matrix, senses and right-hand sides."""
        matrix = np.zeros((len(self.constraints), self.num_vars))
        for i, (row, _, _) in enumerate(self.constraints):
            for j, a in row.items():
                matrix[i, j] = a

        senses = [sense for _, sense, _ in self.constraints]
        rhs = np.array([rhs for _, _, rhs in self.constraints], dtype=float)

        return matrix, senses, rhs

    def evaluate(self, point):
        """The objective value at a point."""
        return float(self.objective @ np.asarray(point, dtype=float))

    def max_violation(self, point):
        """The largest constraint violation at a point, each scaled by
        ``max(1, |rhs|)``."""
        point = np.asarray(point, dtype=float)

        worst = float(np.max(-point[self.nonneg], initial=0.0))
        for row, sense, rhs in self.constraints:
            lhs = sum(a * point[j] for j, a in row.items())
            if sense == LE:
                violation = lhs - rhs
            elif sense == GE:
                violation = rhs - lhs
            else:
                violation = abs(lhs - rhs)
            worst = max(worst, violation / max(1.0, abs(rhs)))

        return worst


def _pivot(tableau, row, col):
    tableau[row] /= tableau[row, col]

    factors = tableau[:, col].copy()
    factors[row] = 0.0
    tableau -= np.outer(factors, tableau[row])


def _run_simplex(tableau, basis, max_iterations):
    """Minimize over a tableau in canonical form with Bland's rule.

    The last row holds the reduced costs and minus the objective value.
    """
    for iteration in range(max_iterations):
        reduced = tableau[-1, :-1]
        entering = np.flatnonzero(reduced < -PIVOT_TOLERANCE)
        if not entering.size:
            return Status.OPTIMAL, iteration

        col = int(entering[0])
        column = tableau[:-1, col]
        rows = np.flatnonzero(column > PIVOT_TOLERANCE)
        if not rows.size:
            return Status.UNBOUNDED, iteration

        ratios = tableau[rows, -1] / column[rows]
        best = ratios.min()
        ties = rows[ratios <= best + PIVOT_TOLERANCE * max(1.0, abs(best))]
        row = int(min(ties, key=lambda i: basis[i]))

        _pivot(tableau, row, col)
        basis[row] = col

    return Status.FAILED, max_iterations


def _standard_form(lp):
    """Minimization over non-negative variables with rhs >= 0."""
    matrix, senses, rhs = lp.dense()
    free = np.flatnonzero(~lp.nonneg)

    cost = -lp.objective if lp.maximize else lp.objective.copy()
    matrix = np.hstack([matrix, -matrix[:, free]])
    cost = np.concatenate([cost, -cost[free]])

    flip = {LE: GE, GE: LE, EQ: EQ}
    for i in np.flatnonzero(rhs < 0):
        matrix[i] *= -1
        rhs[i] *= -1
        senses[i] = flip[senses[i]]

    return matrix, senses, rhs, cost, free


def _solve_simplex(lp, max_iterations=None):
    matrix, senses, rhs, cost, free = _standard_form(lp)
    m, n = matrix.shape

    slack_rows = [i for i in range(m) if senses[i] != EQ]
    artificial_rows = [i for i in range(m) if senses[i] != LE]
    art_start = n + len(slack_rows)
    total = art_start + len(artificial_rows)

    if max_iterations is None:
        max_iterations = max(10_000, 10 * (m + total))

    tableau = np.zeros((m + 1, total + 1))
    tableau[:m, :n] = matrix
    tableau[:m, -1] = rhs
    basis = [None] * m

    for k, i in enumerate(slack_rows):
        tableau[i, n + k] = 1.0 if senses[i] == LE else -1.0
        if senses[i] == LE:
            basis[i] = n + k
    for k, i in enumerate(artificial_rows):
        tableau[i, art_start + k] = 1.0
        basis[i] = art_start + k

    # Phase 1: minimize the sum of artificial variables
    tableau[-1] = 0.0
    for i in artificial_rows:
        tableau[-1] -= tableau[i]
    tableau[-1, art_start:-1] = 0.0

    status, phase1_iterations = _run_simplex(tableau, basis, max_iterations)
    if status is not Status.OPTIMAL:
        return LPResult(Status.FAILED, iterations=phase1_iterations,
                        method="simplex")

    scale = max(1.0, float(np.abs(rhs).max(initial=0.0)))
    if -tableau[-1, -1] > FEASIBILITY_TOLERANCE * scale:
        return LPResult(Status.INFEASIBLE, iterations=phase1_iterations,
                        method="simplex")

    # Drive artificial variables out of the basis, dropping redundant rows
    keep = []
    for i in range(m):
        if basis[i] >= art_start:
            candidates = np.flatnonzero(
                np.abs(tableau[i, :art_start]) > PIVOT_TOLERANCE)
            if not candidates.size:
                continue
            _pivot(tableau, i, int(candidates[0]))
            basis[i] = int(candidates[0])
        keep.append(i)

    tableau = np.vstack([tableau[keep][:, list(range(art_start)) + [-1]],
                         np.zeros((1, art_start + 1))])
    basis = [basis[i] for i in keep]

    # Phase 2: the original objective in canonical form
    full_cost = np.concatenate([cost, np.zeros(art_start - n)])
    tableau[-1, :-1] = full_cost
    for i, var in enumerate(basis):
        tableau[-1] -= full_cost[var] * tableau[i]

    status, phase2_iterations = _run_simplex(
        tableau, basis, max_iterations - phase1_iterations)
    iterations = phase1_iterations + phase2_iterations

    if status is not Status.OPTIMAL:
        return LPResult(status, iterations=iterations, method="simplex")

    solution = np.zeros(art_start)
    for i, var in enumerate(basis):
        solution[var] = tableau[i, -1]

    point = solution[:lp.num_vars].copy()
    point[free] -= solution[lp.num_vars:n]

    return LPResult(Status.OPTIMAL, lp.evaluate(point), point, iterations,
                    "simplex")


def _solve_highs(lp):
    cost = -lp.objective if lp.maximize else lp.objective

    ub_rows, ub_rhs, eq_rows, eq_rhs = [], [], [], []
    for row, sense, rhs in lp.constraints:
        if sense == LE:
            ub_rows.append(row)
            ub_rhs.append(rhs)
        elif sense == GE:
            ub_rows.append({j: -a for j, a in row.items()})
            ub_rhs.append(-rhs)
        else:
            eq_rows.append(row)
            eq_rhs.append(rhs)

    def sparse(rows):
        if not rows:
            return None
        data, indices, indptr = [], [], [0]
        for row in rows:
            for j in sorted(row):
                indices.append(j)
                data.append(row[j])
            indptr.append(len(indices))
        return csr_matrix((data, indices, indptr),
                          shape=(len(rows), lp.num_vars))

    bounds = [(0, None) if nonneg else (None, None) for nonneg in lp.nonneg]

    result = linprog(cost, A_ub=sparse(ub_rows),
                     b_ub=ub_rhs if ub_rows else None,
                     A_eq=sparse(eq_rows), b_eq=eq_rhs if eq_rows else None,
                     bounds=bounds, method="highs")

    status = {0: Status.OPTIMAL, 2: Status.INFEASIBLE,
              3: Status.UNBOUNDED}.get(result.status, Status.FAILED)
    iterations = int(getattr(result, "nit", 0) or 0)

    if status is not Status.OPTIMAL:
        return LPResult(status, iterations=iterations, method="highs")

    point = np.asarray(result.x, dtype=float)

    return LPResult(Status.OPTIMAL, lp.evaluate(point), point, iterations,
                    "highs")


def dense_cells(lp):
    """Size of the dense simplex tableau of a program."""
    m = len(lp.constraints)
    columns = (lp.num_vars + int((~lp.nonneg).sum())
               + sum(1 for _, sense, _ in lp.constraints if sense != EQ)
               + sum(1 for _, sense, _ in lp.constraints if sense != LE))

    return (m + 1) * (columns + 1)


def solve(lp, method="simplex", max_iterations=None):
    """Solve a linear program.

    An optimal point is checked against every constraint before it is
    returned; a violation beyond :data:`FEASIBILITY_TOLERANCE` is
    reported as :attr:`Status.FAILED`, never as an optimum.

    :param lp: The program.
    :type lp: :class:`LinearProgram`

    :param method: ``"simplex"``, ``"highs"`` or ``"auto"``, which picks
        HiGHS for tableaus above :data:`AUTO_DENSE_CELLS` cells.
    :type method: str, optional

    :param max_iterations: Pivot limit of the simplex solver.
    :type max_iterations: int, optional

    :rtype: :class:`LPResult`
    """
    if method == "auto":
        method = "highs" if dense_cells(lp) > AUTO_DENSE_CELLS else "simplex"

    if method == "simplex":
        result = _solve_simplex(lp, max_iterations)
    elif method == "highs":
        result = _solve_highs(lp)
    else:
        raise ValueError(f"Unknown LP method {method!r}")

    if result.optimal:
        violation = lp.max_violation(result.point)
        if violation > FEASIBILITY_TOLERANCE:
            logger.warning("LP solution violates a constraint by %.3g",
                           violation)
            result = LPResult(Status.FAILED, iterations=result.iterations,
                              method=result.method)
        else:
            # Clear round-off below zero on non-negative variables
            point = result.point.copy()
            point[lp.nonneg] = np.maximum(point[lp.nonneg], 0.0)
            result = LPResult(result.status, result.value, point,
                              result.iterations, result.method)

    logger.debug("Solved %r with %s: %s after %d iterations", lp,
                 result.method, result.status.value, result.iterations)

    return result


def solve_or_raise(lp, method="simplex"):
    """Like :func:`solve`, but raise on numeric failure.

    :raises LinearProgramError: if the solver failed.
    """
    result = solve(lp, method)
    if result.status is Status.FAILED:
        raise LinearProgramError(f"Solver failed on {lp!r}")

    return result
