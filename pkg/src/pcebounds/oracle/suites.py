"""Seeded property suites checking every bound against exact
evaluation."""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

import numpy as np
from sympy import Rational, oo

from ..bounds.cover import agm_bound, bound_sketch, chain_bound
from ..bounds.dsb import dsb_for_query, rank_product
from ..bounds.instantiate import instantiate_statistics
from ..bounds.polymatroid import elemental_inequalities, polyb
from ..builder import load_directory
from ..estimate import estimate
from ..exceptions import PCEError
from ..model import load_query
from ..stats.compress import CompressedDegreeSequence, cdf_upper_compress, \
    elementwise_upper_compress
from ..stats.degree import DegreeSequence, lp_norm
from .entropy import entropy_vector, marginal_entropy, \
    verify_norm_constraint
from .inequalities import CHAIN_COVERAGE, InequalityCheck, \
    verify_inequalities
from .instances import ALL, CARDINALITY, MAX_DEGREE, SHAPES, \
    random_instance, true_statistics
from .join import exact_join

logger = logging.getLogger(__name__)

SUITES = ("soundness", "dominance", "shannon", "compression")

# Relative tolerance of comparisons between bounds, in log space
DOMINANCE_TOLERANCE = 1e-6

# Relative tolerance of bounds against exact counts
SOUNDNESS_TOLERANCE = 1e-6

# Tolerance of the monotonicity check, log space
MONOTONICITY_TOLERANCE = 1e-9

ENTROPY_NORMS = (Rational(1), Rational(2), Rational(3), oo)

# Closed forms checked on each instance shape
SHAPE_FAMILIES = {
    "J2": (("join_l2", None),),
    "J3": (("path3_lp", 2), ("path3_lp", 3)),
    "C3": (("triangle_agm", None), ("triangle_l2", None),
           ("triangle_l3", None)),
}


@dataclass
class SuiteResult:
    """Counts of one suite run.

    :param name: The suite.
    :type name: str

    :param trials: Number of random trials.
    :type trials: int

    :param checks: Number of inequalities evaluated.
    :type checks: int

    :param violations: One message per failed check.
    :type violations: list[str]
    """
    name: str
    trials: int
    checks: int = 0
    violations: list = field(default_factory=list)


@dataclass
class SuiteReport:
    """The results of one ``verify`` run."""
    seed: int
    trials: int
    suites: list = field(default_factory=list)

    @property
    def violations(self):

        return sum(len(suite.violations) for suite in self.suites)

    @property
    def ok(self):

        return self.violations == 0


def _shape(rng):

    return SHAPES[int(rng.integers(len(SHAPES)))]


def _soundness_checks(query, database, shape=None):
    count = exact_join(database, query).count
    catalog = true_statistics(database, query)

    checks = []
    for outcome in estimate(query, catalog).outcomes:
        if outcome.ok:
            checks.append(InequalityCheck(f"{outcome.method} >= |Q|",
                                          float(count), outcome.result.bound,
                                          SOUNDNESS_TOLERANCE))

    for family, p in SHAPE_FAMILIES.get(shape, ()):
        checks.extend(verify_inequalities(database, family, p))
    checks.extend(verify_inequalities(database, CHAIN_COVERAGE, query=query))

    return checks


def soundness_trial(rng):
    """Every bound, closed form and chain bound cover on one random
    instance."""
    shape = _shape(rng)
    query, database = random_instance(rng, shape)

    return query, _soundness_checks(query, database, shape)


def _log_check(name, smaller, larger):

    return InequalityCheck(name, smaller.log_bound, larger.log_bound,
                           DOMINANCE_TOLERANCE)


def dominance_trial(rng):
    """The order of the cover bounds and the polymatroid bound, and
    monotonicity of the polymatroid bound in its statistics."""
    query, database = random_instance(rng, _shape(rng))

    stats = instantiate_statistics(
        query, true_statistics(database, query, kind=MAX_DEGREE))
    poly = polyb(query, stats.constraints)
    chain = chain_bound(query, stats.cover)
    sketch = bound_sketch(query, stats.cover)
    agm = agm_bound(query, stats.cover)

    checks = [_log_check("polyb <= cb", poly, chain),
              _log_check("cb <= boundsketch", chain, sketch),
              _log_check("cb <= agm", chain, agm)]

    cardinalities = instantiate_statistics(
        query, true_statistics(database, query, kind=CARDINALITY)).cover
    chain = chain_bound(query, cardinalities)
    agm = agm_bound(query, cardinalities)
    checks.append(_log_check("cb <= agm (cardinalities)", chain, agm))
    checks.append(_log_check("agm <= cb (cardinalities)", agm, chain))

    extra = instantiate_statistics(
        query, true_statistics(database, query, kind=ALL)).constraints
    added = extra[int(rng.integers(len(extra)))]
    more = polyb(query, stats.constraints + (added,))
    checks.append(InequalityCheck(f"polyb with {added.label}",
                                  more.log_bound, poly.log_bound,
                                  MONOTONICITY_TOLERANCE))

    return query, checks


def _shannon_checks(query, database):
    result = exact_join(database, query, materialize=True)
    if not result.count:
        return []

    entropies = entropy_vector(result.variables, result.tuples)
    checks = [InequalityCheck(
        "h(all) = log|Q|",
        abs(marginal_entropy(result.tuples, range(len(result.variables)))
            - math.log(result.count)), 0.0)]

    for inequality in _elemental(entropies):
        checks.append(InequalityCheck("elemental inequality", 0.0,
                                      inequality))

    for j, atom in enumerate(query.atoms):
        relation = database[atom.relation]
        attributes = relation.attributes
        for size in range(len(attributes) + 1):
            for cond in combinations(attributes, size):
                target = [attr for attr in attributes if attr not in cond]
                for p in ENTROPY_NORMS:
                    check = verify_norm_constraint(database, relation, cond,
                                                   target, p, query, j,
                                                   entropies)
                    checks.append(InequalityCheck(
                        f"norm constraint {atom} ({','.join(target)}|"
                        f"{','.join(cond)}) p={p}", check.lhs, check.rhs))

    return checks


def _elemental(entropies):
    for inequality in elemental_inequalities(len(entropies.variables)):
        yield sum(coef * entropies.values[mask] for mask, coef in inequality)


def shannon_trial(rng):
    """Elemental Shannon inequalities and norm constraints of the
    entropies of a random query output."""
    query, database = random_instance(rng, _shape(rng))

    return query, _shannon_checks(query, database)


def _sorted_sequence(rng, size, low):

    return sorted((int(v) for v in rng.integers(low, 10, size=size)),
                  reverse=True)


def _cdf_slack(upper, sequence):
    upper_cdf, cdf = upper.cdf(), sequence.cdf()
    size = max(len(upper_cdf), len(cdf))
    upper_cdf = np.pad(upper_cdf, (0, size - len(upper_cdf)), mode="edge")
    cdf = np.pad(cdf, (0, size - len(cdf)), mode="edge")

    return float((upper_cdf - cdf).min())


def compression_trial(rng):
    """Summation by parts, the gain of the degree sequence bound and
    the dominance of compressed sequences."""
    size = int(rng.integers(1, 12))
    a = _sorted_sequence(rng, size, 1)
    b = _sorted_sequence(rng, size, 0)

    exact_a = DegreeSequence(None, (), (), tuple(a))
    exact_b = CompressedDegreeSequence(tuple((v, 1) for v in b))
    max_runs = int(rng.integers(1, 4))

    checks = []
    dominating = [cdf_upper_compress(exact_a, max_runs),
                  elementwise_upper_compress(exact_a, max_runs),
                  CompressedDegreeSequence(tuple(
                      (v + float(rng.integers(0, 3)), 1) for v in a))]
    exact_sum = rank_product(exact_a, exact_b)
    for compressed in dominating:
        checks.append(InequalityCheck("cdf dominance", 0.0,
                                      _cdf_slack(compressed, exact_a)))
        checks.append(InequalityCheck("sum a''b >= sum ab", exact_sum,
                                      rank_product(compressed, exact_b)))

    elementwise = dominating[1]
    checks.append(InequalityCheck("elementwise l1 growth",
                                  lp_norm(exact_a, 1),
                                  lp_norm(elementwise, 1)))

    positive_b = DegreeSequence(None, (), (), tuple(_sorted_sequence(
        rng, size, 1)))
    dsb = rank_product(exact_a, positive_b)
    first_a, first_b = a[0], positive_b.degrees[0]
    for name, naive in (("a1 |b|1", first_a * lp_norm(positive_b, 1)),
                        ("|a|1 b1", lp_norm(exact_a, 1) * first_b)):
        checks.append(InequalityCheck(f"dsb <= {name}", dsb, naive))
        if len(set(a)) > 1 and len(set(positive_b.degrees)) > 1:
            # Integer sums, so strict means at least 1 apart
            checks.append(InequalityCheck(f"dsb < {name}", dsb + 1, naive))

    query, database = random_instance(rng, "J2")
    count = exact_join(database, query).count
    result = dsb_for_query(query, true_statistics(database, query))
    checks.append(InequalityCheck("dsb >= |Q|", float(count), result.bound,
                                  SOUNDNESS_TOLERANCE))

    return query, checks


TRIALS = {
    "soundness": soundness_trial,
    "dominance": dominance_trial,
    "shannon": shannon_trial,
    "compression": compression_trial,
}


def fixture_instances(data_dir):
    """The queries of a data directory with their relations.

    Every ``*.csv`` file is a relation named after the file, every
    ``*.cq`` file a query. Queries over relations that are not there
    are skipped.

    :rtype: list[tuple[:class:`~pcebounds.model.ConjunctiveQuery`,
        :class:`~pcebounds.catalog.Database`]]
    """
    data_dir = Path(data_dir)
    database = load_directory(data_dir)

    instances = []
    for path in sorted(data_dir.glob("*.cq")):
        query = load_query(path)
        if all(atom.relation in database for atom in query.atoms):
            instances.append((query, database))
        else:
            logger.info("Skipping %s: unbound relations", path.name)

    return instances


def _run_trial(trial, *args):
    try:
        return trial(*args)
    except (PCEError, ValueError, ArithmeticError) as err:
        query = args[0] if len(args) > 1 else None
        return query, [InequalityCheck(
            f"raised {type(err).__name__}: {err}", 1.0, 0.0)]


def _fixture_checks(query, database, checks):

    return query, checks(query, database)


def run_suite(name, seed=0, trials=20, data_dir=None, workers=None):
    """Run a property suite.

    Each trial draws from its own generator spawned from the seed, so
    the report does not depend on the number of workers.

    :param name: One of :data:`SUITES` or ``"all"``.
    :type name: str

    :param seed: The random seed.
    :type seed: int, optional

    :param trials: Number of random trials per suite.
    :type trials: int, optional

    :param data_dir: A directory of fixture relations and queries,
        checked by the soundness and shannon suites in addition.
    :type data_dir: str or :class:`pathlib.Path`, optional

    :param workers: Number of worker threads.
    :type workers: int, optional

    :rtype: :class:`SuiteReport`

    :raises ValueError: for an unknown suite or negative trials.
    """
    if name != "all" and name not in SUITES:
        raise ValueError(f"Unknown suite {name!r}; choose from "
                         f"{', '.join(SUITES + ('all',))}")
    if trials < 0:
        raise ValueError("The number of trials must be non-negative")

    names = SUITES if name == "all" else (name,)
    fixtures = fixture_instances(data_dir) if data_dir is not None else []

    report = SuiteReport(seed, trials)
    for suite_name in names:
        trial = TRIALS[suite_name]
        sequence = np.random.SeedSequence([seed, SUITES.index(suite_name)])
        generators = [np.random.default_rng(child)
                      for child in sequence.spawn(trials)]

        with ThreadPoolExecutor(max_workers=workers) as executor:
            outcomes = list(executor.map(
                lambda rng: _run_trial(trial, rng), generators))

        for query, database in fixtures:
            if suite_name == "soundness":
                outcomes.append(_run_trial(_fixture_checks,
                                           query, database, _soundness_checks))
            elif suite_name == "shannon":
                outcomes.append(_run_trial(_fixture_checks,
                                           query, database, _shannon_checks))

        result = SuiteResult(suite_name, trials)
        for i, (query, checks) in enumerate(outcomes):
            result.checks += len(checks)
            for check in checks:
                if not check.passed:
                    result.violations.append(
                        f"trial {i} ({query}): {check.name}: "
                        f"{check.lhs!r} > {check.rhs!r}")

        for message in result.violations:
            logger.warning("%s: %s", suite_name, message)
        logger.info("Suite %s: %d checks, %d violations", suite_name,
                    result.checks, len(result.violations))

        report.suites.append(result)

    return report
