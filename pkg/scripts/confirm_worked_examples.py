"""Confirm the hand-computed degree sequences, norms and bounds of the
fixture relations.
"""
import math
from pathlib import Path

from sympy import oo

from pcebounds.builder import build_catalog, load_database, load_directory
from pcebounds.config import load_stats_config
from pcebounds.estimate import estimate
from pcebounds.model import load_query
from pcebounds.oracle import exact_join
from pcebounds.stats.compress import cdf_upper_compress
from pcebounds.stats.degree import degree_sequence, lp_norm

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "fixtures"

database = load_directory(FIXTURE_DIR)
F = database["F"]

# Degree sequences of F(X,Y,Z)
expected_sequences = {
    (("X",), ("Y", "Z")): (3, 2, 2, 1),
    (("X",), ("Y",)): (2, 2, 2, 1),
    ((), ("X", "Y", "Z")): (8,),
    ((), ("X",)): (4,),
}

all_confirmed = True
for (cond, target), degrees in expected_sequences.items():
    sequence = degree_sequence(F, cond, target)
    if sequence.degrees != degrees:
        all_confirmed = False
        print(f"deg_F({','.join(target)}|{','.join(cond)}) is "
              f"{sequence.degrees}, expected {degrees}")

# Norms of deg_F(YZ|X)
sequence = degree_sequence(F, ("X",), ("Y", "Z"))
expected_norms = {1: 8.0, 2: math.sqrt(18), oo: 3.0}
for p, value in expected_norms.items():
    if not math.isclose(lp_norm(sequence, p), value):
        all_confirmed = False
        print(f"||deg_F(YZ|X)||_{p} is {lp_norm(sequence, p)}, "
              f"expected {value}")

# Two runs dominating (3,2,2,1)
compressed = cdf_upper_compress(sequence, 2)
if compressed.runs != ((3.0, 1), (2.0, 3)):
    all_confirmed = False
    print(f"The two-run compression is {compressed.runs}")

# Bounds on the skewed join
config = load_stats_config(FIXTURE_DIR / "stats.json")
catalog = build_catalog(load_database(FIXTURE_DIR, config), config,
                        FIXTURE_DIR)
query = load_query(FIXTURE_DIR / "skew.cq")
output_size = exact_join(database, query).count

expected_bounds = {"agm": 42.0, "cb": 28.0, "dsb": 22.0}
for outcome in estimate(query, catalog).outcomes:
    if not outcome.ok:
        all_confirmed = False
        print(f"{outcome.method} failed: {outcome.reason}")
        continue

    bound = outcome.result.bound
    if bound < output_size:
        all_confirmed = False
        print(f"{outcome.method} gives {bound} below |Q| = {output_size}")
    if outcome.method in expected_bounds and not math.isclose(
            bound, expected_bounds[outcome.method]):
        all_confirmed = False
        print(f"{outcome.method} gives {bound}, expected "
              f"{expected_bounds[outcome.method]}")

if all_confirmed:
    print(f"All worked examples are confirmed; the skewed join has "
          f"{output_size} tuples")
