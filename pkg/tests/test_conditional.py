import pytest
from sympy import oo

from pcebounds.model import Relation
from pcebounds.stats import (BUCKET, COMMON, MCV, PER_VALUE, WHOLE,
                             build_conditional_stats, equi_depth_buckets)


def _by_condition(entries):

    return {(entry.condition.kind, entry.condition.value,
             entry.condition.lo, entry.condition.scope): entry.value
            for entry in entries}


def test_most_common_value_of_skewed_relation(skewed):
    entries = build_conditional_stats(skewed, "Y", "X", ("Y", "Z"), [oo],
                                      mcv_count=1)

    mcv, common = entries
    assert mcv.condition.kind == MCV
    assert mcv.condition.value == "b"
    # sigma_{Y=b}(R) has deg(YZ|X) = (2,1,1)
    assert mcv.value == 2.0
    assert common.condition.kind == COMMON
    assert common.value == 1.0


def test_buckets_of_skewed_relation(skewed):
    entries = build_conditional_stats(skewed, "Y", (), "X", [1], mcv_count=1,
                                      buckets=2)

    assert _by_condition(entries) == {
        (MCV, "b", None, None): 3.0,
        (COMMON, None, None, None): 2.0,
        (BUCKET, None, "a", PER_VALUE): 2.0,
        (BUCKET, None, "a", WHOLE): 2.0,
        (BUCKET, None, "c", PER_VALUE): 1.0,
        (BUCKET, None, "c", WHOLE): 2.0,
    }
    assert all(entry.relation == "R" for entry in entries)


def test_key_attribute_gives_unit_sequences():
    relation = Relation("R", ("A", "B"), frozenset({(1, 5), (2, 5), (3, 6)}))
    entries = build_conditional_stats(relation, "A", (), "B", [1, 2, oo])

    assert [entry.condition.kind for entry in entries] == [COMMON] * 3
    assert [entry.value for entry in entries] == [1.0, 1.0, 1.0]


def test_negative_counts(skewed):
    with pytest.raises(ValueError):
        build_conditional_stats(skewed, "Y", (), "X", [1], mcv_count=-1)
    with pytest.raises(ValueError):
        build_conditional_stats(skewed, "Y", (), "X", [1], buckets=-1)


def test_equi_depth_buckets():
    values = [1, 2, 3, 4]
    frequencies = {1: 5, 2: 1, 3: 1, 4: 5}

    assert equi_depth_buckets(values, frequencies, 2) == [[1, 2], [3, 4]]
    assert equi_depth_buckets(values, frequencies, 10) == \
        [[1], [2], [3, 4]]
    assert equi_depth_buckets(values, frequencies, 0) == []
    assert equi_depth_buckets([], {}, 3) == []
