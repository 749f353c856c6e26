import random
from collections import Counter

import pytest

from permadiag.core import parse_set_partition
from permadiag.forests import (
    CapExceeded,
    ForestInterval,
    PartitionForest,
    components,
    enumerate_forests,
    enumerate_trees,
    forest_covers,
    forest_dim,
    forest_leq,
    forest_refinements,
    interval_mobius,
    is_partition_forest,
    make_forest,
    minimum_forest,
)


def F(ell, n, *texts):
    return make_forest(ell, n, [parse_set_partition(t) for t in texts])


def test_is_partition_forest():
    assert is_partition_forest(2, 3, [parse_set_partition("12|3"), parse_set_partition("13|2")])
    assert not is_partition_forest(2, 3, [parse_set_partition("12|3"), parse_set_partition("12|3")])
    # a single partition is always a hyperforest
    for t in ["1|2|3|4", "12|34", "1234"]:
        assert is_partition_forest(1, 4, [parse_set_partition(t)])


def test_is_partition_forest_rejects_malformed():
    with pytest.raises(ValueError):
        is_partition_forest(1, 3, [((1, 2), (2, 3))])
    with pytest.raises(ValueError):
        is_partition_forest(2, 3, [parse_set_partition("12|3")])


def test_forest_dim():
    assert forest_dim(F(2, 3, "1|2|3", "1|2|3")) == 2
    assert forest_dim(F(2, 3, "12|3", "13|2")) == 0
    assert forest_dim(F(1, 4, "1234")) == 0


def test_tree_counts():
    assert sum(1 for _ in enumerate_trees(2, 3)) == 8
    assert sum(1 for _ in enumerate_trees(2, 4)) == 50


def test_forest_count_and_strata():
    forests = list(enumerate_forests(2, 3))
    assert len(forests) == 15
    strata = Counter(forest_dim(f) for f in forests)
    assert strata == {0: 8, 1: 6, 2: 1}


def test_enumeration_is_sorted_and_unique():
    forests = list(enumerate_forests(2, 3))
    keys = [f.render() for f in forests]
    assert keys == sorted(keys)
    assert len(set(keys)) == len(keys)
    trees = list(enumerate_trees(2, 4))
    assert [t.render() for t in trees] == sorted(t.render() for t in trees)
    assert all(forest_dim(t) == 0 for t in trees)


def test_cap_overflow():
    with pytest.raises(CapExceeded):
        list(enumerate_forests(2, 4, cap=3))


def test_interval_mobius():
    f = F(2, 3, "12|3", "13|2")
    assert interval_mobius(ForestInterval(f, f)) == 1
    assert interval_mobius(ForestInterval(F(1, 3, "1|2|3"), F(1, 3, "123"))) == 2
    assert interval_mobius(ForestInterval(minimum_forest(2, 3), f)) == 1
    with pytest.raises(ValueError):
        interval_mobius(ForestInterval(f, minimum_forest(2, 3)))


def test_interval_mobius_against_recursive_poset():
    # exhaustive agreement with the recursively computed Mobius function
    for ell, n in [(2, 2), (2, 3), (1, 4), (2, 4)]:
        # refinement goes down, so decreasing dimension is a linear extension
        forests = sorted(enumerate_forests(ell, n), key=lambda f: -forest_dim(f))
        idx = {f: k for k, f in enumerate(forests)}
        below = [
            [idx[g] for g in forests if forest_leq(g, f)] for f in forests
        ]
        mu = {}
        for k, f in enumerate(forests):
            for j in below[k]:
                lo = forests[j]
                acc = 0
                for m in below[k]:
                    if m != k and forest_leq(lo, forests[m]):
                        acc += mu[(j, m)]
                mu[(j, k)] = 1 if j == k else -acc
                assert mu[(j, k)] == interval_mobius(ForestInterval(lo, f))


def test_forest_covers():
    covers = forest_covers(minimum_forest(2, 2))
    assert len(covers) == 2
    assert {c.render() for c in covers} == {"12 ; 1|2", "1|2 ; 12"}
    assert len(forest_covers(minimum_forest(1, 3))) == 3
    assert forest_covers(F(2, 3, "12|3", "13|2")) == []
    for c in forest_covers(minimum_forest(2, 4)):
        assert forest_dim(c) == forest_dim(minimum_forest(2, 4)) - 1


def test_refinements_are_forests():
    rng = random.Random(7)
    forests = list(enumerate_forests(2, 4))
    for g in rng.sample(forests, 20):
        for f in forest_refinements(g):
            assert is_partition_forest(f.ell, f.n, f.partitions)
            assert forest_leq(f, g)


def test_vertex_count_formula_small():
    for ell, n, want in [(1, 3, 1), (2, 3, 8), (2, 4, 50), (3, 3, 21), (3, 4, 243)]:
        assert sum(1 for _ in enumerate_trees(ell, n)) == want


def test_components():
    assert components(minimum_forest(2, 3)) == ((1,), (2,), (3,))
    assert components(F(2, 3, "12|3", "13|2")) == ((1, 2, 3),)
    assert components(F(2, 4, "12|3|4", "1|2|34")) == ((1, 2), (3, 4))
