import itertools

import pytest
from hypothesis import given, settings, strategies as st

from permadiag.core import parse_set_partition
from permadiag.forests import (
    enumerate_forests,
    enumerate_trees,
    forest_covers,
    forest_dim,
    interval_mobius,
    make_forest,
    minimum_forest,
    ForestInterval,
)
from permadiag.rainbow import (
    RainbowForest,
    ary_size,
    ary_to_rainbow,
    color_counts,
    forest_size,
    forest_to_rainbow,
    fuss_catalan,
    labeling_count,
    node,
    omega,
    prufer_decode,
    prufer_encode,
    rainbow_covers,
    rainbow_to_ary,
    rainbow_to_forest,
    rainbow_trees,
    tree_size,
    validate_rainbow_forest,
    walk,
)


def F(ell, n, *texts):
    return make_forest(ell, n, [parse_set_partition(t) for t in texts])


def count_labelings(R):
    """Brute-force labelings: root minimal per tree, same-colored sibling
    labels increasing along the given plane order."""
    positions = []
    for ti, t in enumerate(R.trees):
        stack = [(t, (ti,))]
        while stack:
            nd, path = stack.pop()
            positions.append((path, nd))
            for k, c in enumerate(nd[2]):
                stack.append((c, path + (k,)))
    n = len(positions)
    count = 0
    for perm in itertools.permutations(range(1, n + 1)):
        lab = {path: v for (path, _), v in zip(positions, perm)}
        ok = True
        for path, nd in positions:
            if not ok:
                break
            kids = nd[2]
            for k in range(len(kids) - 1):
                if kids[k][1] == kids[k + 1][1] and lab[path + (k,)] > lab[path + (k + 1,)]:
                    ok = False
                    break
        if ok:
            for ti, t in enumerate(R.trees):
                sub = [v for p, v in lab.items() if p[0] == ti]
                if lab[(ti,)] != min(sub):
                    ok = False
                    break
        if ok:
            count += 1
    return count


def test_omega():
    single = RainbowForest(2, (node(None, None),))
    assert omega(single) == 1
    star = RainbowForest(1, (node(None, None, [node(None, 1)] * 3),))
    assert omega(star) == 6
    mixed = RainbowForest(2, (node(None, None, [node(None, 1), node(None, 1), node(None, 2)]),))
    assert omega(mixed) == 2


def test_labeling_count_examples():
    assert labeling_count(RainbowForest(2, (node(None, None),))) == 1
    tree = RainbowForest(2, (node(None, None, [node(None, 1), node(None, 2)]),))
    assert labeling_count(tree) == 2
    two = RainbowForest(2, (node(None, None), node(None, None)))
    assert labeling_count(two) == 2
    path = RainbowForest(2, (node(None, None, [node(None, 1, [node(None, 2)])]),))
    assert labeling_count(path) == 2


def test_labeling_count_matches_bruteforce():
    for m in range(1, 5):
        for t in rainbow_trees(2, m):
            R = RainbowForest(2, (t,))
            assert labeling_count(R) == count_labelings(R)
    # a forest with two nontrivial trees
    R = RainbowForest(
        2, (node(None, None, [node(None, 2)]), node(None, None, [node(None, 1)]))
    )
    assert labeling_count(R) == count_labelings(R)


def test_fuss_catalan_values():
    assert fuss_catalan(2, 4) == 14
    assert fuss_catalan(3, 3) == 12
    assert all(fuss_catalan(ell, 1) == 1 for ell in range(1, 6))
    assert [fuss_catalan(2, m) for m in range(7)] == [1, 1, 2, 5, 14, 42, 132]


def test_rainbow_tree_enumeration_counts():
    for ell in (1, 2, 3):
        for m in range(1, 6):
            trees = list(rainbow_trees(ell, m))
            assert len(trees) == len(set(trees)) == fuss_catalan(ell, m)
            for t in trees:
                assert tree_size(t) == m
                validate_rainbow_forest(RainbowForest(ell, (t,)))


def test_plane_order_of_same_colored_siblings_matters():
    # root with two same-colored children of distinct shapes, both orders
    leaf = node(None, 1)
    deep = node(None, 1, [node(None, 2)])
    trees = set(rainbow_trees(2, 4))
    assert node(None, None, [leaf, deep]) in trees
    assert node(None, None, [deep, leaf]) in trees


def test_labelings_sum_to_vertex_count():
    # labeled rainbow trees on n nodes = vertices of the arrangement
    for ell, n, want in [(2, 3, 8), (2, 4, 50), (3, 3, 21)]:
        assert sum(
            labeling_count(RainbowForest(ell, (t,))) for t in rainbow_trees(ell, n)
        ) == want


def test_functional_equation():
    # F(z) = 1 + z F(z)^ell to order z^12
    for ell in (1, 2, 3):
        coeffs = [fuss_catalan(ell, m) for m in range(13)]
        for m in range(1, 13):
            acc = 0
            for parts in _compositions(m - 1, ell):
                term = 1
                for p in parts:
                    term *= coeffs[p]
                acc += term
            assert acc == coeffs[m]


def _compositions(total, k):
    if k == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, k - 1):
            yield (first,) + rest


def test_forest_to_rainbow_roundtrip_example():
    pf = F(2, 2, "1|2", "12")
    R = forest_to_rainbow(pf)
    assert R.trees == (node(1, None, [node(2, 2)]),)
    assert rainbow_to_forest(R) == pf


def test_singletons_forest_maps_to_isolated_nodes():
    pf = minimum_forest(2, 4)
    R = forest_to_rainbow(pf)
    assert R.trees == tuple(node(j, None) for j in range(1, 5))
    assert rainbow_to_forest(R) == pf


def test_bijection_roundtrip_exhaustive():
    for ell, n in [(2, 3), (2, 4), (3, 3)]:
        seen = set()
        for pf in enumerate_forests(ell, n):
            R = forest_to_rainbow(pf)
            validate_rainbow_forest(R)
            assert rainbow_to_forest(R) == pf
            assert len(R.trees) == forest_dim(pf) + 1
            seen.add(R)
        assert len(seen) == sum(1 for _ in enumerate_forests(ell, n))


def test_labeled_tree_count():
    assert sum(1 for _ in enumerate_trees(2, 4)) == 50
    trees = [forest_to_rainbow(pf) for pf in enumerate_trees(2, 4)]
    assert all(len(R.trees) == 1 for R in trees)
    assert len(set(trees)) == 50


def test_mobius_from_minimum_is_signed_omega():
    for ell, n in [(2, 3), (2, 4), (3, 3)]:
        lo = minimum_forest(ell, n)
        for pf in enumerate_forests(ell, n):
            R = forest_to_rainbow(pf)
            mu = interval_mobius(ForestInterval(lo, pf))
            assert mu == (-1) ** (n - len(R.trees)) * omega(R)


def test_ary_bijection():
    for ell, m in [(2, 4), (3, 3), (2, 5)]:
        arys = set()
        for t in rainbow_trees(ell, m):
            a = rainbow_to_ary(t, ell)
            assert ary_size(a) == m
            arys.add(a)
        assert len(arys) == fuss_catalan(ell, m)


def test_ary_roundtrip():
    for ell, m in [(2, 4), (3, 4)]:
        for t in rainbow_trees(ell, m):
            kids = tuple(rainbow_to_ary(t, ell))
            assert ary_to_rainbow(kids, ell) == t


def test_ary_of_colored_path():
    t = node(None, None, [node(None, 1, [node(None, 2)])])
    a = rainbow_to_ary(t, 2)
    # root slot 1 holds the child colored 1, whose slot 2 holds the leaf
    assert a == ((None, (None, None)), None)


def test_prufer_single_edge():
    for c in (1, 2):
        t = node(1, None, [node(2, c)])
        assert prufer_encode(t) == ((1, c),)
        assert prufer_decode(((1, c),), 2, 2) == t


def test_prufer_roundtrip():
    for pf in enumerate_trees(2, 4):
        R = forest_to_rainbow(pf)
        t = R.trees[0]
        word = prufer_encode(t)
        assert len(word) == 3
        assert word[-1][0] == 1
        assert prufer_decode(word, 2, 4) == t


def test_prufer_image_count():
    # decode accepts exactly the valid words
    for ell, n, want in [(2, 3, 8), (2, 4, 50), (3, 3, 21)]:
        good = 0
        for word in itertools.product(
            itertools.product(range(1, n + 1), range(1, ell + 1)), repeat=n - 1
        ):
            try:
                prufer_decode(word, ell, n)
            except ValueError:
                continue
            good += 1
        assert good == want


def test_prufer_rejects_malformed():
    with pytest.raises(ValueError):
        prufer_decode(((2, 1),), 2, 2)  # last letter must name the root
    with pytest.raises(ValueError):
        prufer_decode(((1, 3),), 2, 2)  # color out of range
    with pytest.raises(ValueError):
        prufer_decode(((1, 1),), 2, 3)  # wrong length


def test_refined_tree_count_by_colors():
    trees = [forest_to_rainbow(pf).trees[0] for pf in enumerate_trees(2, 4)]
    by_counts = {}
    for t in trees:
        by_counts.setdefault(color_counts(t, 2), 0)
        by_counts[color_counts(t, 2)] += 1
    assert by_counts[(1, 2)] == 24


def test_rainbow_covers_match_forest_covers():
    for ell, n in [(2, 2), (2, 3), (2, 4)]:
        for pf in enumerate_forests(ell, n):
            R = forest_to_rainbow(pf)
            got = rainbow_covers(R)
            want = sorted(
                (forest_to_rainbow(g) for g in forest_covers(pf)),
                key=lambda X: X.trees,
            )
            assert got == want
            for G in got:
                validate_rainbow_forest(G)
                assert len(G.trees) == len(R.trees) - 1


def test_rainbow_covers_trivial_cases():
    lone = forest_to_rainbow(F(2, 3, "12|3", "13|2"))
    assert rainbow_covers(lone) == []


@settings(max_examples=30)
@given(st.integers(2, 4), st.integers(1, 2))
def test_validate_accepts_enumerated(m, ell):
    for t in itertools.islice(rainbow_trees(ell + 1, m), 10):
        validate_rainbow_forest(RainbowForest(ell + 1, (t,)))
