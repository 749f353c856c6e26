"""Partition forests: tuples of set partitions with an acyclic overlap pattern.

An (ell, n)-partition forest is an ell-tuple of set partitions of 1..n whose
intersection hypergraph is a hyperforest.  The hypergraph has one vertex per
part (of any of the ell partitions) and one hyperedge per element j, joining
the ell parts that contain j.  These forests index the flats of an arrangement
of ell generically translated copies of the braid arrangement, ordered by
componentwise refinement; the dimension of the flat of F is

    dim(F) = n - 1 - ell*n + sum(len(F_i)).
"""
from __future__ import annotations

import itertools
from math import factorial
from typing import NamedTuple

from .core import (
    all_set_partitions,
    canonical_set_partition,
    render_set_partition,
    set_partitions_of,
)

DEFAULT_CAP = 10_000_000


class CapExceeded(RuntimeError):
    """An enumeration exceeded its configured item cap."""


class PartitionForest(NamedTuple):
    ell: int
    n: int
    partitions: tuple

    def render(self) -> str:
        return " ; ".join(render_set_partition(p) for p in self.partitions)


class ForestInterval(NamedTuple):
    lower: "PartitionForest"
    upper: "PartitionForest"


def _validate_partition(p, n: int):
    p = canonical_set_partition(p)
    seen = sorted(x for b in p for x in b)
    if seen != list(range(1, n + 1)):
        raise ValueError("not a set partition of 1..%d: %r" % (n, p))
    return p


def make_forest(ell: int, n: int, partitions) -> PartitionForest:
    partitions = tuple(_validate_partition(p, n) for p in partitions)
    if len(partitions) != ell:
        raise ValueError("expected %d partitions, got %d" % (ell, len(partitions)))
    F = PartitionForest(ell, n, partitions)
    if not _acyclic(partitions, n):
        raise ValueError("intersection hypergraph of %s has a cycle" % (F.render(),))
    return F


def _acyclic(partitions, n: int) -> bool:
    """Union-find over parts; merging the parts of any element must never
    join two parts already connected through other elements."""
    offsets = []
    total = 0
    owner = []
    for p in partitions:
        offsets.append(total)
        total += len(p)
        at = {}
        for k, block in enumerate(p):
            for x in block:
                at[x] = k
        owner.append(at)

    parent = list(range(total))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for j in range(1, n + 1):
        prev = None
        for i, at in enumerate(owner):
            cur = offsets[i] + at[j]
            if prev is not None:
                ra, rb = find(prev), find(cur)
                if ra == rb:
                    return False
                parent[ra] = rb
            prev = cur
    return True


def is_partition_forest(ell: int, n: int, partitions) -> bool:
    partitions = tuple(_validate_partition(p, n) for p in partitions)
    if len(partitions) != ell:
        raise ValueError("expected %d partitions" % ell)
    return _acyclic(partitions, n)


def forest_dim(F: PartitionForest) -> int:
    return F.n - 1 - F.ell * F.n + sum(len(p) for p in F.partitions)


def components(F: PartitionForest) -> tuple:
    """Connected components of the intersection hypergraph, as a partition
    of 1..n (two elements are connected when some chain of overlapping
    parts joins them)."""
    parent = list(range(F.n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p in F.partitions:
        for block in p:
            for x in block[1:]:
                ra, rb = find(block[0]), find(x)
                if ra != rb:
                    parent[ra] = rb
    groups = {}
    for j in range(1, F.n + 1):
        groups.setdefault(find(j), []).append(j)
    return canonical_set_partition(groups.values())


def enumerate_forests(ell: int, n: int, cap: int = DEFAULT_CAP):
    """All (ell, n)-partition forests in lexicographic order of rendered form.

    Partitions are extended one copy at a time with early acyclicity pruning,
    so the Bell(n)^ell product is never materialized.
    """
    pool = all_set_partitions(n)
    count = 0

    def rec(chosen):
        nonlocal count
        if len(chosen) == ell:
            count += 1
            if cap is not None and count > cap:
                raise CapExceeded("more than %d forests for (%d,%d)" % (cap, ell, n))
            yield PartitionForest(ell, n, tuple(chosen))
            return
        for p in pool:
            chosen.append(p)
            if _acyclic(chosen, n):
                yield from rec(chosen)
            chosen.pop()

    yield from rec([])


def enumerate_trees(ell: int, n: int, cap: int = DEFAULT_CAP):
    """Dimension-0 forests, i.e. those with sum(len(F_i)) = ell*n - n + 1.

    The part-count budget prunes whole subtrees of the search before any
    acyclicity work happens.
    """
    pool = all_set_partitions(n)
    target = ell * n - n + 1
    count = 0

    def rec(chosen, partsum):
        nonlocal count
        remaining = ell - len(chosen)
        if remaining == 0:
            if partsum != target:
                return
            count += 1
            if cap is not None and count > cap:
                raise CapExceeded("more than %d trees for (%d,%d)" % (cap, ell, n))
            yield PartitionForest(ell, n, tuple(chosen))
            return
        for p in pool:
            s = partsum + len(p)
            rest = remaining - 1
            if s + rest > target or s + rest * n < target:
                continue
            chosen.append(p)
            if _acyclic(chosen, n):
                yield from rec(chosen, s)
            chosen.pop()

    yield from rec([], 0)


def refines(fine, coarse) -> bool:
    """True iff every part of fine is contained in a part of coarse."""
    where = {}
    for k, block in enumerate(coarse):
        for x in block:
            where[x] = k
    return all(len({where[x] for x in block}) == 1 for block in fine)


def forest_leq(F: PartitionForest, G: PartitionForest) -> bool:
    """Componentwise refinement order on forests (F below G)."""
    if (F.ell, F.n) != (G.ell, G.n):
        raise ValueError("forests live on different parameters")
    return all(refines(f, g) for f, g in zip(F.partitions, G.partitions))


def interval_mobius(iv: ForestInterval) -> int:
    """Mobius value of the interval [lower, upper] of the forest poset.

    Each interval factors into a product of partition-lattice intervals, one
    per part p of each upper partition, contributing
    (-1)^(c-1) (c-1)! for c = number of lower parts inside p.
    """
    F, G = iv
    if not forest_leq(F, G):
        raise ValueError("not an interval: lower does not refine upper")
    out = 1
    for f, g in zip(F.partitions, G.partitions):
        owner = {}
        for k, block in enumerate(f):
            for x in block:
                owner[x] = k
        for part in g:
            c = len({owner[x] for x in part})
            out *= (-1) ** (c - 1) * factorial(c - 1)
    return out


def partition_refinements(partition):
    """All set partitions refining the given one (product over its parts)."""
    per_part = [list(set_partitions_of(part)) for part in partition]
    for combo in itertools.product(*per_part):
        yield canonical_set_partition(b for sub in combo for b in sub)


def forest_refinements(G: PartitionForest):
    """All forests below G.  Every componentwise refinement of a forest is
    again a forest, so no acyclicity filtering is needed here."""
    per_copy = [list(partition_refinements(p)) for p in G.partitions]
    for combo in itertools.product(*per_copy):
        yield PartitionForest(G.ell, G.n, tuple(combo))


def forest_covers(F: PartitionForest) -> list:
    """Forests obtained by merging two parts of one partition of F without
    creating a hypercycle; each sits one dimension below F."""
    out = []
    for i, p in enumerate(F.partitions):
        for a, b in itertools.combinations(range(len(p)), 2):
            merged = tuple(
                block for k, block in enumerate(p) if k not in (a, b)
            ) + (tuple(sorted(p[a] + p[b])),)
            cand = F.partitions[:i] + (canonical_set_partition(merged),) + F.partitions[i + 1:]
            if _acyclic(cand, F.n):
                out.append(PartitionForest(F.ell, F.n, cand))
    out.sort(key=PartitionForest.render)
    return out


def minimum_forest(ell: int, n: int) -> PartitionForest:
    """The all-singletons forest, the bottom of the forest poset."""
    singles = tuple((j,) for j in range(1, n + 1))
    return PartitionForest(ell, n, (singles,) * ell)
