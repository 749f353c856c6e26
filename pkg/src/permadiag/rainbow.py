"""Rainbow forests: plane rooted forests with colored non-root nodes.

A node is a nested tuple (label, color, children).  Roots carry color None;
unlabeled trees carry label None everywhere.  Constraints: no edge joins two
nodes of the same color, and sibling colors weakly increase left to right.
In a labeled forest each root label is minimal in its tree and same-colored
sibling labels increase, so children are stored sorted by (color, label).

These forests are in bijection with partition forests: the parts of the i-th
partition are the sets {N} + (children of N colored i) over all nodes N not
colored i.  The number of trees of a rainbow forest is one more than the
dimension of its partition forest.
"""
from __future__ import annotations

import itertools
from functools import lru_cache
from math import comb, factorial
from typing import NamedTuple

from .core import canonical_set_partition
from .forests import PartitionForest, components


class RainbowForest(NamedTuple):
    ell: int
    trees: tuple  # root nodes, sorted by root label when labeled


def node(label, color, children=()) -> tuple:
    return (label, color, tuple(children))


def tree_size(t) -> int:
    return 1 + sum(tree_size(c) for c in t[2])


def forest_size(F: RainbowForest) -> int:
    return sum(tree_size(t) for t in F.trees)


def walk(t):
    yield t
    for c in t[2]:
        yield from walk(c)


def validate_rainbow_forest(F: RainbowForest) -> None:
    labeled = any(t[0] is not None for t in F.trees)
    labels = []
    for t in F.trees:
        if t[1] is not None:
            raise ValueError("tree root carries a color")
        for nd in walk(t):
            label, color, children = nd
            if (label is None) == labeled:
                raise ValueError("mixed labeled and unlabeled nodes")
            if nd is not t and not (1 <= color <= F.ell):
                raise ValueError("node color out of range")
            if labeled:
                labels.append(label)
            cols = [c[1] for c in children]
            if any(c == color for c in cols):
                raise ValueError("monochromatic edge at %r" % (label,))
            if cols != sorted(cols):
                raise ValueError("sibling colors must weakly increase")
            if labeled:
                key = [(c[1], c[0]) for c in children]
                if key != sorted(key):
                    raise ValueError("same-colored sibling labels must increase")
        if labeled and t[0] != min(nd[0] for nd in walk(t)):
            raise ValueError("root label %r not minimal in its tree" % (t[0],))
    if labeled:
        if sorted(labels) != list(range(1, len(labels) + 1)):
            raise ValueError("labels are not a bijection with 1..n")
        if [t[0] for t in F.trees] != sorted(t[0] for t in F.trees):
            raise ValueError("trees must be sorted by root label")


def omega(F: RainbowForest) -> int:
    """Product over nodes and colors of factorials of same-colored child
    counts; the number of orderings a labeling must break ties over."""
    out = 1
    for t in F.trees:
        for nd in walk(t):
            runs = {}
            for c in nd[2]:
                runs[c[1]] = runs.get(c[1], 0) + 1
            for r in runs.values():
                out *= factorial(r)
    return out


def labeling_count(F: RainbowForest) -> int:
    n = forest_size(F)
    denom = omega(F)
    for t in F.trees:
        denom *= tree_size(t)
    q, r = divmod(factorial(n), denom)
    if r:
        raise AssertionError("labeling count is not integral")
    return q


# ---------------------------------------------------------------------------
# bijection with partition forests


def rainbow_to_forest(R: RainbowForest) -> PartitionForest:
    n = forest_size(R)
    partitions = []
    for i in range(1, R.ell + 1):
        parts = []
        for t in R.trees:
            for nd in walk(t):
                if nd[1] != i:
                    parts.append([nd[0]] + [c[0] for c in nd[2] if c[1] == i])
        partitions.append(canonical_set_partition(parts))
    return PartitionForest(R.ell, n, tuple(partitions))


def forest_to_rainbow(F: PartitionForest) -> RainbowForest:
    """Label elements by their colored clique graph: the parent of j is the
    next vertex on the unique shortest path to its component minimum."""
    color_of_edge = {}
    adj = {j: set() for j in range(1, F.n + 1)}
    for i, p in enumerate(F.partitions, start=1):
        for part in p:
            for u, v in itertools.combinations(part, 2):
                e = (u, v)
                if color_of_edge.setdefault(e, i) != i:
                    raise ValueError("edge in two copies; not a forest")
                adj[u].add(v)
                adj[v].add(u)

    parent = {}
    node_color = {}
    roots = []
    for comp in components(F):
        root = comp[0]
        roots.append(root)
        dist = {root: 0}
        frontier = [root]
        while frontier:
            nxt = []
            for u in frontier:
                for v in adj[u]:
                    if v not in dist:
                        dist[v] = dist[u] + 1
                        nxt.append(v)
            frontier = nxt
        for j in comp:
            if j == root:
                continue
            prev = [v for v in adj[j] if dist[v] == dist[j] - 1]
            if len(prev) != 1:
                raise AssertionError("shortest path to the root is not unique")
            parent[j] = prev[0]
            e = (min(j, prev[0]), max(j, prev[0]))
            node_color[j] = color_of_edge[e]

    children = {j: [] for j in range(1, F.n + 1)}
    for j, p in parent.items():
        children[p].append(j)

    def build(j):
        kids = sorted(children[j], key=lambda c: (node_color[c], c))
        return (j, node_color.get(j), tuple(build(c) for c in kids))

    return RainbowForest(F.ell, tuple(build(r) for r in sorted(roots)))


# ---------------------------------------------------------------------------
# Fuss-Catalan machinery


def fuss_catalan(ell: int, m: int) -> int:
    if m == 0:
        return 1
    return comb(ell * m, m) // ((ell - 1) * m + 1)


@lru_cache(maxsize=None)
def _trees_of(m: int, color, ell: int) -> tuple:
    """Unlabeled rainbow trees with m nodes whose root is colored `color`
    (None at top level); children avoid the root color."""
    out = []
    for kids in _child_lists(m - 1, 1, color, ell):
        out.append((None, color, kids))
    return tuple(out)


@lru_cache(maxsize=None)
def _child_lists(size: int, min_color: int, exclude, ell: int) -> tuple:
    if size == 0:
        return ((),)
    out = []
    for c in range(min_color, ell + 1):
        if c == exclude:
            continue
        for head_size in range(1, size + 1):
            for head in _trees_of(head_size, c, ell):
                for rest in _child_lists(size - head_size, c, exclude, ell):
                    out.append((head,) + rest)
    return tuple(out)


def rainbow_trees(ell: int, m: int):
    """All unlabeled (ell, m)-rainbow trees; there are fuss_catalan(ell, m)."""
    if m < 1:
        return
    yield from _trees_of(m, None, ell)


def color_counts(t, ell: int) -> tuple:
    counts = [0] * ell
    for nd in walk(t):
        if nd[1] is not None:
            counts[nd[1] - 1] += 1
    return tuple(counts)


# ---------------------------------------------------------------------------
# the ell-ary tree bijection


def rainbow_to_ary(tree, ell: int):
    """Slot d of a node holds its first child colored d, except the slot of
    the node's own color, which holds its next same-colored sibling."""

    def chain(nodes, c):
        if not nodes:
            return None
        head, rest = nodes[0], nodes[1:]
        slots = []
        for d in range(1, ell + 1):
            if d == c:
                slots.append(chain(rest, c))
            else:
                slots.append(chain([k for k in head[2] if k[1] == d], d))
        return tuple(slots)

    return tuple(
        chain([k for k in tree[2] if k[1] == d], d) for d in range(1, ell + 1)
    )


def ary_to_rainbow(ary, ell: int):
    def unchain(slot, c):
        if slot is None:
            return []
        kids = []
        for d in range(1, ell + 1):
            if d != c:
                kids.extend(unchain(slot[d - 1], d))
        me = (None, c, tuple(kids))
        return [me] + unchain(slot[c - 1], c)

    kids = []
    for d in range(1, ell + 1):
        kids.extend(unchain(ary[d - 1], d))
    return (None, None, tuple(kids))


def ary_size(ary) -> int:
    if ary is None:
        return 0
    return 1 + sum(ary_size(s) for s in ary)


# ---------------------------------------------------------------------------
# colored Prufer codes


def _to_pointers(t):
    parent, color = {}, {}
    for nd in walk(t):
        for c in nd[2]:
            parent[c[0]] = nd[0]
            color[c[0]] = c[1]
    return parent, color


def _from_pointers(n: int, parent, color):
    children = {j: [] for j in range(1, n + 1)}
    for j, p in parent.items():
        children[p].append(j)

    def build(j):
        kids = sorted(children[j], key=lambda c: (color[c], c))
        return (j, color.get(j), tuple(build(c) for c in kids))

    return build(1)


def prufer_encode(t) -> tuple:
    """Repeatedly prune the smallest childless non-root node, recording the
    (parent label, pruned node color) pair; the last letter names the root."""
    if t[0] != 1:
        raise ValueError("a labeled rainbow tree on 1..n is rooted at 1")
    n = tree_size(t)
    parent, color = _to_pointers(t)
    nkids = {j: 0 for j in range(1, n + 1)}
    for p in parent.values():
        nkids[p] += 1
    word = []
    alive = set(range(1, n + 1))
    for _ in range(n - 1):
        v = min(j for j in alive if j != 1 and nkids[j] == 0)
        word.append((parent[v], color[v]))
        alive.remove(v)
        nkids[parent[v]] -= 1
    return tuple(word)


def prufer_decode(word, ell: int, n: int):
    """Inverse of prufer_encode; raises ValueError off the code's image."""
    word = tuple(word)
    if len(word) != n - 1:
        raise ValueError("word length must be n-1")
    for p, c in word:
        if not (1 <= p <= n and 1 <= c <= ell):
            raise ValueError("letter out of range")
    if n >= 2 and word[-1][0] != 1:
        raise ValueError("last letter must attach to the root")
    parent, color = {}, {}
    unpruned = set(range(2, n + 1))
    for k, (p, c) in enumerate(word):
        blocked = {q for q, _ in word[k:]}
        v = min(j for j in unpruned if j not in blocked)
        if p != 1 and p not in unpruned:
            raise ValueError("parent already pruned")
        parent[v], color[v] = p, c
        unpruned.remove(v)
    for v, p in parent.items():
        if p != 1 and color[p] == color[v]:
            raise ValueError("monochromatic edge")
    return _from_pointers(n, parent, color)


# ---------------------------------------------------------------------------
# cover relations


def rainbow_covers(R: RainbowForest) -> list:
    """Labeled rainbow forests covering R in the flat poset: pick a color c
    and nodes a, b not colored c with Root(a) < Root(b), shift colors along
    the root-to-b path, reroot the tree of b at b, color b with c, hang b
    below a, and move the c-colored children of b to a.

    Parts are corollas (a node plus its same-colored children), so when a
    path edge flips, the whole part follows its new apex: the off-path
    children sharing the flipped edge's color move with their parent.
    """
    n = forest_size(R)
    parent, color = {}, {}
    root_of = {}
    kids = {j: [] for j in range(1, n + 1)}
    for t in R.trees:
        p, c = _to_pointers(t)
        parent.update(p)
        color.update(c)
        for nd in walk(t):
            root_of[nd[0]] = t[0]
    for j, p in parent.items():
        kids[p].append(j)

    out = []
    for c in range(1, R.ell + 1):
        for a in range(1, n + 1):
            if color.get(a) == c:
                continue
            for b in range(1, n + 1):
                if color.get(b) == c or root_of[a] >= root_of[b]:
                    continue
                np, nc = dict(parent), dict(color)
                path = [b]
                while path[-1] in parent:
                    path.append(parent[path[-1]])
                path.reverse()  # Root(b) ... b
                for u, v in zip(path, path[1:]):
                    g = color[v]
                    for e in kids[u]:
                        if e != v and color[e] == g:
                            np[e] = v
                    np[u] = v
                    nc[u] = g
                for e in kids[b]:
                    if color[e] == c:
                        np[e] = a
                nc[b] = c
                np[b] = a
                out.append(_forest_from_pointers(R.ell, n, np, nc))
    out.sort(key=lambda F: F.trees)
    return out


def _forest_from_pointers(ell: int, n: int, parent, color) -> RainbowForest:
    children = {j: [] for j in range(1, n + 1)}
    for j, p in parent.items():
        children[p].append(j)

    def build(j):
        kids = sorted(children[j], key=lambda k: (color[k], k))
        return (j, color.get(j), tuple(build(k) for k in kids))

    roots = sorted(j for j in range(1, n + 1) if j not in parent)
    return RainbowForest(ell, tuple(build(r) for r in roots))
