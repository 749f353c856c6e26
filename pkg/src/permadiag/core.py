"""Permutations, set partitions, ordered partitions, and their basic orders.

Conventions used everywhere in this package:

* elements are one-based integers 1..n;
* a permutation is a tuple of distinct integers in one-line notation;
* a set partition is a tuple of blocks, each block a sorted tuple,
  with the blocks sorted by their minima (canonical form);
* an ordered partition is a tuple of blocks, each block a sorted tuple,
  where the *sequence* of blocks is significant.

The textual form joins blocks with "|" and concatenates elements inside a
block ("13|247|5|6").  Elements above 9 are comma-separated inside blocks
so the format stays parseable for any n.
"""
from __future__ import annotations

import itertools
from functools import lru_cache
from math import factorial


# ---------------------------------------------------------------------------
# parsing and rendering


def render_block(block) -> str:
    if any(x > 9 for x in block):
        return ",".join(str(x) for x in block)
    return "".join(str(x) for x in block)


def parse_block(text: str) -> tuple:
    text = text.strip()
    if not text:
        raise ValueError("empty block")
    if "," in text:
        items = [int(p) for p in text.split(",")]
    else:
        items = [int(ch) for ch in text]
    if len(set(items)) != len(items):
        raise ValueError("repeated element in block %r" % text)
    return tuple(sorted(items))


def render_ordered_partition(op) -> str:
    return "|".join(render_block(b) for b in op)


def parse_ordered_partition(text: str) -> tuple:
    blocks = tuple(parse_block(p) for p in text.split("|"))
    seen = [x for b in blocks for x in b]
    if len(set(seen)) != len(seen):
        raise ValueError("blocks overlap in %r" % text)
    if set(seen) != set(range(1, len(seen) + 1)):
        raise ValueError("elements of %r do not cover 1..n" % text)
    return blocks


def canonical_set_partition(parts) -> tuple:
    """Sort each block, then sort blocks by minimum."""
    blocks = sorted((tuple(sorted(p)) for p in parts), key=lambda b: b[0])
    return tuple(blocks)


def render_set_partition(sp) -> str:
    return render_ordered_partition(canonical_set_partition(sp))


def parse_set_partition(text: str) -> tuple:
    return canonical_set_partition(parse_ordered_partition(text))


def parse_perm(text: str) -> tuple:
    """Parse a permutation written either as "3|1|2" or "312".

    >>> parse_perm("3|1|7|4|2|5|6")
    (3, 1, 7, 4, 2, 5, 6)
    >>> parse_perm("312")
    (3, 1, 2)
    """
    text = text.strip()
    if "|" in text:
        entries = [parse_block(p) for p in text.split("|")]
        if any(len(b) != 1 for b in entries):
            raise ValueError("permutation blocks must be singletons")
        w = tuple(b[0] for b in entries)
    elif "," in text:
        w = tuple(int(p) for p in text.split(","))
    else:
        w = tuple(int(ch) for ch in text)
    if sorted(w) != list(range(1, len(w) + 1)):
        raise ValueError("%r is not a permutation of 1..n" % text)
    return w


def render_perm(w) -> str:
    return "|".join(render_block((x,)) for x in w)


def perm_to_op(w) -> tuple:
    """View a permutation as the ordered partition with singleton blocks."""
    return tuple((x,) for x in w)


def op_to_perm(op) -> tuple:
    if any(len(b) != 1 for b in op):
        raise ValueError("not a permutation: has non-singleton blocks")
    return tuple(b[0] for b in op)


def op_elements(op) -> frozenset:
    return frozenset(x for b in op for x in b)


def validate_ordered_partition(op, n: int) -> None:
    seen = sorted(x for b in op for x in b)
    if seen != list(range(1, n + 1)):
        raise ValueError("not an ordered partition of 1..%d" % n)
    if any(tuple(sorted(b)) != tuple(b) or not b for b in op):
        raise ValueError("blocks must be nonempty and sorted")


# ---------------------------------------------------------------------------
# standardization and domination


def std_pair(I, J):
    """Standardize a disjoint pair of integer sets to the ground set 1..|I|+|J|.

    The result is the unique pair on {1, ..., |I|+|J|} whose elements compare
    the same way as the input's.

    >>> std_pair({5, 9, 10}, {6, 8, 12})
    (frozenset({1, 4, 5}), frozenset({2, 3, 6}))
    """
    I, J = frozenset(I), frozenset(J)
    if I & J:
        raise ValueError("sets overlap")
    rank = {x: i + 1 for i, x in enumerate(sorted(I | J))}
    return frozenset(rank[x] for x in I), frozenset(rank[x] for x in J)


def dominates(I, J, op) -> bool:
    """True iff every block prefix of op holds at least as many of I as of J."""
    ci = cj = 0
    I, J = set(I), set(J)
    for block in op:
        for x in block:
            if x in I:
                ci += 1
            elif x in J:
                cj += 1
        if ci < cj:
            return False
    return True


# ---------------------------------------------------------------------------
# weak order on permutations


def perm_inversions(w) -> frozenset:
    """Pairs (i, j) with i < j such that j appears before i in w."""
    pos = {x: k for k, x in enumerate(w)}
    n = len(w)
    return frozenset(
        (i, j)
        for i in range(1, n + 1)
        for j in range(i + 1, n + 1)
        if pos[j] < pos[i]
    )


def weak_leq(u, v) -> bool:
    """Weak order: containment of inversion sets.

    >>> weak_leq((1, 2, 3), (3, 2, 1))
    True
    >>> weak_leq((2, 1, 3), (1, 3, 2))
    False
    """
    if len(u) != len(v):
        raise ValueError("size mismatch")
    return perm_inversions(u) <= perm_inversions(v)


def max_vertex(op) -> tuple:
    """Weak-order maximal permutation in the face op: blocks sorted descending."""
    return tuple(x for b in op for x in sorted(b, reverse=True))


def min_vertex(op) -> tuple:
    """Weak-order minimal permutation in the face op: blocks sorted ascending."""
    return tuple(x for b in op for x in b)


# ---------------------------------------------------------------------------
# facial weak order on ordered partitions


def facial_covers_up(op):
    """Ordered partitions covering op in the facial weak order.

    Going up one can either merge two adjacent blocks B|B' with
    max(B) < min(B'), or split one block into C|D where every element of C
    exceeds every element of D.
    """
    out = []
    for i in range(len(op) - 1):
        left, right = op[i], op[i + 1]
        if left[-1] < right[0]:
            merged = op[:i] + (tuple(sorted(left + right)),) + op[i + 2:]
            out.append(merged)
    for i, block in enumerate(op):
        for cut in range(1, len(block)):
            low, high = block[:cut], block[cut:]
            out.append(op[:i] + (high, low) + op[i + 1:])
    return out


@lru_cache(maxsize=None)
def _facial_up_set(op) -> frozenset:
    seen = {op}
    queue = [op]
    while queue:
        cur = queue.pop()
        for nxt in facial_covers_up(cur):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return frozenset(seen)


def facial_weak_leq(sigma, tau) -> bool:
    """Reachability in the transitive closure of the facial cover moves."""
    if op_elements(sigma) != op_elements(tau):
        raise ValueError("size mismatch")
    return tau in _facial_up_set(sigma)


# ---------------------------------------------------------------------------
# enumeration helpers


def stirling2(n: int, k: int) -> int:
    """Number of partitions of an n-set into k blocks."""
    if n < 0 or k < 0:
        raise ValueError("negative arguments")
    if n == 0:
        return 1 if k == 0 else 0
    if k == 0 or k > n:
        return 0
    row = [1]
    for m in range(1, n + 1):
        new = [0] * (m + 1)
        for j in range(1, m + 1):
            new[j] = j * row[j] if j < len(row) else 0
            new[j] += row[j - 1]
        row = new
    return row[k]


def fubini(n: int) -> int:
    """Number of ordered partitions of an n-set."""
    return sum(factorial(k) * stirling2(n, k) for k in range(n + 1))


def set_partitions_of(elements):
    """All set partitions of the given elements, in canonical form."""
    elements = sorted(elements)
    if not elements:
        yield ()
        return
    first, rest = elements[0], elements[1:]
    for sub in set_partitions_of(rest):
        yield canonical_set_partition(((first,),) + sub)
        for i, block in enumerate(sub):
            merged = sub[:i] + (tuple(sorted((first,) + block)),) + sub[i + 1:]
            yield canonical_set_partition(merged)


@lru_cache(maxsize=None)
def all_set_partitions(n: int) -> tuple:
    """Set partitions of 1..n sorted by rendered form."""
    parts = list(set_partitions_of(range(1, n + 1)))
    parts.sort(key=render_set_partition)
    return tuple(parts)


def ordered_partitions_of(elements):
    elements = list(elements)
    for sp in set_partitions_of(elements):
        for order in itertools.permutations(sp):
            yield tuple(order)


@lru_cache(maxsize=None)
def all_ordered_partitions(n: int) -> tuple:
    ops = list(ordered_partitions_of(range(1, n + 1)))
    ops.sort(key=render_ordered_partition)
    return tuple(ops)


def all_perms(n: int):
    return itertools.permutations(range(1, n + 1))


def multinomial(total: int, parts) -> int:
    parts = list(parts)
    if sum(parts) != total:
        raise ValueError("parts must sum to the total")
    out = factorial(total)
    for p in parts:
        out //= factorial(p)
    return out


def block_index_map(op) -> dict:
    """Map each element to the index of its block in op."""
    return {x: i for i, b in enumerate(op) for x in b}
