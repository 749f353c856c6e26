"""Orientations of balanced set pairs and the cellular diagonals they induce.

A balanced pair on 1..n is a pair of disjoint nonempty subsets of equal
size.  Choosing a direction (I, J) for every unordered such pair gives an
Ordering; a generic vector induces one by pointing each pair toward the
larger coordinate sum.  Two distinguished orderings (the minimum sits on
the left / the maximum sits on the right) and their opposites are the only
ones compatible with standardization and disjoint unions.

An ordering decides which pairs of ordered partitions (sigma, tau) count
as faces: (sigma, tau) survives iff no oriented (I, J) has J dominating I
in sigma while I dominates J in tau.  Faces are graded by the two
codimensions, facets biject with two-row partition trees, and vertices
are exactly the pairs of permutations avoiding an explicit family of
interleaved patterns.  This module implements each of those descriptions
separately so they can be checked against one another.
"""

from __future__ import annotations

import itertools
import os
from collections import Counter
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

from .arrangement import TranslationMatrix
from .core import (
    all_ordered_partitions,
    all_perms,
    dominates,
    op_elements,
    perm_to_op,
    render_ordered_partition,
    std_pair,
    validate_ordered_partition,
)
from .forests import CapExceeded, PartitionForest

VARIANTS = ("la", "su", "la-op", "su-op")

IMAGE_CAP = 6
FACET_CAP = 8


# ---------------------------------------------------------------------------
# orderings of balanced pairs


def _pair_key(pair):
    I, J = pair
    return (len(I), tuple(sorted(I)), tuple(sorted(J)))


@lru_cache(maxsize=None)
def un_pairs(n: int) -> tuple:
    """Unordered balanced pairs on 1..n, one representative (I, J) each.

    The representative puts the side holding min(I | J) first.  Pairs come
    out by (size, lexicographic I, lexicographic J): scans over them meet
    the small pairs first, and those reject most candidates.
    """
    out = []
    for k in range(1, n // 2 + 1):
        for I in itertools.combinations(range(1, n + 1), k):
            pool = [x for x in range(I[0] + 1, n + 1) if x not in I]
            for J in itertools.combinations(pool, k):
                out.append((frozenset(I), frozenset(J)))
    return tuple(out)


class Ordering:
    """A complete antisymmetric orientation of the balanced pairs on 1..n."""

    __slots__ = ("n", "pairs", "_members")

    def __init__(self, n: int, oriented):
        classes = {frozenset(p) for p in un_pairs(n)}
        seen = set()
        pairs = []
        for I, J in oriented:
            I, J = frozenset(I), frozenset(J)
            key = frozenset((I, J))
            if key not in classes:
                raise ValueError(
                    "not a balanced pair on 1..%d: (%s, %s)"
                    % (n, sorted(I), sorted(J))
                )
            if key in seen:
                raise ValueError(
                    "pair {%s, %s} oriented twice" % (sorted(I), sorted(J))
                )
            seen.add(key)
            pairs.append((I, J))
        if len(seen) != len(classes):
            raise ValueError("orientation misses %d pairs" % (len(classes) - len(seen)))
        self.n = n
        self.pairs = tuple(sorted(pairs, key=_pair_key))
        self._members = frozenset(self.pairs)

    def __contains__(self, pair) -> bool:
        I, J = pair
        return (frozenset(I), frozenset(J)) in self._members

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Ordering)
            and self.n == other.n
            and self._members == other._members
        )

    def __hash__(self) -> int:
        return hash((self.n, self._members))

    def __repr__(self) -> str:
        return "Ordering(n=%d, %d pairs)" % (self.n, len(self.pairs))


@lru_cache(maxsize=None)
def la_ordering(n: int) -> Ordering:
    """Point every balanced pair away from the side holding the minimum."""
    return Ordering(n, un_pairs(n))


@lru_cache(maxsize=None)
def su_ordering(n: int) -> Ordering:
    """Point every balanced pair toward the side holding the maximum."""
    oriented = []
    for I, J in un_pairs(n):
        oriented.append((I, J) if max(J) > max(I) else (J, I))
    return Ordering(n, oriented)


def opposite(ordering: Ordering) -> Ordering:
    return Ordering(ordering.n, tuple((J, I) for I, J in ordering.pairs))


def ordering_from_vector(v) -> Ordering:
    """Point each balanced pair toward the larger coordinate sum.

    Entries may be ints, Fractions, or strings like "1/2"; arithmetic is
    exact.  A tied pair of subset sums means the vector is not generic and
    orients nothing, so it raises.
    """
    v = tuple(Fraction(x) for x in v)
    n = len(v)
    oriented = []
    for I, J in un_pairs(n):
        si = sum(v[i - 1] for i in I)
        sj = sum(v[j - 1] for j in J)
        if si == sj:
            raise ValueError(
                "tied sums on (%s, %s): vector is not generic"
                % (sorted(I), sorted(J))
            )
        oriented.append((I, J) if si > sj else (J, I))
    return Ordering(n, oriented)


def la_vector(n: int) -> tuple:
    """Halving coordinates 1, 1/2, 1/4, ...; orients pairs like la_ordering."""
    return tuple(Fraction(1, 2 ** i) for i in range(n))


def su_vector(n: int) -> tuple:
    """Coordinates 2^n - 2^(i-1); orients pairs like su_ordering."""
    return tuple(2 ** n - 2 ** i for i in range(n))


@lru_cache(maxsize=None)
def variant_ordering(variant: str, n: int) -> Ordering:
    if variant == "la":
        return la_ordering(n)
    if variant == "su":
        return su_ordering(n)
    if variant == "la-op":
        return opposite(la_ordering(n))
    if variant == "su-op":
        return opposite(su_ordering(n))
    raise ValueError("unknown variant %r; expected one of %s" % (variant, ", ".join(VARIANTS)))


def matrix_from_vector(v) -> TranslationMatrix:
    """Two-row translation matrix with the vector's consecutive differences.

    The arrangement it defines carves the same face structure as the
    vector's ordering: pairs of ordered partitions on one side, two-row
    ordered forests on the other.
    """
    v = tuple(Fraction(x) for x in v)
    top = tuple(Fraction(0) for _ in range(len(v) - 1))
    bottom = tuple(v[j] - v[j + 1] for j in range(len(v) - 1))
    return TranslationMatrix((top, bottom))


# ---------------------------------------------------------------------------
# face pairs


class DiagonalFace(NamedTuple):
    """A pair of ordered partitions of a common ground set 1..n."""

    sigma: tuple
    tau: tuple

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.sigma)

    @property
    def dim_sigma(self) -> int:
        return self.n - len(self.sigma)

    @property
    def dim_tau(self) -> int:
        return self.n - len(self.tau)

    @property
    def dim(self) -> int:
        return self.dim_sigma + self.dim_tau

    def render(self) -> str:
        return "%s ; %s" % (
            render_ordered_partition(self.sigma),
            render_ordered_partition(self.tau),
        )


def make_face(sigma, tau) -> DiagonalFace:
    sigma = tuple(tuple(sorted(b)) for b in sigma)
    tau = tuple(tuple(sorted(b)) for b in tau)
    ground = op_elements(sigma)
    if ground != op_elements(tau):
        raise ValueError("sigma and tau cover different ground sets")
    n = len(ground)
    validate_ordered_partition(sigma, n)
    validate_ordered_partition(tau, n)
    return DiagonalFace(sigma, tau)


def is_face_pair(face, ordering: Ordering) -> bool:
    """Face membership under an ordering.

    (sigma, tau) fails exactly when some oriented (I, J) has J dominating
    I in sigma and I dominating J in tau; the scan stops at the first such
    witness.
    """
    sigma, tau = face
    ground = op_elements(sigma)
    if ground != op_elements(tau):
        raise ValueError("sigma and tau cover different ground sets")
    if ground != frozenset(range(1, ordering.n + 1)):
        raise ValueError(
            "face is on %d elements but the ordering is on %d"
            % (len(ground), ordering.n)
        )
    for I, J in ordering.pairs:
        if dominates(J, I, sigma) and dominates(I, J, tau):
            return False
    return True


def _domination_masks(ops, pairs):
    """Per ordered partition, two bitmasks over the oriented pairs.

    Bit p of the left mask: J_p dominates I_p (disqualifying for the sigma
    role).  Bit p of the right mask: I_p dominates J_p (disqualifying for
    the tau role).  A pair of ordered partitions is a face iff the two
    masks share no bit.
    """
    left = []
    right = []
    for op in ops:
        m1 = m2 = 0
        bit = 1
        for I, J in pairs:
            if dominates(J, I, op):
                m1 |= bit
            if dominates(I, J, op):
                m2 |= bit
            bit <<= 1
        left.append(m1)
        right.append(m2)
    return left, right


def cellular_image(n: int, ordering: Ordering, cap: int = IMAGE_CAP, total_dim=None):
    """All face pairs on 1..n, optionally restricted to one total dimension.

    The restriction prunes by block counts before any domination work, so
    asking for a single stratum stays cheap well past the point where the
    full image would not.
    """
    if ordering.n != n:
        raise ValueError("ordering is on %d, not %d" % (ordering.n, n))
    if n > cap:
        raise CapExceeded("image enumeration capped at n = %d" % cap)
    ops = all_ordered_partitions(n)
    if total_dim is not None:
        sig_ops = [op for op in ops if n - len(op) <= total_dim]
        tau_ops = sig_ops
    else:
        sig_ops = tau_ops = list(ops)
    left, _ = _domination_masks(sig_ops, ordering.pairs)
    _, right = _domination_masks(tau_ops, ordering.pairs)
    faces = set()
    for i, s in enumerate(sig_ops):
        mi = left[i]
        ds = n - len(s)
        for j, t in enumerate(tau_ops):
            if total_dim is not None and ds + n - len(t) != total_dim:
                continue
            if mi & right[j] == 0:
                faces.add(DiagonalFace(s, t))
    return faces


def _count_chunk(items_left, items_right):
    acc = Counter()
    for m1, c1 in items_left:
        for m2, c2 in items_right:
            if m1 & m2:
                continue
            for d1, k1 in c1.items():
                for d2, k2 in c2.items():
                    acc[d1, d2] += k1 * k2
    return acc


def _count_shard(args):
    return _count_chunk(*args)


def bigraded_counts(n: int, ordering: Ordering, cap: int = IMAGE_CAP, threads=None) -> dict:
    """Face counts keyed by (dim sigma, dim tau), without materializing.

    Ordered partitions sharing a domination mask get grouped, so the
    quadratic scan runs over distinct masks weighted by multiplicity.
    threads > 1 (or PERMADIAG_THREADS) shards the left groups across
    worker processes; the merge is a plain sum, hence deterministic.
    """
    if ordering.n != n:
        raise ValueError("ordering is on %d, not %d" % (ordering.n, n))
    if n > cap:
        raise CapExceeded("image counting capped at n = %d" % cap)
    ops = all_ordered_partitions(n)
    left, right = _domination_masks(ops, ordering.pairs)
    grouped_left = {}
    grouped_right = {}
    for op, m1, m2 in zip(ops, left, right):
        d = n - len(op)
        grouped_left.setdefault(m1, Counter())[d] += 1
        grouped_right.setdefault(m2, Counter())[d] += 1
    items_left = sorted(grouped_left.items(), key=lambda kv: kv[0])
    items_right = sorted(grouped_right.items(), key=lambda kv: kv[0])
    if threads is None:
        threads = int(os.environ.get("PERMADIAG_THREADS", "1") or "1")
    if threads > 1 and len(items_left) > threads:
        acc = _count_parallel(items_left, items_right, threads)
    else:
        acc = _count_chunk(items_left, items_right)
    return dict(acc)


def _count_parallel(items_left, items_right, workers):
    step = -(-len(items_left) // workers)
    shards = [items_left[i:i + step] for i in range(0, len(items_left), step)]
    try:
        import multiprocessing
        from concurrent.futures import ProcessPoolExecutor

        ctx = multiprocessing.get_context("fork")
        with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
            parts = list(pool.map(_count_shard, [(s, items_right) for s in shards]))
    except (ImportError, OSError, ValueError):
        parts = [_count_chunk(s, items_right) for s in shards]
    acc = Counter()
    for part in parts:
        acc.update(part)
    return acc


# ---------------------------------------------------------------------------
# facets from two-row partition trees


def _pair_tree_graph(T: PartitionForest):
    """Incidence graph of a two-row forest: a node per part, an edge per
    element, the edge labeled by the element itself.  Raises unless the
    graph is a tree."""
    if T.ell != 2:
        raise ValueError("need a forest with exactly two rows")
    sparts, tparts = T.partitions
    if len(sparts) + len(tparts) != T.n + 1:
        raise ValueError("not a tree: %d parts over %d elements" % (len(sparts) + len(tparts), T.n))
    sidx = {x: i for i, b in enumerate(sparts) for x in b}
    tidx = {x: j for j, b in enumerate(tparts) for x in b}
    adj = {("s", i): [] for i in range(len(sparts))}
    adj.update({("t", j): [] for j in range(len(tparts))})
    for x in range(1, T.n + 1):
        u, v = ("s", sidx[x]), ("t", tidx[x])
        adj[u].append((x, v))
        adj[v].append((x, u))
    reached = {("s", 0)}
    stack = [("s", 0)]
    while stack:
        node = stack.pop()
        for _, other in adj[node]:
            if other not in reached:
                reached.add(other)
                stack.append(other)
    if len(reached) != len(adj):
        raise ValueError("not a tree: the part graph is disconnected")
    return sparts, tparts, adj


def _path_extremes(adj, start, use_min):
    """For every node, the extreme edge label on the tree path from start,
    together with whether that edge was crossed leaving the first row."""
    out = {start: None}
    frontier = [(start, None)]
    while frontier:
        nxt = []
        for node, state in frontier:
            for label, other in adj[node]:
                if other in out:
                    continue
                if state is None or (label < state[0] if use_min else label > state[0]):
                    nstate = (label, node[0] == "s")
                else:
                    nstate = state
                out[other] = nstate
                nxt.append((other, nstate))
        frontier = nxt
    return out


def _rank_blocks(parts, side, before):
    k = len(parts)
    score = []
    for i in range(k):
        score.append(sum(1 for j in range(k) if j != i and before((side, j), (side, i))))
    if sorted(score) != list(range(k)):
        raise ValueError("path comparisons do not linearize the blocks")
    return tuple(parts[i] for i in sorted(range(k), key=score.__getitem__))


def order_partition_tree(T: PartitionForest, variant: str = "la") -> DiagonalFace:
    """Order both rows of a two-row partition tree into a facet pair.

    Two blocks of the same row compare through the tree path between them:
    under "la" the smallest label on the path decides, and the earlier
    block is the one from which that edge is crossed leaving the first
    row; under "su" the largest label decides, crossed leaving the second
    row.  Both comparisons linearize each row.
    """
    if variant not in ("la", "su"):
        raise ValueError("variant must be 'la' or 'su', not %r" % variant)
    use_min = variant == "la"
    sparts, tparts, adj = _pair_tree_graph(T)
    states = {node: _path_extremes(adj, node, use_min) for node in adj}

    def before(u, v):
        label, left_first_row = states[u][v]
        return left_first_row if use_min else not left_first_row

    sigma = _rank_blocks(sparts, "s", before)
    tau = _rank_blocks(tparts, "t", before)
    return DiagonalFace(sigma, tau)


def facets(n: int, variant: str = "la", cap: int = FACET_CAP):
    """The maximal face pairs, one per two-row partition tree on 1..n."""
    from .forests import enumerate_trees

    if variant not in VARIANTS:
        raise ValueError("unknown variant %r; expected one of %s" % (variant, ", ".join(VARIANTS)))
    if n > cap:
        raise CapExceeded("facet enumeration capped at n = %d" % cap)
    base = variant[:2]
    flip = variant.endswith("-op")
    out = set()
    for T in enumerate_trees(2, n):
        f = order_partition_tree(T, base)
        out.add(DiagonalFace(f.tau, f.sigma) if flip else f)
    return out


# ---------------------------------------------------------------------------
# vertex pairs and patterns


class PatternPair(NamedTuple):
    """A forbidden pair of permutations of 1..2k."""

    k: int
    first: tuple
    second: tuple


@lru_cache(maxsize=None)
def generate_patterns(k: int, variant: str = "la") -> tuple:
    """The interleaved pattern pairs of size 2k for one variant.

    Each balanced pair (I, J) partitioning 1..2k contributes one pattern
    per admissible pair of orderings of its sides: the first word
    alternates j i j i ..., the second realigns the same letters one slot
    over.  Opposite variants just swap the two words.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if variant not in VARIANTS:
        raise ValueError("unknown variant %r; expected one of %s" % (variant, ", ".join(VARIANTS)))
    if variant.endswith("-op"):
        return tuple(
            PatternPair(p.k, p.second, p.first)
            for p in generate_patterns(k, variant[:2])
        )
    la = variant == "la"
    out = []
    for I in itertools.combinations(range(1, 2 * k + 1), k):
        J = tuple(x for x in range(1, 2 * k + 1) if x not in I)
        if la and I[0] != 1:
            continue
        if not la and J[-1] != 2 * k:
            continue
        if la:
            iseqs = [(1,) + rest for rest in itertools.permutations(I[1:])]
            jseqs = list(itertools.permutations(J))
        else:
            iseqs = list(itertools.permutations(I))
            jseqs = [rest + (2 * k,) for rest in itertools.permutations(J[:-1])]
        for iseq in iseqs:
            for jseq in jseqs:
                u = []
                for a, b in zip(jseq, iseq):
                    u.append(a)
                    u.append(b)
                if la:
                    w = []
                    for m in range(1, k):
                        w.append(iseq[m])
                        w.append(jseq[m - 1])
                    w.append(iseq[0])
                    w.append(jseq[-1])
                else:
                    w = [iseq[0], jseq[-1]]
                    for m in range(1, k):
                        w.append(iseq[m])
                        w.append(jseq[m - 1])
                out.append(PatternPair(k, tuple(u), tuple(w)))
    return tuple(out)


def _std_subword(perm, values, rank):
    return tuple(rank[x] for x in perm if x in values)


def avoids_patterns(u, w, variant: str = "la", engine: str = "orientation") -> bool:
    """Whether no pattern pair embeds into (u, w) on a common value set.

    The orientation engine runs the equivalent domination test over the
    oriented pairs; the scan engine literally standardizes every value
    subset and looks the result up.  Both are exposed so tests can play
    them against each other; the scan is factorially slower.
    """
    u, w = tuple(u), tuple(w)
    n = len(u)
    if sorted(u) != list(range(1, n + 1)) or sorted(w) != list(range(1, n + 1)):
        raise ValueError("expected two permutations of the same 1..n")
    if engine == "orientation":
        return is_face_pair((perm_to_op(u), perm_to_op(w)), variant_ordering(variant, n))
    if engine != "scan":
        raise ValueError("unknown engine %r" % engine)
    for k in range(1, n // 2 + 1):
        forbidden = {(p.first, p.second) for p in generate_patterns(k, variant)}
        for S in itertools.combinations(range(1, n + 1), 2 * k):
            values = frozenset(S)
            rank = {x: i + 1 for i, x in enumerate(S)}
            if (_std_subword(u, values, rank), _std_subword(w, values, rank)) in forbidden:
                return False
    return True


def vertex_pairs(n: int, variant: str = "la", cap: int = IMAGE_CAP):
    """Pairs of permutations forming zero-dimensional face pairs."""
    if n > cap:
        raise CapExceeded("vertex enumeration capped at n = %d" % cap)
    ordering = variant_ordering(variant, n)
    words = list(all_perms(n))
    ops = [perm_to_op(wd) for wd in words]
    left, right = _domination_masks(ops, ordering.pairs)
    out = set()
    for i, wu in enumerate(words):
        mi = left[i]
        for j, wv in enumerate(words):
            if mi & right[j] == 0:
                out.add((wu, wv))
    return out


# ---------------------------------------------------------------------------
# involutions


def _reverse_blocks(op) -> tuple:
    return tuple(op[::-1])


def _complement_relabel(op) -> tuple:
    n = sum(len(b) for b in op)
    return tuple(tuple(sorted(n + 1 - x for x in b)) for b in op)


def iso_s(face) -> DiagonalFace:
    """Reverse the block order on both sides."""
    sigma, tau = face
    return DiagonalFace(_reverse_blocks(sigma), _reverse_blocks(tau))


def iso_r(face) -> DiagonalFace:
    """Relabel x to n+1-x inside blocks, keeping the block order."""
    sigma, tau = face
    return DiagonalFace(_complement_relabel(sigma), _complement_relabel(tau))


def iso_t(face) -> DiagonalFace:
    """Swap the two sides."""
    sigma, tau = face
    return DiagonalFace(tuple(tau), tuple(sigma))


# ---------------------------------------------------------------------------
# operadic structure


def decompositions(pair, ordering: Ordering) -> list:
    """Nontrivial splits of a pair into two oriented pairs.

    A split takes proper nonempty I' inside I and J' inside J of equal
    size with both (I', J') and (I - I', J - J') oriented as given.
    """
    I, J = frozenset(pair[0]), frozenset(pair[1])
    out = []
    for size in range(1, len(I)):
        for I1 in itertools.combinations(sorted(I), size):
            for J1 in itertools.combinations(sorted(J), size):
                first = (frozenset(I1), frozenset(J1))
                rest = (I - first[0], J - first[1])
                if first in ordering and rest in ordering:
                    out.append((first, rest))
    return out


def indecomposables(ordering: Ordering) -> list:
    """Oriented pairs admitting no split into two smaller oriented pairs."""
    return [p for p in ordering.pairs if not decompositions(p, ordering)]


def is_operadic(family) -> bool:
    """Closure of a size-indexed family of orderings under standardization
    and disjoint unions.

    family maps ground-set sizes to Orderings and must cover every size
    from 2 up to its maximum (sizes 0 and 1 have no balanced pairs and may
    be omitted).  The family fails if some oriented pair disagrees with
    its standardization, or if the reverse of an oriented pair splits into
    two oriented pairs, which would force both directions at once.
    """
    sizes = sorted(k for k in family if k >= 2)
    if not sizes:
        raise ValueError("family has no size with balanced pairs")
    top = sizes[-1]
    for m in range(2, top + 1):
        if m not in family:
            raise ValueError("family misses size %d" % m)
        if family[m].n != m:
            raise ValueError("entry at size %d is an ordering on %d" % (m, family[m].n))
    for m in range(2, top + 1):
        ordering = family[m]
        for I, J in ordering.pairs:
            if std_pair(I, J) not in family[2 * len(I)]:
                return False
            if decompositions((J, I), ordering):
                return False
    return True
