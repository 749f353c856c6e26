"""Exact invariants of translated families of difference hyperplanes.

A family is described by a TranslationMatrix: an ell x (n-1) array of
rationals whose row i shifts the i-th copy of the coordinate-difference
arrangement.  The offset between coordinates s and t in copy i telescopes
the row entries, so every hyperplane reads x_s - x_t = offset(i, s, t).

Flats of the family are partition forests (see permadiag.forests); faces are
ordered partition forests.  This module computes the bigraded Mobius
polynomial of the flat poset by two independent routes, the derived f/b and
characteristic polynomials, closed-form vertex and region counts, and the
face machinery for a concrete generic matrix: forced orders along forest
paths, the inversion poset with its antisymmetric lower sets, and the
feasibility criterion deciding which ordered forests are faces.

Orientation convention: the block of s precedes the block of t in copy i
exactly when x_s - x_t < offset(i, s, t) on the face.  Strict inequalities
between consecutive blocks are tracked symbolically as lexicographic
(rational, epsilon-count) weights.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import factorial
from typing import NamedTuple

from .core import render_ordered_partition, stirling2, validate_ordered_partition
from .forests import (
    DEFAULT_CAP,
    CapExceeded,
    ForestInterval,
    PartitionForest,
    components,
    enumerate_forests,
    forest_dim,
    forest_refinements,
    interval_mobius,
    make_forest,
)
from .core import multinomial
from .rainbow import fuss_catalan


# ---------------------------------------------------------------------------
# sparse polynomials


def _monomial_text(coeff, powers) -> str:
    body = "".join(v if e == 1 else "%s^%d" % (v, e) for v, e in powers if e)
    mag = abs(coeff)
    if not body:
        return str(mag)
    if mag == 1:
        return body
    return "%d%s" % (mag, body)


def _join_terms(terms) -> str:
    out = []
    for coeff, text in terms:
        if not out:
            out.append("-" + text if coeff < 0 else text)
        else:
            out.append("- " + text if coeff < 0 else "+ " + text)
    return " ".join(out) if out else "0"


class UniPoly:
    """Sparse polynomial in one variable, mapping degree to coefficient."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        data = {}
        for d, c in dict(coeffs or {}).items():
            if c:
                data[int(d)] = c
        self.coeffs = data

    def __eq__(self, other):
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other):
        out = dict(self.coeffs)
        for d, c in other.coeffs.items():
            out[d] = out.get(d, 0) + c
        return UniPoly(out)

    def __mul__(self, other):
        out = {}
        for d1, c1 in self.coeffs.items():
            for d2, c2 in other.coeffs.items():
                out[d1 + d2] = out.get(d1 + d2, 0) + c1 * c2
        return UniPoly(out)

    def __call__(self, value):
        return sum(c * value ** d for d, c in self.coeffs.items())

    def coefficient(self, d: int):
        return self.coeffs.get(d, 0)

    @property
    def degree(self) -> int:
        return max(self.coeffs, default=-1)

    def coefficient_vector(self) -> tuple:
        """Coefficients listed from degree 0 through the top degree."""
        return tuple(self.coeffs.get(d, 0) for d in range(self.degree + 1))

    def render(self, var: str = "x") -> str:
        terms = [(c, _monomial_text(c, [(var, d)]))
                 for d, c in sorted(self.coeffs.items(), reverse=True)]
        return _join_terms(terms)

    def __repr__(self):
        return "UniPoly(%s)" % self.render()


class BiPoly:
    """Sparse polynomial in two variables keyed by (x-degree, y-degree)."""

    __slots__ = ("monomials",)

    def __init__(self, monomials=None):
        data = {}
        for key, c in dict(monomials or {}).items():
            if c:
                dx, dy = key
                data[(int(dx), int(dy))] = c
        self.monomials = data

    def __eq__(self, other):
        return isinstance(other, BiPoly) and self.monomials == other.monomials

    def __hash__(self):
        return hash(frozenset(self.monomials.items()))

    def x_slice(self, dx: int) -> UniPoly:
        """The coefficient of x^dx, as a polynomial in the second variable."""
        return UniPoly({dy: c for (d, dy), c in self.monomials.items() if d == dx})

    def render(self, xvar: str = "x", yvar: str = "y") -> str:
        keys = sorted(self.monomials, key=lambda k: (-k[0], -k[1]))
        terms = [(self.monomials[k], _monomial_text(self.monomials[k], [(xvar, k[0]), (yvar, k[1])]))
                 for k in keys]
        return _join_terms(terms)

    def __repr__(self):
        return "BiPoly(%s)" % self.render()


# ---------------------------------------------------------------------------
# Mobius, f/b and characteristic polynomials

_WEIRD_CACHE = {}


def weird_poly(n: int) -> UniPoly:
    """Signed Stirling sum: sum_k (-1)^(k-1) (k-1)! S(n,k) x^(k-1)."""
    if n < 1:
        raise ValueError("defined for n >= 1")
    if n not in _WEIRD_CACHE:
        coeffs = {k - 1: (-1) ** (k - 1) * factorial(k - 1) * stirling2(n, k)
                  for k in range(1, n + 1)}
        _WEIRD_CACHE[n] = UniPoly(coeffs)
    return _WEIRD_CACHE[n]


def mobius_polynomial(ell: int, n: int, cap: int = DEFAULT_CAP) -> BiPoly:
    """Bigraded Mobius polynomial of the flat poset, summed forest by forest.

    Each forest G contributes (xy)^dim(G) times the product of weird_poly(|p|)
    over all parts p of all copies.
    """
    acc = {}
    for G in enumerate_forests(ell, n, cap=cap):
        d = forest_dim(G)
        prod = UniPoly({0: 1})
        for partition in G.partitions:
            for part in partition:
                if len(part) > 1:
                    prod = prod * weird_poly(len(part))
        for deg, c in prod.coeffs.items():
            key = (d + deg, d)
            acc[key] = acc.get(key, 0) + c
    return BiPoly(acc)


def mobius_polynomial_by_intervals(ell: int, n: int, cap: int = DEFAULT_CAP) -> BiPoly:
    """Independent route: sum mu(F, G) x^dim(F) y^dim(G) over interval pairs."""
    acc = {}
    for G in enumerate_forests(ell, n, cap=cap):
        dG = forest_dim(G)
        for F in forest_refinements(G):
            key = (forest_dim(F), dG)
            acc[key] = acc.get(key, 0) + interval_mobius(ForestInterval(F, G))
    return BiPoly(acc)


def f_polynomial(ell: int, n: int, cap: int = DEFAULT_CAP) -> UniPoly:
    """Face counts by dimension: coefficient of x^k counts k-dimensional faces."""
    acc = {}
    for (dx, dy), c in mobius_polynomial(ell, n, cap=cap).monomials.items():
        acc[dx] = acc.get(dx, 0) + c * (-1) ** (dx + dy)
    return UniPoly(acc)


def b_polynomial(ell: int, n: int, cap: int = DEFAULT_CAP) -> UniPoly:
    """Bounded face counts by dimension."""
    acc = {}
    for (dx, dy), c in mobius_polynomial(ell, n, cap=cap).monomials.items():
        acc[dx] = acc.get(dx, 0) + c * (-1) ** dx
    return UniPoly(acc)


def _exp_scalar(terms, order: int):
    """exp of sum_{m>=1} terms[m] z^m as a truncated rational power series."""
    e = [Fraction(1)] + [Fraction(0)] * order
    for m in range(1, order + 1):
        e[m] = sum(k * terms[k] * e[m - k] for k in range(1, m + 1)) / m
    return e


def char_poly(ell: int, n: int) -> UniPoly:
    """Characteristic polynomial, extracted from a generating-function identity.

    Computed as ((-1)^n n!/y) [z^n] exp(-sum_m F(ell,m) y z^m / m) where
    F(ell, m) counts ell-ary plane trees with m nodes.  Matches the top
    x-slice of mobius_polynomial whenever both are computable.
    """
    if ell < 1 or n < 1:
        raise ValueError("need ell >= 1 and n >= 1")
    # coefficients of the exponent are monomials c*y, so track dicts in y
    terms = [{}] + [{1: Fraction(-fuss_catalan(ell, m), m)} for m in range(1, n + 1)]
    e = [{0: Fraction(1)}] + [{} for _ in range(n)]
    for m in range(1, n + 1):
        acc = {}
        for k in range(1, m + 1):
            for d1, c1 in terms[k].items():
                for d2, c2 in e[m - k].items():
                    key = d1 + d2
                    acc[key] = acc.get(key, 0) + k * c1 * c2
        e[m] = {d: c / m for d, c in acc.items() if c}
    scale = (-1) ** n * factorial(n)
    out = {}
    for d, c in e[n].items():
        v = c * scale
        if v:
            if v.denominator != 1:
                raise ArithmeticError("non-integer coefficient in characteristic data")
            out[d - 1] = int(v)
    return UniPoly(out)


def region_count(ell: int, n: int) -> int:
    """Number of regions, by exact exponential-generating-function extraction."""
    if ell < 1 or n < 1:
        raise ValueError("need ell >= 1 and n >= 1")
    terms = [Fraction(0)] + [Fraction(fuss_catalan(ell, m), m) for m in range(1, n + 1)]
    v = _exp_scalar(terms, n)[n] * factorial(n)
    if v.denominator != 1:
        raise ArithmeticError("non-integer region count")
    return int(v)


def bounded_region_count(ell: int, n: int) -> int:
    """Number of bounded regions; the exponent here carries no 1/m weights."""
    if ell < 1 or n < 1:
        raise ValueError("need ell >= 1 and n >= 1")
    order = n - 1
    terms = [Fraction(0)] + [Fraction((ell - 1) * fuss_catalan(ell, m))
                             for m in range(1, order + 1)]
    v = _exp_scalar(terms, order)[order] * factorial(order)
    if v.denominator != 1:
        raise ArithmeticError("non-integer bounded region count")
    return int(v)


def vertex_count(ell: int, n: int) -> int:
    """Closed form ell*((ell-1)n + 1)^(n-2); the n = 1 family is a point."""
    if ell < 1 or n < 1:
        raise ValueError("need ell >= 1 and n >= 1")
    if n == 1:
        return 1
    return ell * ((ell - 1) * n + 1) ** (n - 2)


def refined_vertex_count(ell: int, n: int, k) -> int:
    """Vertices whose copy-i flat has exactly k_i non-singleton merges.

    Requires sum(k) == n - 1 with each 0 <= k_i <= n - 1; the closed form is
    n^(ell-1) * multinomial(n-1; k) * prod_i (n - k_i)^(k_i - 1).
    """
    k = tuple(int(v) for v in k)
    if len(k) != ell:
        raise ValueError("need one entry per copy")
    if any(v < 0 or v > n - 1 for v in k) or sum(k) != n - 1:
        raise ValueError("entries must be in [0, n-1] and sum to n-1")
    v = Fraction(n) ** (ell - 1) * multinomial(n - 1, k)
    for ki in k:
        v *= Fraction(n - ki) ** (ki - 1)
    if v.denominator != 1:
        raise ArithmeticError("non-integer refined vertex count")
    return int(v)


# ---------------------------------------------------------------------------
# translation matrices


class TranslationMatrix:
    """Exact rational translations: row i holds the consecutive offsets of copy i.

    offset(i, s, t) telescopes row i between positions s and t and is
    antisymmetric under swapping s and t.  Entries may be given as ints,
    Fractions, or strings like "3/2".
    """

    __slots__ = ("ell", "n", "rows", "_prefix")

    def __init__(self, rows):
        rows = tuple(tuple(Fraction(v) for v in row) for row in rows)
        if not rows:
            raise ValueError("need at least one row")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("rows must share one width")
        self.rows = rows
        self.ell = len(rows)
        self.n = width + 1
        prefix = []
        for row in rows:
            p = [Fraction(0)] * (self.n + 1)
            for j, v in enumerate(row, start=1):
                p[j + 1] = p[j] + v
            prefix.append(tuple(p))
        self._prefix = tuple(prefix)

    def offset(self, i: int, s: int, t: int) -> Fraction:
        """Sum of row i entries between s and t (negated when t < s)."""
        p = self._prefix[i - 1]
        return p[t] - p[s]

    def __eq__(self, other):
        return isinstance(other, TranslationMatrix) and self.rows == other.rows

    def __repr__(self):
        return "TranslationMatrix(%r)" % ([[str(v) for v in row] for row in self.rows],)


def default_matrix(ell: int, n: int) -> TranslationMatrix:
    """A generic matrix with a zero first row.

    For two copies the second row is (2^(n-2), ..., 2, 1).  For more copies
    row i telescopes the potentials 4^((i-2)n + r - 1); every mixed cyclic
    offset sum is then a signed sum of distinct powers with a surviving term,
    so it cannot vanish.
    """
    if ell < 1 or n < 1:
        raise ValueError("need ell >= 1 and n >= 1")
    rows = [[0] * (n - 1)]
    if ell == 2:
        rows.append([2 ** (n - 1 - j) for j in range(1, n)])
    else:
        for i in range(2, ell + 1):
            base = 4 ** ((i - 2) * n)
            rows.append([3 * base * 4 ** (j - 1) for j in range(1, n)])
    return TranslationMatrix(rows)


def alternate_matrix(ell: int, n: int) -> TranslationMatrix:
    """A second generic matrix, independent of default_matrix (base-3 tower)."""
    if ell < 1 or n < 1:
        raise ValueError("need ell >= 1 and n >= 1")
    rows = [[0] * (n - 1)]
    for i in range(2, ell + 1):
        base = 3 ** ((i - 2) * n)
        rows.append([2 * base * 3 ** (j - 1) for j in range(1, n)])
    return TranslationMatrix(rows)


def is_generic(a: TranslationMatrix) -> bool:
    """Exhaustively check that no mixed-copy cyclic offset sum vanishes.

    Walks every cyclic sequence of distinct coordinates (anchored at its
    minimum) and every non-constant copy assignment.  Capped at n = 7.
    """
    n, ell = a.n, a.ell
    if n > 7:
        raise CapExceeded("genericity check is exhaustive and capped at n = 7")
    off = [[[a.offset(i, s, t) for t in range(n + 1)] for s in range(n + 1)]
           for i in range(1, ell + 1)]
    colorings = {}
    for k in range(2, n + 1):
        colorings[k] = [c for c in itertools.product(range(ell), repeat=k)
                        if len(set(c)) > 1]
        for subset in itertools.combinations(range(1, n + 1), k):
            for rest in itertools.permutations(subset[1:]):
                cyc = (subset[0],) + rest
                for colors in colorings[k]:
                    total = Fraction(0)
                    for j in range(k):
                        total += off[colors[j]][cyc[j - 1]][cyc[j]]
                    if total == 0:
                        return False
    return True


# ---------------------------------------------------------------------------
# ordered partition forests and the face criterion


class OrderedPartitionForest(NamedTuple):
    ell: int
    n: int
    ordered: tuple  # one ordered partition (tuple of sorted blocks) per copy

    def render(self) -> str:
        return " ; ".join(render_ordered_partition(op) for op in self.ordered)

    def underlying(self) -> PartitionForest:
        return make_forest(self.ell, self.n, self.ordered)

    @property
    def dim(self) -> int:
        return self.n - 1 - self.ell * self.n + sum(len(op) for op in self.ordered)


def make_ordered_forest(ell: int, n: int, ordered) -> OrderedPartitionForest:
    """Validate block structure and acyclicity, then freeze the ordered forest."""
    ordered = tuple(tuple(tuple(sorted(b)) for b in op) for op in ordered)
    if len(ordered) != ell:
        raise ValueError("need one ordered partition per copy")
    for op in ordered:
        validate_ordered_partition(op, n)
    make_forest(ell, n, ordered)  # raises if the underlying tuple is not a forest
    return OrderedPartitionForest(ell, n, ordered)


def _coerce_ordered_forest(OF, a: TranslationMatrix) -> OrderedPartitionForest:
    if isinstance(OF, OrderedPartitionForest):
        return OF
    return make_ordered_forest(a.ell, a.n, OF)


def is_face(OF, a: TranslationMatrix) -> bool:
    """Decide feasibility of the ordered forest's defining linear system.

    Blocks impose exact differences; consecutive blocks impose strict ones,
    carried as an epsilon deficit.  Infeasibility is exactly a negative cycle
    in the difference-constraint digraph, found by Bellman-Ford with
    lexicographic (rational, epsilon-count) weights.
    """
    OF = _coerce_ordered_forest(OF, a)
    if OF.ell != a.ell or OF.n != a.n:
        raise ValueError("matrix shape does not match the forest")
    n = OF.n
    arcs = []
    for i, op in enumerate(OF.ordered, start=1):
        for block in op:
            for u, v in zip(block, block[1:]):
                w = a.offset(i, u, v)
                arcs.append((u, v, w, 0))
                arcs.append((v, u, -w, 0))
        for b1, b2 in zip(op, op[1:]):
            u, v = b1[0], b2[0]
            arcs.append((u, v, a.offset(i, u, v), -1))
    # x_u - x_v <= q + m*eps relaxes dist[u] against dist[v]
    dist = {v: (Fraction(0), 0) for v in range(1, n + 1)}
    for _ in range(n):
        changed = False
        for u, v, q, m in arcs:
            cand = (dist[v][0] + q, dist[v][1] + m)
            if cand < dist[u]:
                dist[u] = cand
                changed = True
        if not changed:
            return True
    for u, v, q, m in arcs:
        if (dist[v][0] + q, dist[v][1] + m) < dist[u]:
            return False
    return True


def forced_order(F: PartitionForest, a: TranslationMatrix, i: int, s: int, t: int) -> int:
    """Order of s and t in copy i, forced by the unique forest path between them.

    Returns +1 when the block of s must precede the block of t, -1 for the
    reverse, and 0 exactly when s and t share a part of copy i.  Raises when
    s and t lie in distinct components (no order is forced there).
    """
    if F.ell != a.ell or F.n != a.n:
        raise ValueError("matrix shape does not match the forest")
    if not 1 <= i <= F.ell:
        raise ValueError("copy index out of range")
    if s == t or not (1 <= s <= F.n and 1 <= t <= F.n):
        raise ValueError("need two distinct elements of 1..n")
    # neighbors via shared parts; any clique step telescopes identically
    adj = {u: [] for u in range(1, F.n + 1)}
    for copy, partition in enumerate(F.partitions, start=1):
        for part in partition:
            for u in part:
                for v in part:
                    if u != v:
                        adj[u].append((v, copy))
    prev = {s: None}
    queue = [s]
    while queue and t not in prev:
        nxt = []
        for u in queue:
            for v, copy in adj[u]:
                if v not in prev:
                    prev[v] = (u, copy)
                    nxt.append(v)
        queue = nxt
    if t not in prev:
        raise ValueError("elements lie in distinct components")
    total = Fraction(0)
    v = t
    while prev[v] is not None:
        u, copy = prev[v]
        total += a.offset(copy, u, v)
        v = u
    diff = a.offset(i, s, t) - total
    if diff > 0:
        return 1
    if diff < 0:
        return -1
    for part in F.partitions[i - 1]:
        if s in part:
            if t in part:
                return 0
            break
    raise ValueError("vanishing mixed cycle; the translations are not generic")


# ---------------------------------------------------------------------------
# inversion poset


class InversionPoset(NamedTuple):
    """Quotiented union of per-pair chains ordering the copies of each cut.

    classes[k] = (i, part_s, part_t) names the relation "the copy-i block
    part_s comes before part_t"; partner[k] is the reversed-orientation
    class; chains maps each ordered element pair (s, t) in distinct
    components to its class indices sorted by decreasing offset; preds lists
    direct predecessors accumulated from all chains.
    """

    classes: tuple
    chains: dict
    partner: tuple
    preds: tuple


def build_inversion_poset(F: PartitionForest, a: TranslationMatrix) -> InversionPoset:
    if F.ell != a.ell or F.n != a.n:
        raise ValueError("matrix shape does not match the forest")
    comp_of = {}
    for idx, comp in enumerate(components(F)):
        for x in comp:
            comp_of[x] = idx
    part_of = []
    for partition in F.partitions:
        m = {}
        for part in partition:
            for x in part:
                m[x] = part
        part_of.append(m)
    index = {}
    classes = []

    def intern(key):
        if key not in index:
            index[key] = len(classes)
            classes.append(key)
        return index[key]

    chains = {}
    edges = set()
    for s in range(1, F.n + 1):
        for t in range(1, F.n + 1):
            if s == t or comp_of[s] == comp_of[t]:
                continue
            offsets = [(a.offset(i, s, t), i) for i in range(1, F.ell + 1)]
            offsets.sort(reverse=True)
            for (o1, _), (o2, _) in zip(offsets, offsets[1:]):
                if o1 == o2:
                    raise ValueError("two copies share an offset; not generic")
            chain = tuple(intern((i, part_of[i - 1][s], part_of[i - 1][t]))
                          for _, i in offsets)
            chains[(s, t)] = chain
            edges.update(zip(chain, chain[1:]))
    partner = tuple(index[(i, q, p)] for (i, p, q) in classes)
    preds = [set() for _ in classes]
    for lo, hi in edges:
        preds[hi].add(lo)
    # the quotient must stay acyclic for lower sets to make sense
    indeg = [len(p) for p in preds]
    ready = [k for k, d in enumerate(indeg) if d == 0]
    seen = 0
    succs = [[] for _ in classes]
    for lo, hi in edges:
        succs[lo].append(hi)
    while ready:
        k = ready.pop()
        seen += 1
        for m in succs[k]:
            indeg[m] -= 1
            if indeg[m] == 0:
                ready.append(m)
    if seen != len(classes):
        raise ValueError("inconsistent chain quotient; the translations are not generic")
    return InversionPoset(tuple(classes), chains, partner,
                          tuple(frozenset(p) for p in preds))


def antisymmetric_lower_sets(ip: InversionPoset) -> list:
    """All lower sets containing exactly one orientation of every class."""
    m = len(ip.classes)
    succs = [[] for _ in range(m)]
    for k in range(m):
        for p in ip.preds[k]:
            succs[p].append(k)
    pairs = []
    seen = set()
    for k in range(m):
        if k not in seen:
            seen.add(k)
            seen.add(ip.partner[k])
            pairs.append(k)
    state = [None] * m
    out = []

    def propagate(k, val, trail) -> bool:
        stack = [(k, val)]
        while stack:
            k, val = stack.pop()
            if state[k] is not None:
                if state[k] != val:
                    return False
                continue
            state[k] = val
            trail.append(k)
            stack.append((ip.partner[k], not val))
            if val:
                stack.extend((p, True) for p in ip.preds[k])
            else:
                stack.extend((q, False) for q in succs[k])
        return True

    def rec(depth):
        if depth == len(pairs):
            out.append(frozenset(k for k in range(m) if state[k]))
            return
        k = pairs[depth]
        if state[k] is not None:
            rec(depth + 1)
            return
        for val in (True, False):
            trail = []
            if propagate(k, val, trail):
                rec(depth + 1)
            for q in trail:
                state[q] = None

    rec(0)
    return out


def _forced_part_edges(F: PartitionForest, a: TranslationMatrix):
    """Per copy, the forced direction between parts sharing a component."""
    comp_of = {}
    for idx, comp in enumerate(components(F)):
        for x in comp:
            comp_of[x] = idx
    out = []
    for i, partition in enumerate(F.partitions, start=1):
        edges = []
        for p, q in itertools.combinations(range(len(partition)), 2):
            ps, qs = partition[p], partition[q]
            if comp_of[ps[0]] != comp_of[qs[0]]:
                continue
            sign = forced_order(F, a, i, ps[0], qs[0])
            edges.append((p, q) if sign > 0 else (q, p))
        out.append(edges)
    return out


def _assemble(F: PartitionForest, ideal, ip: InversionPoset, forced):
    """Topologically sort each copy's parts; None when a choice set is cyclic."""
    chosen = [ip.classes[k] for k in ideal]
    ordered = []
    for i, partition in enumerate(F.partitions, start=1):
        pos = {part: idx for idx, part in enumerate(partition)}
        edges = list(forced[i - 1])
        edges.extend((pos[p], pos[q]) for (ci, p, q) in chosen if ci == i)
        indeg = [0] * len(partition)
        succ = [[] for _ in partition]
        for lo, hi in edges:
            succ[lo].append(hi)
            indeg[hi] += 1
        ready = [k for k, d in enumerate(indeg) if d == 0]
        order = []
        while ready:
            if len(ready) > 1:  # tournament: a unique minimum or a cycle
                return None
            k = ready.pop()
            order.append(partition[k])
            for m in succ[k]:
                indeg[m] -= 1
                if indeg[m] == 0:
                    ready.append(m)
        if len(order) != len(partition):
            return None
        ordered.append(tuple(order))
    return OrderedPartitionForest(F.ell, F.n, tuple(ordered))


def candidate_orderings(F: PartitionForest, a: TranslationMatrix) -> list:
    """Ordered forests assembled from antisymmetric lower sets, unfiltered.

    These are only candidates: lower sets beyond n = 3 can assemble into
    orderings whose linear systems are infeasible, so faces are the subset
    passing is_face.
    """
    ip = build_inversion_poset(F, a)
    forced = _forced_part_edges(F, a)
    out = []
    for ideal in antisymmetric_lower_sets(ip):
        of = _assemble(F, ideal, ip, forced)
        if of is not None:
            out.append(of)
    out.sort(key=OrderedPartitionForest.render)
    return out


def orderings_of_forest(F: PartitionForest, a: TranslationMatrix) -> list:
    """The faces whose underlying forest is F, via the inversion poset."""
    return [of for of in candidate_orderings(F, a) if is_face(of, a)]


# ---------------------------------------------------------------------------
# full face enumeration


def enumerate_faces(ell: int, n: int, a: TranslationMatrix,
                    cap: int = DEFAULT_CAP, route: str = "orderings") -> list:
    """All faces as ordered partition forests, canonically sorted.

    route "orderings" goes through the inversion poset per forest; route
    "filter" tries every per-copy ordering of every forest against is_face.
    The two must agree for a generic matrix.
    """
    if a.ell != ell or a.n != n:
        raise ValueError("matrix shape does not match the family")
    faces = []
    if route == "orderings":
        for F in enumerate_forests(ell, n, cap=cap):
            faces.extend(orderings_of_forest(F, a))
    elif route == "filter":
        budget = 0
        for F in enumerate_forests(ell, n, cap=cap):
            combos = 1
            for partition in F.partitions:
                combos *= factorial(len(partition))
            budget += combos
            if budget > cap:
                raise CapExceeded("ordering filter budget exceeded")
            for ordered in itertools.product(
                    *(itertools.permutations(p) for p in F.partitions)):
                of = OrderedPartitionForest(ell, n, ordered)
                if is_face(of, a):
                    faces.append(of)
    else:
        raise ValueError("unknown route %r" % (route,))
    faces.sort(key=OrderedPartitionForest.render)
    return faces


def face_vector(ell: int, n: int, a: TranslationMatrix,
                cap: int = DEFAULT_CAP, route: str = "orderings") -> tuple:
    """Face counts by dimension, from 0 through n-1."""
    counts = [0] * n
    for of in enumerate_faces(ell, n, a, cap=cap, route=route):
        counts[of.dim] += 1
    return tuple(counts)
