"""Cubical models of the permutahedron and the grid encoding of facets.

The permutahedron on n+1 letters has two realizations as subdivisions of
the unit n-cube into axis-parallel boxes, one face per ordered partition.
Both are built by the same prism recursion; the su model threads the
largest letter into each lower face, the la model the smallest.  Unions
of equal-dimension faces whose support is again a box (subdivision
cubes) single out at every vertex a maximal complementary pair, the
hourglass, and this pair coincides with the shift closure of the
vertex's strong complementary pair.  Independently, facets can be coded
as grids: a permutation walks out a step matrix, and admissible subset
shifts become column and row moves that never overwrite nonzero cells.
Each description yields its own route to the facet enumeration.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import NamedTuple

from .core import (
    max_vertex,
    min_vertex,
    render_ordered_partition,
    render_perm,
)
from .diagonal import DiagonalFace, make_face
from .forests import CapExceeded
from .shifts import SHIFT_VARIANTS, ShiftOp, moving_row, scp_from_perm, shift_lattice

CUBICAL_CAP = 6

MATRIX_CAP = 7

DIRECTIONS = ("as-max", "as-min")


def _check_variant(variant: str) -> None:
    if variant not in SHIFT_VARIANTS:
        raise ValueError(
            "unknown variant %r; expected one of %s"
            % (variant, ", ".join(SHIFT_VARIANTS))
        )


# ---------------------------------------------------------------------------
# dyadic interval endpoints

# Every breakpoint is 1 - 2**-m, so endpoints are stored as normalized
# (numerator, exponent) pairs meaning num / 2**exp; equality of values is
# equality of pairs, and only volume sums need Fraction arithmetic.


def dyadic(num: int, exp: int = 0) -> tuple:
    if exp < 0:
        raise ValueError("negative dyadic exponent")
    while exp > 0 and num % 2 == 0:
        num //= 2
        exp -= 1
    return (num, exp)


@lru_cache(maxsize=None)
def dyadic_value(point) -> Fraction:
    num, exp = point
    return Fraction(num, 1 << exp)


_ZERO = dyadic(0)
_ONE = dyadic(1)


def _suffix_breaks(blocks) -> tuple:
    """Subdivision points 0 = p_0 < ... < p_k = 1 over one face.

    p_j = 1 - 2**-(size of the last j blocks): the deeper the new letter
    sits, the thinner its slice.
    """
    size = 0
    points = [_ZERO]
    for j in range(1, len(blocks)):
        size += len(blocks[-j])
        points.append(dyadic((1 << size) - 1, size))
    points.append(_ONE)
    return tuple(points)


def _extend(blocks, box, new, points):
    """All faces of the subdivided prism over one lower face.

    The endpoint slices append or prepend the new letter; breakpoint j
    inserts it before the last j blocks, and the j-th interval merges it
    into the j-th block from the end.
    """
    k = len(blocks)
    out = [
        (blocks + ((new,),), box + ((points[0], points[0]),)),
        (((new,),) + blocks, box + ((points[k], points[k]),)),
    ]
    for j in range(1, k):
        cut = k - j
        label = blocks[:cut] + ((new,),) + blocks[cut:]
        out.append((label, box + ((points[j], points[j]),)))
    for j in range(1, k + 1):
        cut = k - j
        merged = tuple(sorted(blocks[cut] + (new,)))
        label = blocks[:cut] + (merged,) + blocks[cut + 1 :]
        out.append((label, box + ((points[j - 1], points[j]),)))
    return out


# ---------------------------------------------------------------------------
# the complex


class CubicalComplex:
    """One of the two box subdivisions of [0,1]^n modelling Perm_{n+1}.

    Faces are keyed by ordered partitions of 1..n+1, each mapped to its
    box, a tuple of n dyadic intervals.  Axis i carries letter i+2 in
    the su model and letter n-i in the la model; an edge parallel to an
    axis swaps that letter with a neighbour, so the weak order grows
    with the coordinate sum for su and shrinks for la.
    """

    __slots__ = ("n", "variant", "_boxes", "_by_dim", "_corners")

    def __init__(self, n: int, variant: str, boxes: dict):
        self.n = n
        self.variant = variant
        self._boxes = boxes
        by_dim = {}
        for label in boxes:
            by_dim.setdefault(self.dimension(label), []).append(label)
        self._by_dim = {k: tuple(v) for k, v in by_dim.items()}
        self._corners = {
            tuple(lo for lo, _ in boxes[label]): label for label in by_dim.get(0, ())
        }

    @property
    def faces(self):
        return MappingProxyType(self._boxes)

    def dimension(self, face) -> int:
        return self.n + 1 - len(face)

    def box(self, face) -> tuple:
        try:
            return self._boxes[face]
        except (KeyError, TypeError):
            pass
        key = tuple(tuple(sorted(b)) for b in face)
        if key not in self._boxes:
            raise ValueError(
                "not a face of the complex: %s" % render_ordered_partition(key)
            )
        return self._boxes[key]

    def faces_of_dimension(self, k: int) -> tuple:
        return self._by_dim.get(k, ())

    def spanned(self, face) -> frozenset:
        """Letters moved within the face: all but one per block.

        The su model keeps block minima fixed, the la model block maxima.
        """
        if self.variant == "su":
            return frozenset(x for b in face for x in b[1:])
        return frozenset(x for b in face for x in b[:-1])

    def axis(self, element: int) -> int:
        axis = element - 2 if self.variant == "su" else self.n - element
        if not 0 <= axis < self.n:
            raise ValueError("letter %d spans no axis" % element)
        return axis

    def element(self, axis: int) -> int:
        if not 0 <= axis < self.n:
            raise ValueError("no axis %d" % axis)
        return axis + 2 if self.variant == "su" else self.n - axis

    def corner(self, box, weak_max: bool) -> tuple:
        """The box corner holding its weak-order extreme vertex."""
        hi = weak_max == (self.variant == "su")
        return tuple(iv[1] if hi else iv[0] for iv in box)

    def vertex_at(self, point) -> tuple:
        try:
            return self._corners[tuple(point)]
        except KeyError:
            raise ValueError("no vertex at %r" % (point,)) from None

    def __len__(self) -> int:
        return len(self._boxes)

    def __iter__(self):
        return iter(self._boxes)

    def __contains__(self, face) -> bool:
        try:
            self.box(face)
        except ValueError:
            return False
        return True


@lru_cache(maxsize=None)
def _build(n: int, variant: str) -> CubicalComplex:
    if n == 0:
        return CubicalComplex(0, variant, {((1,),): ()})
    below = _build(n - 1, variant)
    new = n + 1 if variant == "su" else 1
    grown = {}
    for label, box in below._boxes.items():
        if variant == "su":
            blocks = label
        else:
            blocks = tuple(tuple(x + 1 for x in b) for b in label)
        for lab, bx in _extend(blocks, box, new, _suffix_breaks(blocks)):
            if lab in grown:
                raise AssertionError("label collision while subdividing")
            grown[lab] = bx
    return CubicalComplex(n, variant, grown)


def build_cubical(n: int, variant: str = "su", cap: int = CUBICAL_CAP) -> CubicalComplex:
    """The n-dimensional cubical model, one face per partition of 1..n+1."""
    _check_variant(variant)
    if n < 0:
        raise ValueError("dimension must be nonnegative")
    if n > cap:
        raise CapExceeded("cubical complex capped at n = %d" % cap)
    return _build(n, variant)


# ---------------------------------------------------------------------------
# subdivision cubes


def _hull(boxes) -> tuple:
    out = []
    for axis in range(len(boxes[0])):
        lo = min((b[axis][0] for b in boxes), key=dyadic_value)
        hi = max((b[axis][1] for b in boxes), key=dyadic_value)
        out.append((lo, hi))
    return tuple(out)


def _extent_axes(box) -> tuple:
    return tuple(i for i, (lo, hi) in enumerate(box) if lo != hi)


def _volume(box, axes) -> Fraction:
    return math.prod(
        (dyadic_value(box[i][1]) - dyadic_value(box[i][0]) for i in axes),
        start=Fraction(1),
    )


def _covers(outer, inner) -> bool:
    for (a, b), (c, d) in zip(outer, inner):
        if dyadic_value(c) < dyadic_value(a) or dyadic_value(b) < dyadic_value(d):
            return False
    return True


def _checked_faces(complex_: CubicalComplex, faces):
    labels = {tuple(tuple(sorted(b)) for b in f) for f in faces}
    if not labels:
        raise ValueError("empty set of faces")
    boxes = {lab: complex_.box(lab) for lab in labels}
    dims = {complex_.dimension(lab) for lab in labels}
    if len(dims) != 1:
        raise ValueError("mixed dimensions")
    return labels, boxes, dims.pop()


def is_subdivision_cube(complex_: CubicalComplex, faces) -> bool:
    """Whether the faces have equal dimension k and tile a k-box.

    Faces of the complex have disjoint interiors, so tiling reduces to
    an exact volume count over the spanned axes of the hull.
    """
    labels, boxes, k = _checked_faces(complex_, faces)
    hull = _hull(list(boxes.values())) if complex_.n else ()
    axes = _extent_axes(hull)
    if len(axes) != k:
        return False
    total = sum(_volume(b, axes) for b in boxes.values())
    return total == _volume(hull, axes)


def _extreme_face(complex_: CubicalComplex, faces, weak_max: bool):
    labels, boxes, _ = _checked_faces(complex_, faces)
    hull = _hull(list(boxes.values())) if complex_.n else ()
    point = [dyadic_value(p) for p in complex_.corner(hull, weak_max)]
    found = [
        lab
        for lab, box in boxes.items()
        if all(
            dyadic_value(lo) <= c <= dyadic_value(hi)
            for (lo, hi), c in zip(box, point)
        )
    ]
    if len(found) != 1:
        raise ValueError("no unique extreme face: not a subdivision cube")
    return found[0]


def max_face(complex_: CubicalComplex, faces):
    """The face holding the weak-order maximal vertex of the union."""
    return _extreme_face(complex_, faces, True)


def min_face(complex_: CubicalComplex, faces):
    """The face holding the weak-order minimal vertex of the union."""
    return _extreme_face(complex_, faces, False)


def _merge_runs(v, letters, want_max: bool, su: bool) -> tuple:
    """The face with extreme vertex v spanning exactly the given letters.

    Faces with weak-order maximal vertex v merge descents of v, those
    with minimal vertex v merge ascents; the merged slot is named by the
    letter that the corresponding edge moves.
    """
    merge = set()
    for p in range(len(v) - 1):
        a, b = v[p], v[p + 1]
        if (a > b) != want_max:
            continue
        moved = max(a, b) if su else min(a, b)
        if moved in letters:
            merge.add(p)
    if len(merge) != len(letters):
        raise AssertionError("spanned letters do not match the vertex")
    blocks = []
    cur = [v[0]]
    for p in range(1, len(v)):
        if p - 1 in merge:
            cur.append(v[p])
        else:
            blocks.append(cur)
            cur = [v[p]]
    blocks.append(cur)
    return tuple(tuple(sorted(b)) for b in blocks)


def _line(variant: str, v, rho: int, want_max: bool) -> list:
    """Edges swept by the letter rho from the extreme vertex v.

    The walk stops when rho runs off the word or meets a blocker: su
    carries rho over smaller letters only, la over larger ones.
    """
    su = variant == "su"
    step = 1 if su == want_max else -1
    w = list(v)
    p = w.index(rho)
    edges = []
    while 0 <= p + step < len(w):
        partner = w[p + step]
        if (partner < rho) != su:
            break
        lo = min(p, p + step)
        label = (
            tuple((x,) for x in w[:lo])
            + (tuple(sorted((rho, partner))),)
            + tuple((x,) for x in w[lo + 2 :])
        )
        edges.append(label)
        w[p], w[p + step] = partner, rho
        p += step
    if not edges:
        raise AssertionError("spanned letter admits no edge at the vertex")
    return edges


def max_subdivision_cube(complex_: CubicalComplex, face, direction: str) -> frozenset:
    """The inclusion-maximal subdivision cube with the face as extreme.

    Built by induction on dimension: the letter on the outermost axis is
    swept into a line, the remaining letters span a smaller cube at the
    same vertex, and the k-faces tiling the product box are collected.
    """
    if direction not in DIRECTIONS:
        raise ValueError(
            "direction must be one of %s, got %r" % (", ".join(DIRECTIONS), direction)
        )
    label = tuple(tuple(sorted(b)) for b in face)
    complex_.box(label)
    k = complex_.dimension(label)
    if k == 0:
        return frozenset((label,))
    want_max = direction == "as-max"
    su = complex_.variant == "su"
    v = max_vertex(label) if want_max else min_vertex(label)
    spanned = complex_.spanned(label)
    rho = max(spanned) if su else min(spanned)
    line = _line(complex_.variant, v, rho, want_max)
    rest = spanned - {rho}
    if rest:
        core = max_subdivision_cube(
            complex_, _merge_runs(v, rest, want_max, su), direction
        )
    else:
        core = [tuple((x,) for x in v)]
    hull = _hull([complex_.box(lab) for lab in itertools.chain(line, core)])
    members = [
        lab
        for lab in complex_.faces_of_dimension(k)
        if _covers(hull, complex_.box(lab))
    ]
    axes = _extent_axes(hull)
    tiled = sum(_volume(complex_.box(lab), axes) for lab in members)
    if len(axes) != k or tiled != _volume(hull, axes):
        raise AssertionError("line and core do not weave into a box")
    return frozenset(members)


def hourglass(v, variant: str = "su", cap: int = CUBICAL_CAP) -> tuple:
    """The maximal complementary subdivision-cube pair at a vertex.

    Returns (upper, lower): the upper cube has weak-order maximal vertex
    v and collects one partition per right sweep of the vertex's sigma
    row, the lower mirrors with the tau row, and the dimensions add up
    to n.  The geometric pair is checked against the shift closure and
    any disagreement raises.
    """
    w = tuple(v)
    scp = scp_from_perm(w)
    complex_ = build_cubical(len(w) - 1, variant, cap)
    upper = max_subdivision_cube(complex_, scp.sigma, "as-max")
    lower = max_subdivision_cube(complex_, scp.tau, "as-min")
    closure = shift_lattice(w, variant).faces()
    if upper != {f.sigma for f in closure} or lower != {f.tau for f in closure}:
        raise AssertionError(
            "hourglass disagrees with the shift closure at %s" % render_perm(w)
        )
    return upper, lower


# ---------------------------------------------------------------------------
# step and configuration matrices


class StepMatrix(NamedTuple):
    """Grid whose nonzero cells are 1..n, rows stored bottom-up.

    Columns read off the sigma blocks left to right, rows the tau blocks
    bottom to top, so the grid codes a facet pair with extra placement
    information that makes subset shifts cell moves.
    """

    rows: tuple

    @property
    def height(self) -> int:
        return len(self.rows)

    @property
    def width(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def sigma(self) -> tuple:
        return tuple(
            tuple(sorted(row[c] for row in self.rows if row[c]))
            for c in range(self.width)
        )

    @property
    def tau(self) -> tuple:
        return tuple(tuple(sorted(x for x in row if x)) for row in self.rows)

    @property
    def face(self) -> DiagonalFace:
        return make_face(self.sigma, self.tau)

    def render(self) -> str:
        width = max(len(str(x)) for row in self.rows for x in row)
        return "\n".join(
            " ".join((str(x) if x else ".").rjust(width) for x in row)
            for row in reversed(self.rows)
        )


def step_matrix(w) -> StepMatrix:
    """Walk the word from the bottom-left cell: ascents step right, descents up."""
    w = tuple(w)
    if sorted(w) != list(range(1, len(w) + 1)):
        raise ValueError("not a permutation of 1..%d: %r" % (len(w), w))
    cells = {(0, 0): w[0]}
    r = c = 0
    for a, b in zip(w, w[1:]):
        if a > b:
            r += 1
        else:
            c += 1
        cells[(r, c)] = b
    return StepMatrix(
        tuple(
            tuple(cells.get((i, j), 0) for j in range(c + 1)) for i in range(r + 1)
        )
    )


def matrix_shift(matrix: StepMatrix, op: ShiftOp) -> StepMatrix:
    """Apply one block-admissible subset shift to the grid.

    Sigma shifts move cells one column sideways keeping their rows, tau
    shifts one row keeping their columns.  Only zero cells may be
    written: admissible sequences never collide, so a nonzero target is
    an internal invariant violation, not a user error.
    """
    _check_variant(op.variant)
    if op.side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right', got %r" % (op.side,))
    if op.distance != 1:
        raise ValueError("matrix shifts move a single step")
    row_name = moving_row(op.variant, op.side)
    on_columns = row_name == "sigma"
    rows = [list(row) for row in matrix.rows]
    count = len(rows[0]) if on_columns else len(rows)
    i = op.block - 1
    if not 0 <= i < count:
        raise ValueError("no block %d in %s (has %d)" % (op.block, row_name, count))
    j = i + 1 if op.side == "right" else i - 1
    if not 0 <= j < count:
        raise ValueError(
            "%s shift by 1 from block %d of %s leaves the partition"
            % (op.side, op.block, row_name)
        )

    def lane(t):
        return [row[t] for row in rows] if on_columns else rows[t]

    source = {x for x in lane(i) if x}
    target = {x for x in lane(j) if x}
    M = frozenset(op.subset)
    if not M:
        raise ValueError("empty shift subset")
    if not M <= source:
        raise ValueError(
            "subset %s is not inside block %d of %s" % (sorted(M), op.block, row_name)
        )
    if M == source:
        raise ValueError("shift would empty block %d of %s" % (op.block, row_name))
    su = op.variant == "su"
    anchor = min(source) if su else max(source)
    if anchor in M:
        raise ValueError(
            "block shift must leave the %s of block %d behind: %d is in the subset"
            % ("minimum" if su else "maximum", op.block, anchor)
        )
    if target:
        obstacle = max(target) if su else min(target)
        if su and min(M) <= obstacle:
            raise ValueError(
                "min of %s is %d, which is not greater than %d, the max of block %d"
                % (sorted(M), min(M), obstacle, j + 1)
            )
        if not su and max(M) >= obstacle:
            raise ValueError(
                "max of %s is %d, which is not smaller than %d, the min of block %d"
                % (sorted(M), max(M), obstacle, j + 1)
            )
    moves = [
        (r, c, x)
        for r, row in enumerate(rows)
        for c, x in enumerate(row)
        if x in M
    ]
    for r, c, x in moves:
        tr, tc = (r, j) if on_columns else (j, c)
        if rows[tr][tc]:
            raise AssertionError(
                "matrix shift collision: %d lands on %d" % (x, rows[tr][tc])
            )
        rows[tr][tc] = x
        rows[r][c] = 0
    return StepMatrix(tuple(tuple(row) for row in rows))


class ConfigurationMatrix(NamedTuple):
    """A reachable grid with the word and sweep that produced it."""

    matrix: StepMatrix
    source: tuple
    ops: tuple

    def render(self) -> str:
        return self.matrix.render()


def _grid_sweeps(matrix: StepMatrix, variant: str, side: str) -> list:
    """All grids from one canonical admissible sweep on one side.

    The source lane moves monotonically (so cargo may keep riding) in
    the direction that keeps every target lane pristine when first
    written; at each lane any admissible subset may hop.
    """
    su = variant == "su"
    on_columns = moving_row(variant, side) == "sigma"
    k = matrix.width if on_columns else matrix.height
    toward_larger = side == "right"
    order = range(k - 1) if toward_larger else range(k - 1, 0, -1)
    step = 1 if toward_larger else -1
    results = []

    def rec(idx, cur, ops):
        if idx == len(order):
            results.append((cur, tuple(ops)))
            return
        i = order[idx]
        lanes = cur.sigma if on_columns else cur.tau
        src, tgt = lanes[i], lanes[i + step]
        if su:
            bound = max(tgt) if tgt else 0
            eligible = [x for x in src[1:] if x > bound]
        else:
            bound = min(tgt) if tgt else math.inf
            eligible = [x for x in src[:-1] if x < bound]
        rec(idx + 1, cur, ops)
        for r in range(1, len(eligible) + 1):
            for M in itertools.combinations(eligible, r):
                op = ShiftOp(side, frozenset(M), i + 1, 1, "block", variant)
                rec(idx + 1, matrix_shift(cur, op), ops + [op])

    rec(0, matrix, [])
    return results


def configuration_matrices(n: int, variant: str = "su", cap: int = MATRIX_CAP):
    """Step matrices of all words plus their admissible sweep images.

    The grids are in bijection with the facet pairs via the column and
    row read-off; reaching one grid twice would break that bijection
    and raises.
    """
    _check_variant(variant)
    if n > cap:
        raise CapExceeded("configuration matrix enumeration capped at n = %d" % cap)
    sigma_side = "right" if variant == "su" else "left"
    tau_side = "left" if variant == "su" else "right"
    out = {}
    for w in itertools.permutations(range(1, n + 1)):
        base = step_matrix(w)
        for mid, first in _grid_sweeps(base, variant, sigma_side):
            for fin, second in _grid_sweeps(mid, variant, tau_side):
                if fin in out:
                    raise AssertionError(
                        "configuration matrix reached from two words %s and %s"
                        % (out[fin].source, w)
                    )
                out[fin] = ConfigurationMatrix(fin, w, first + second)
    return frozenset(out.values())
