import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from permadiag.core import (
    fubini,
    parse_ordered_partition,
    perm_inversions,
    weak_leq,
)
from permadiag.cubic import (
    CUBICAL_CAP,
    ConfigurationMatrix,
    StepMatrix,
    build_cubical,
    configuration_matrices,
    dyadic,
    dyadic_value,
    hourglass,
    is_subdivision_cube,
    matrix_shift,
    max_face,
    max_subdivision_cube,
    min_face,
    step_matrix,
)
from permadiag.diagonal import facets
from permadiag.forests import CapExceeded
from permadiag.shifts import ShiftOp, facets_via_shifts, scp_from_perm, shift_lattice


def OP(text):
    return parse_ordered_partition(text)


def perms(n):
    return itertools.permutations(range(1, n + 1))


def point(*coords):
    """A degenerate box pinned at exact fractions."""
    return tuple((Fraction(c), Fraction(c)) for c in coords)


def values(box):
    return tuple((dyadic_value(lo), dyadic_value(hi)) for lo, hi in box)


def box_covers(outer, inner):
    return all(
        dyadic_value(a) <= dyadic_value(c) and dyadic_value(d) <= dyadic_value(b)
        for (a, b), (c, d) in zip(outer, inner)
    )


def order_refines(fine, coarse):
    """Whether merging runs of consecutive blocks of fine yields coarse."""
    it = iter(fine)
    for block in coarse:
        need = set(block)
        while need:
            nxt = next(it, None)
            if nxt is None or not set(nxt) <= need:
                return False
            need.difference_update(nxt)
    return next(it, None) is None


def volume(box):
    out = Fraction(1)
    for lo, hi in box:
        side = dyadic_value(hi) - dyadic_value(lo)
        if side:
            out *= side
    return out


# ---------------------------------------------------------------------------
# the complexes themselves


def test_dyadic_normalization():
    assert dyadic(2, 1) == (1, 0) == dyadic(1)
    assert dyadic(6, 2) == (3, 1)
    assert dyadic(0, 5) == (0, 0)
    assert dyadic_value((3, 2)) == Fraction(3, 4)
    with pytest.raises(ValueError):
        dyadic(1, -1)


def test_segment_su():
    c = build_cubical(1, "su")
    assert values(c.box(OP("1|2"))) == point(0)
    assert values(c.box(OP("2|1"))) == point(1)
    assert values(c.box(OP("12"))) == ((Fraction(0), Fraction(1)),)


def test_segment_la():
    c = build_cubical(1, "la")
    assert values(c.box(OP("2|1"))) == point(0)
    assert values(c.box(OP("1|2"))) == point(1)
    assert values(c.box(OP("12"))) == ((Fraction(0), Fraction(1)),)


def test_square_su_all_faces_pinned():
    c = build_cubical(2, "su")
    h = Fraction(1, 2)
    vertices = {
        "1|2|3": point(0, 0),
        "2|1|3": point(1, 0),
        "1|3|2": point(0, h),
        "2|3|1": point(1, h),
        "3|1|2": point(0, 1),
        "3|2|1": point(1, 1),
    }
    edges = {
        "12|3": ((Fraction(0), Fraction(1)), (Fraction(0), Fraction(0))),
        "1|23": ((Fraction(0), Fraction(0)), (Fraction(0), h)),
        "13|2": ((Fraction(0), Fraction(0)), (h, Fraction(1))),
        "2|13": ((Fraction(1), Fraction(1)), (Fraction(0), h)),
        "23|1": ((Fraction(1), Fraction(1)), (h, Fraction(1))),
        "3|12": ((Fraction(0), Fraction(1)), (Fraction(1), Fraction(1))),
    }
    for text, want in {**vertices, **edges}.items():
        assert values(c.box(OP(text))) == want, text
    assert values(c.box(OP("123"))) == (
        (Fraction(0), Fraction(1)),
        (Fraction(0), Fraction(1)),
    )
    assert len(c) == 13


def test_square_la_all_faces_pinned():
    c = build_cubical(2, "la")
    h = Fraction(1, 2)
    faces = {
        "3|2|1": point(0, 0),
        "2|3|1": point(1, 0),
        "3|1|2": point(0, h),
        "2|1|3": point(1, h),
        "1|3|2": point(0, 1),
        "1|2|3": point(1, 1),
        "23|1": ((Fraction(0), Fraction(1)), (Fraction(0), Fraction(0))),
        "3|12": ((Fraction(0), Fraction(0)), (Fraction(0), h)),
        "13|2": ((Fraction(0), Fraction(0)), (h, Fraction(1))),
        "2|13": ((Fraction(1), Fraction(1)), (Fraction(0), h)),
        "12|3": ((Fraction(1), Fraction(1)), (h, Fraction(1))),
        "1|23": ((Fraction(0), Fraction(1)), (Fraction(1), Fraction(1))),
    }
    for text, want in faces.items():
        assert values(c.box(OP(text))) == want, text


def test_cube_su_spot_vertices():
    c = build_cubical(3, "su")
    spots = {
        "1|2|3|4": (0, 0, 0),
        "1|2|4|3": (0, 0, Fraction(1, 2)),
        "1|4|2|3": (0, 0, Fraction(3, 4)),
        "4|1|2|3": (0, 0, 1),
        "2|4|1|3": (1, 0, Fraction(3, 4)),
        "3|4|1|2": (0, 1, Fraction(3, 4)),
        "4|3|2|1": (1, 1, 1),
    }
    for text, coords in spots.items():
        assert values(c.box(OP(text))) == point(*coords), text


def test_face_counts_are_fubini():
    for n in range(5):
        for variant in ("la", "su"):
            c = build_cubical(n, variant)
            assert len(c) == fubini(n + 1)
            assert len(c.faces_of_dimension(0)) == len(list(perms(n + 1)))
            assert sum(len(c.faces_of_dimension(k)) for k in range(n + 1)) == len(c)


def test_boxes_tile_the_unit_cube():
    for n in range(1, 5):
        for variant in ("la", "su"):
            c = build_cubical(n, variant)
            total = sum(volume(c.box(f)) for f in c.faces_of_dimension(n))
            assert total == 1
            for f in c:
                for lo, hi in c.box(f):
                    assert 0 <= dyadic_value(lo) <= dyadic_value(hi) <= 1


def test_spanned_letters_match_box_extents():
    for n in range(1, 5):
        for variant in ("la", "su"):
            c = build_cubical(n, variant)
            for f in c:
                box = c.box(f)
                extents = {i for i, (lo, hi) in enumerate(box) if lo != hi}
                assert {c.axis(x) for x in c.spanned(f)} == extents


def test_axis_element_maps():
    su = build_cubical(3, "su")
    assert su.axis(2) == 0 and su.axis(4) == 2
    assert su.element(0) == 2 and su.element(2) == 4
    la = build_cubical(3, "la")
    assert la.axis(3) == 0 and la.axis(1) == 2
    assert la.element(0) == 3 and la.element(2) == 1
    with pytest.raises(ValueError):
        su.axis(1)
    with pytest.raises(ValueError):
        la.axis(4)
    with pytest.raises(ValueError):
        su.element(3)


def test_box_rejects_non_faces():
    c = build_cubical(2, "su")
    with pytest.raises(ValueError, match="not a face"):
        c.box(OP("1|2"))
    assert OP("1|23") in c
    assert OP("1|2") not in c
    assert c.box([[3, 1], [2]]) == c.box(OP("13|2"))


def test_vertex_lookup():
    c = build_cubical(2, "su")
    p = c.box(OP("2|3|1"))
    assert c.vertex_at(tuple(lo for lo, _ in p)) == OP("2|3|1")
    with pytest.raises(ValueError):
        c.vertex_at((dyadic(1, 1), dyadic(1, 1)))


def test_face_poset_matches_refinement_order():
    # box containment must agree with merging consecutive blocks
    for variant in ("la", "su"):
        c = build_cubical(3, variant)
        labels = list(c)
        for f in labels:
            for g in labels:
                geometric = box_covers(c.box(g), c.box(f))
                assert geometric == order_refines(f, g), (variant, f, g)


def test_models_are_mirror_images():
    for n in range(5):
        su = build_cubical(n, "su")
        la = build_cubical(n, "la")
        m = n + 2
        for f, box in su.faces.items():
            mirrored = tuple(tuple(sorted(m - x for x in b)) for b in f)
            assert la.box(mirrored) == box


def test_edges_step_up_the_weak_order():
    for variant in ("la", "su"):
        c = build_cubical(3, variant)
        for f in c.faces_of_dimension(1):
            box = c.box(f)
            lo = c.vertex_at(tuple(a for a, _ in box))
            hi = c.vertex_at(tuple(b for _, b in box))
            below, above = (lo, hi) if variant == "su" else (hi, lo)
            u = tuple(b[0] for b in below)
            v = tuple(b[0] for b in above)
            assert len(perm_inversions(v)) == len(perm_inversions(u)) + 1
            assert weak_leq(u, v)


def test_build_cubical_validates():
    with pytest.raises(ValueError, match="unknown variant"):
        build_cubical(2, "lr")
    with pytest.raises(ValueError):
        build_cubical(-1)
    with pytest.raises(CapExceeded):
        build_cubical(CUBICAL_CAP + 1)


# ---------------------------------------------------------------------------
# subdivision cubes


def test_subdivision_cube_pinned_positives():
    c = build_cubical(3, "su")
    for faces in (
        [OP("1234")],
        [OP("1|234")],
        [OP("1|234"), OP("14|23")],
        [OP("1|3|24"), OP("1|34|2")],
    ):
        assert is_subdivision_cube(c, faces)


def test_subdivision_cube_pinned_negatives():
    c = build_cubical(3, "su")
    for faces in (
        [OP("134|2"), OP("14|23")],
        [OP("1|234"), OP("134|2"), OP("14|23")],
        [OP("1|2|34"), OP("1|23|4")],
    ):
        assert not is_subdivision_cube(c, faces)


def test_subdivision_cube_input_errors():
    c = build_cubical(3, "su")
    with pytest.raises(ValueError, match="empty"):
        is_subdivision_cube(c, [])
    with pytest.raises(ValueError, match="mixed dimensions"):
        is_subdivision_cube(c, [OP("1234"), OP("1|234")])
    with pytest.raises(ValueError, match="not a face"):
        is_subdivision_cube(c, [OP("1|2|3")])


def test_extreme_faces_of_pinned_cube():
    c = build_cubical(3, "su")
    cube = [OP("1|234"), OP("13|24"), OP("14|23"), OP("134|2")]
    assert is_subdivision_cube(c, cube)
    assert max_face(c, cube) == OP("134|2")
    assert min_face(c, cube) == OP("1|234")
    with pytest.raises(ValueError, match="extreme"):
        max_face(c, [OP("1|2|34"), OP("1|23|4")])


def test_max_subdivision_cube_pinned():
    c = build_cubical(3, "su")
    grown = max_subdivision_cube(c, OP("134|2"), "as-max")
    assert grown == {OP("1|234"), OP("13|24"), OP("14|23"), OP("134|2")}
    assert max_subdivision_cube(c, OP("4|3|12"), "as-min") == {OP("4|3|12")}
    assert max_subdivision_cube(c, OP("4|3|1|2"), "as-max") == {OP("4|3|1|2")}
    assert max_subdivision_cube(c, OP("1234"), "as-max") == {OP("1234")}


def test_max_subdivision_cube_validates():
    c = build_cubical(3, "su")
    with pytest.raises(ValueError, match="direction"):
        max_subdivision_cube(c, OP("134|2"), "up")
    with pytest.raises(ValueError, match="not a face"):
        max_subdivision_cube(c, OP("1|2|3"), "as-max")


def test_grown_cubes_are_subdivision_cubes_with_the_face_extreme():
    for variant in ("la", "su"):
        c = build_cubical(3, variant)
        for f in c:
            up = max_subdivision_cube(c, f, "as-max")
            down = max_subdivision_cube(c, f, "as-min")
            assert is_subdivision_cube(c, up)
            assert is_subdivision_cube(c, down)
            assert max_face(c, up) == f
            assert min_face(c, down) == f


def all_two_dim_subdivision_cubes(c):
    two = c.faces_of_dimension(2)
    for r in range(1, len(two) + 1):
        for combo in itertools.combinations(two, r):
            if is_subdivision_cube(c, combo):
                yield frozenset(combo)


def test_exactly_three_square_cubes_topped_by_4312():
    # brute force over all unions of 2-faces, no shortcuts
    c = build_cubical(3, "su")
    found = {
        cube
        for cube in all_two_dim_subdivision_cubes(c)
        if max_face(c, cube) in cube and OP("4|3|1|2") == _top_vertex(c, cube)
    }
    assert found == {
        frozenset({OP("134|2")}),
        frozenset({OP("13|24"), OP("134|2")}),
        frozenset({OP("1|234"), OP("13|24"), OP("14|23"), OP("134|2")}),
    }


def _top_vertex(c, cube):
    boxes = [c.box(f) for f in cube]
    hi = tuple(
        max((b[i][1] for b in boxes), key=dyadic_value) for i in range(c.n)
    )
    corner = hi if c.variant == "su" else tuple(
        min((b[i][0] for b in boxes), key=dyadic_value) for i in range(c.n)
    )
    return c.vertex_at(corner)


def _bottom_vertex(c, cube):
    boxes = [c.box(f) for f in cube]
    lo = tuple(
        min((b[i][0] for b in boxes), key=dyadic_value) for i in range(c.n)
    )
    corner = lo if c.variant == "su" else tuple(
        max((b[i][1] for b in boxes), key=dyadic_value) for i in range(c.n)
    )
    return c.vertex_at(corner)


def test_unique_segment_cube_bottomed_at_4312():
    # segment cubes are runs of collinear consecutive edges, so group
    # edges by line and enumerate runs exhaustively
    c = build_cubical(3, "su")
    lines = {}
    for e in c.faces_of_dimension(1):
        box = c.box(e)
        axis = next(i for i, (lo, hi) in enumerate(box) if lo != hi)
        fixed = tuple(box[i][0] for i in range(c.n) if i != axis)
        lines.setdefault((axis, fixed), []).append(e)
    found = []
    for (axis, _), edges in lines.items():
        edges.sort(key=lambda e: dyadic_value(c.box(e)[axis][0]))
        for i in range(len(edges)):
            for j in range(i, len(edges)):
                run = edges[i : j + 1]
                if not is_subdivision_cube(c, run):
                    continue
                if _bottom_vertex(c, run) == OP("4|3|1|2"):
                    found.append(frozenset(run))
    assert found == [frozenset({OP("4|3|12")})]


# ---------------------------------------------------------------------------
# hourglasses


def test_hourglass_pinned_4312():
    upper, lower = hourglass((4, 3, 1, 2), "su")
    assert upper == {OP("1|234"), OP("13|24"), OP("14|23"), OP("134|2")}
    assert lower == {OP("4|3|12")}


def test_hourglass_of_identity_and_reversal():
    upper, lower = hourglass((1, 2, 3, 4), "su")
    assert upper == {OP("1|2|3|4")}
    assert lower == {OP("1234")}
    upper, lower = hourglass((4, 3, 2, 1), "su")
    assert upper == {OP("1234")}
    assert lower == {OP("4|3|2|1")}


def test_hourglass_halves_are_complementary_cubes():
    for n in (2, 3, 4):
        c = {v: build_cubical(n - 1, v) for v in ("la", "su")}
        for variant in ("la", "su"):
            for w in perms(n):
                upper, lower = hourglass(w, variant)
                du = c[variant].dimension(next(iter(upper)))
                dl = c[variant].dimension(next(iter(lower)))
                assert du + dl == n - 1
                assert is_subdivision_cube(c[variant], upper)
                assert is_subdivision_cube(c[variant], lower)
                assert _top_vertex(c[variant], upper) == tuple((x,) for x in w)
                assert _bottom_vertex(c[variant], lower) == tuple((x,) for x in w)


def test_hourglass_matches_shift_closure_split():
    # the geometric pair must read off the lattice coordinates exactly
    for variant in ("la", "su"):
        for w in perms(4):
            upper, lower = hourglass(w, variant)
            closure = shift_lattice(w, variant).faces()
            assert {(s, t) for s in upper for t in lower} == {
                (f.sigma, f.tau) for f in closure
            }


def test_hourglass_products_sum_to_facet_count():
    for n in (2, 3, 4):
        for variant in ("la", "su"):
            total = sum(
                len(u) * len(l)
                for u, l in (hourglass(w, variant) for w in perms(n))
            )
            assert total == 2 * (n + 1) ** (n - 2)


def test_hourglass_facet_route():
    from permadiag.diagonal import make_face

    for n in (2, 3, 4):
        for variant in ("la", "su"):
            seen = set()
            for w in perms(n):
                upper, lower = hourglass(w, variant)
                for s in upper:
                    for t in lower:
                        f = make_face(s, t)
                        assert f not in seen
                        seen.add(f)
            assert seen == facets(n, variant)


def test_hourglass_respects_cap():
    with pytest.raises(CapExceeded):
        hourglass(tuple(range(1, CUBICAL_CAP + 3)))


# ---------------------------------------------------------------------------
# step matrices


def test_step_matrix_pinned():
    m = step_matrix((6, 5, 2, 4, 7, 1, 3))
    assert m.rows == ((6, 0, 0, 0), (5, 0, 0, 0), (2, 4, 7, 0), (0, 0, 1, 3))
    assert m.sigma == OP("256|4|17|3")
    assert m.tau == OP("6|5|247|13")
    assert m.render() == "\n".join(
        [". . 1 3", "2 4 7 .", "5 . . .", "6 . . ."]
    )


def test_step_matrix_of_monotone_words():
    assert step_matrix((1, 2, 3)).rows == ((1, 2, 3),)
    assert step_matrix((3, 2, 1)).rows == ((3,), (2,), (1,))


def test_step_matrix_validates():
    with pytest.raises(ValueError, match="not a permutation"):
        step_matrix((1, 3))


@given(st.permutations(range(1, 8)))
def test_step_matrix_reads_off_the_strong_pair(w):
    m = step_matrix(tuple(w))
    assert m.face == scp_from_perm(tuple(w)).face
    assert m.height + m.width == len(w) + 1


def test_matrix_shift_pinned_sequence():
    m = step_matrix((6, 5, 2, 4, 7, 1, 3))
    r56 = ShiftOp("right", frozenset({5, 6}), 1, 1, "block", "su")
    l7 = ShiftOp("left", frozenset({7}), 3, 1, "block", "su")
    r7 = ShiftOp("right", frozenset({7}), 3, 1, "block", "su")
    m1 = matrix_shift(m, r56)
    assert m1.rows == ((0, 6, 0, 0), (0, 5, 0, 0), (2, 4, 7, 0), (0, 0, 1, 3))
    m2 = matrix_shift(m1, l7)
    assert m2.rows == ((0, 6, 0, 0), (0, 5, 7, 0), (2, 4, 0, 0), (0, 0, 1, 3))
    m3 = matrix_shift(m2, r7)
    assert m3.rows == ((0, 6, 0, 0), (0, 5, 0, 7), (2, 4, 0, 0), (0, 0, 1, 3))
    # the two commuting moves may be applied in either order
    assert matrix_shift(matrix_shift(m1, r7), l7) == m3


def test_matrix_shift_keeps_the_untouched_row():
    m = step_matrix((6, 5, 2, 4, 7, 1, 3))
    moved = matrix_shift(m, ShiftOp("right", frozenset({5, 6}), 1, 1, "block", "su"))
    assert moved.tau == m.tau
    assert moved.sigma == OP("2|456|17|3")


def test_matrix_shift_validation_errors():
    m = step_matrix((6, 5, 2, 4, 7, 1, 3))

    def op(side, subset, block, distance=1, variant="su"):
        return ShiftOp(side, frozenset(subset), block, distance, "block", variant)

    with pytest.raises(ValueError, match="unknown variant"):
        matrix_shift(m, op("right", {7}, 3, variant="up"))
    with pytest.raises(ValueError, match="side"):
        matrix_shift(m, ShiftOp("down", frozenset({7}), 3, 1, "block", "su"))
    with pytest.raises(ValueError, match="single step"):
        matrix_shift(m, op("right", {7}, 3, distance=2))
    with pytest.raises(ValueError, match=r"no block 9 in sigma \(has 4\)"):
        matrix_shift(m, op("right", {3}, 9))
    with pytest.raises(ValueError, match="leaves the partition"):
        matrix_shift(m, op("right", {3}, 4))
    with pytest.raises(ValueError, match="leaves the partition"):
        matrix_shift(m, op("left", {6}, 1, variant="su"))
    with pytest.raises(ValueError, match="empty shift subset"):
        matrix_shift(m, op("right", set(), 1))
    with pytest.raises(ValueError, match="not inside block 1"):
        matrix_shift(m, op("right", {9}, 1))
    with pytest.raises(ValueError, match="would empty block 2"):
        matrix_shift(m, op("right", {4}, 2))
    with pytest.raises(ValueError, match="leave the minimum of block 1 behind"):
        matrix_shift(m, op("right", {2, 5}, 1))
    with pytest.raises(ValueError, match="min of \\[3\\] is 3"):
        matrix_shift(m, op("left", {3}, 4))


def test_matrix_shift_la_obstacle_wording():
    m = step_matrix((1, 3, 2))
    bad = ShiftOp("left", frozenset({2}), 2, 1, "block", "la")
    with pytest.raises(ValueError, match="max of \\[2\\] is 2"):
        matrix_shift(m, bad)


def test_matrix_shift_collision_is_an_internal_error():
    # grid is not reachable from any word, so the admissible move collides
    crafted = StepMatrix(((1, 0), (3, 2)))
    admissible = ShiftOp("left", frozenset({3}), 2, 1, "block", "su")
    with pytest.raises(AssertionError, match="collision"):
        matrix_shift(crafted, admissible)


# ---------------------------------------------------------------------------
# configuration matrices


def test_configuration_matrix_counts():
    assert len(configuration_matrices(4, "su")) == 50
    assert len(configuration_matrices(4, "la")) == 50
    assert len(configuration_matrices(5, "su")) == 432


def test_configuration_matrices_read_off_all_facets():
    for n in (1, 2, 3, 4):
        for variant in ("la", "su"):
            grids = configuration_matrices(n, variant)
            faces = {g.matrix.face for g in grids}
            assert len(faces) == len(grids)
            assert faces == facets(n, variant)
            assert faces == set(facets_via_shifts(n, variant))


def test_configuration_matrices_replay_their_ops():
    for variant in ("la", "su"):
        for g in configuration_matrices(4, variant):
            m = step_matrix(g.source)
            for op in g.ops:
                assert op.mode == "block" and op.variant == variant
                m = matrix_shift(m, op)
            assert m == g.matrix
            assert g.render() == g.matrix.render()


def test_configuration_matrices_respect_cap():
    with pytest.raises(CapExceeded):
        configuration_matrices(8, "su", cap=7)
