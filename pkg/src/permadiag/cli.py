"""Command line front end: listings, frozen-table verification, SVG plots.

Every data command renders one deterministic table in json, csv, or
plain text.  The verify command replays the enumerative results against
golden tables committed with the package and exits nonzero on any
mismatch; it never recomputes a golden value.  Plot targets emit
self-contained SVG documents.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from importlib import resources
from typing import NamedTuple

from .arrangement import (
    TranslationMatrix,
    alternate_matrix,
    bounded_region_count,
    char_poly,
    default_matrix,
    enumerate_faces,
    f_polynomial,
    face_vector,
    mobius_polynomial,
    region_count,
    vertex_count,
)
from .core import (
    parse_ordered_partition,
    parse_perm,
    render_ordered_partition,
    render_perm,
)
from .cubic import (
    build_cubical,
    configuration_matrices,
    dyadic_value,
    hourglass,
    step_matrix,
)
from .diagonal import (
    VARIANTS,
    cellular_image,
    bigraded_counts,
    facets,
    generate_patterns,
    iso_r,
    iso_s,
    iso_t,
    la_ordering,
    make_face,
    variant_ordering,
    vertex_pairs,
)
from .forests import CapExceeded, enumerate_trees
from .rainbow import prufer_decode
from .shifts import (
    apply_shift,
    lattice_size_sum,
    normalize_to_scp,
    scp_closure,
    scp_from_perm,
    shift_lattice,
)

TABLE_SCHEMA = "permadiag.table/1"


def thread_count(flag=None) -> int:
    """Worker count: flag, then PERMADIAG_THREADS, then a small default."""
    if flag:
        return max(1, flag)
    env = os.environ.get("PERMADIAG_THREADS")
    if env:
        return max(1, int(env))
    return min(4, os.cpu_count() or 1)


# ---------------------------------------------------------------------------
# table rendering


class Table(NamedTuple):
    kind: str
    params: dict
    header: tuple
    rows: list


def render_table(table: Table, fmt: str) -> str:
    if fmt == "json":
        doc = {
            "schema": TABLE_SCHEMA,
            "kind": table.kind,
            "params": table.params,
            "header": list(table.header),
            "rows": [list(r) for r in table.rows],
        }
        return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"
    if fmt == "csv":
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(table.header)
        w.writerows(table.rows)
        return out.getvalue()
    if fmt == "text":
        lines = []
        if table.params:
            pairs = " ".join(
                "%s=%s" % (k, table.params[k]) for k in sorted(table.params)
            )
            lines.append("# %s %s" % (table.kind, pairs))
        else:
            lines.append("# %s" % table.kind)
        cells = [tuple(str(x) for x in r) for r in table.rows]
        widths = [
            max([len(h)] + [len(r[i]) for r in cells])
            for i, h in enumerate(table.header)
        ]
        lines.append(
            "  ".join(h.ljust(w) for h, w in zip(table.header, widths)).rstrip()
        )
        for r in cells:
            lines.append("  ".join(x.ljust(w) for x, w in zip(r, widths)).rstrip())
        return "\n".join(lines) + "\n"
    raise ValueError("unknown format %r" % (fmt,))


def _frac_text(value: Fraction) -> str:
    return str(value)


def _box_text(box) -> str:
    parts = []
    for lo, hi in box:
        a, b = dyadic_value(lo), dyadic_value(hi)
        parts.append(_frac_text(a) if a == b else "%s..%s" % (a, b))
    return " x ".join(parts) if parts else "point"


# ---------------------------------------------------------------------------
# data commands


def _load_matrix(path: str) -> TranslationMatrix:
    with open(path) as fh:
        rows = json.load(fh)
    return TranslationMatrix(rows)


def _cap_kwargs(args) -> dict:
    return {"cap": args.cap} if getattr(args, "cap", None) is not None else {}


def cmd_arrangement(args) -> Table:
    ell, n = args.ell, args.n
    if args.action == "mobius":
        poly = mobius_polynomial(ell, n)
        return Table(
            "arrangement.mobius",
            {"ell": ell, "n": n},
            ("polynomial",),
            [(poly.render(),)],
        )
    if args.action == "fvec":
        if args.matrix:
            a = _load_matrix(args.matrix)
            counts = face_vector(ell, n, a, **_cap_kwargs(args))
        else:
            counts = f_polynomial(ell, n).coefficient_vector()
        rows = [(d, c) for d, c in enumerate(counts)]
        rows.append(("total", sum(counts)))
        return Table(
            "arrangement.fvec", {"ell": ell, "n": n}, ("dim", "count"), rows
        )
    if args.action == "count":
        return Table(
            "arrangement.count",
            {"ell": ell, "n": n},
            ("quantity", "value"),
            [
                ("regions", region_count(ell, n)),
                ("bounded", bounded_region_count(ell, n)),
                ("vertices", vertex_count(ell, n)),
            ],
        )
    if args.action == "faces":
        a = _load_matrix(args.matrix) if args.matrix else default_matrix(ell, n)
        faces = enumerate_faces(ell, n, a, **_cap_kwargs(args))
        rows = [(of.dim, of.render()) for of in faces]
        return Table(
            "arrangement.faces", {"ell": ell, "n": n}, ("dim", "face"), rows
        )
    raise ValueError("unknown action %r" % (args.action,))


def cmd_diagonal(args) -> Table:
    n, variant = args.n, args.variant
    if args.action == "faces":
        image = cellular_image(n, variant_ordering(variant, n), **_cap_kwargs(args))
        rows = sorted(
            (f.dim, f.dim_sigma, f.dim_tau, render_ordered_partition(f.sigma),
             render_ordered_partition(f.tau))
            for f in image
        )
        return Table(
            "diagonal.faces",
            {"n": n, "variant": variant},
            ("dim", "dim_sigma", "dim_tau", "sigma", "tau"),
            rows,
        )
    if args.action == "facets":
        rows = sorted(
            (render_ordered_partition(f.sigma), render_ordered_partition(f.tau))
            for f in facets(n, variant, **_cap_kwargs(args))
        )
        return Table(
            "diagonal.facets", {"n": n, "variant": variant}, ("sigma", "tau"), rows
        )
    if args.action == "vertices":
        rows = sorted(
            (render_perm(u), render_perm(v))
            for u, v in vertex_pairs(n, variant, **_cap_kwargs(args))
        )
        return Table(
            "diagonal.vertices", {"n": n, "variant": variant}, ("sigma", "tau"), rows
        )
    if args.action == "patterns":
        rows = [
            (p.k, render_perm(p.first), render_perm(p.second))
            for p in generate_patterns(n, variant)
        ]
        return Table(
            "diagonal.patterns",
            {"k": n, "variant": variant},
            ("k", "first", "second"),
            sorted(rows),
        )
    raise ValueError("unknown action %r" % (args.action,))


def cmd_shifts(args) -> Table:
    variant = args.variant
    if args.action == "lattice":
        w = parse_perm(args.perm)
        lattice = shift_lattice(w, variant)
        h = lattice.heights
        rows = []
        for face in sorted(lattice.faces()):
            left, right = lattice.coordinate(face)
            rows.append(
                (" ".join(map(str, left)), " ".join(map(str, right)),
                 render_ordered_partition(face.sigma),
                 render_ordered_partition(face.tau))
            )
        rows.sort()
        return Table(
            "shifts.lattice",
            {
                "perm": render_perm(w),
                "variant": variant,
                "left_heights": " ".join(map(str, h.left)),
                "right_heights": " ".join(map(str, h.right)),
                "size": h.lattice_size,
            },
            ("left", "right", "sigma", "tau"),
            rows,
        )
    if args.action == "normalize":
        if args.face:
            sigma_text, tau_text = args.face.split(";")
            face = make_face(
                parse_ordered_partition(sigma_text.strip()),
                parse_ordered_partition(tau_text.strip()),
            )
            scp, trace = normalize_to_scp(face, variant)
        elif args.perm:
            scp, trace = scp_from_perm(parse_perm(args.perm)), []
        else:
            raise ValueError("normalize needs --face or --perm")
        rows = [
            ("word", render_perm(scp.source)),
            ("sigma", render_ordered_partition(scp.sigma)),
            ("tau", render_ordered_partition(scp.tau)),
        ]
        for k, op in enumerate(trace, start=1):
            rows.append(("op%d" % k, op.render()))
        return Table(
            "shifts.normalize", {"variant": variant}, ("field", "value"), rows
        )
    if args.action == "closure":
        w = parse_perm(args.perm)
        found = scp_closure(w, variant, args.mode)
        rows = sorted(
            (render_ordered_partition(f.sigma), render_ordered_partition(f.tau))
            for f in found
        )
        return Table(
            "shifts.closure",
            {"perm": render_perm(w), "variant": variant, "mode": args.mode,
             "size": len(rows)},
            ("sigma", "tau"),
            rows,
        )
    raise ValueError("unknown action %r" % (args.action,))


def cmd_cubic(args) -> Table:
    variant = args.variant
    if args.action == "build":
        complex_ = build_cubical(args.n, variant, **_cap_kwargs(args))
        rows = sorted(
            (complex_.dimension(f), render_ordered_partition(f),
             _box_text(complex_.box(f)))
            for f in complex_
        )
        return Table(
            "cubic.build",
            {"n": args.n, "variant": variant},
            ("dim", "face", "box"),
            rows,
        )
    if args.action == "hourglass":
        w = parse_perm(args.perm)
        upper, lower = hourglass(w, variant)
        rows = [("upper", render_ordered_partition(f)) for f in sorted(upper)]
        rows += [("lower", render_ordered_partition(f)) for f in sorted(lower)]
        return Table(
            "cubic.hourglass",
            {"perm": render_perm(w), "variant": variant,
             "upper_size": len(upper), "lower_size": len(lower)},
            ("half", "face"),
            rows,
        )
    if args.action == "stepmatrix":
        w = parse_perm(args.perm)
        m = step_matrix(w)
        rows = [
            ("row%d" % i, " ".join(str(x) for x in row))
            for i, row in enumerate(reversed(m.rows), start=1)
        ]
        rows.append(("sigma", render_ordered_partition(m.sigma)))
        rows.append(("tau", render_ordered_partition(m.tau)))
        return Table(
            "cubic.stepmatrix",
            {"perm": render_perm(w), "height": m.height, "width": m.width},
            ("field", "value"),
            rows,
        )
    raise ValueError("unknown action %r" % (args.action,))


# ---------------------------------------------------------------------------
# SVG plots

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _svg_document(width, height, body) -> str:
    head = (
        '<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d" '
        'viewBox="0 0 %d %d" font-family="monospace" font-size="11">'
        % (width, height, width, height)
    )
    return head + "\n" + "\n".join(body) + "\n</svg>\n"


def svg_arrangement2d(a: TranslationMatrix = None, ell: int = 2, n: int = 3,
                      size: int = 480) -> str:
    """The n=3 family drawn in the plane, lines colored by copy.

    Coordinates are u = x1 - x2 and v = x2 - x3; every hyperplane becomes
    the line u = c, v = c, or u + v = c with c the exact copy offset.
    """
    if n != 3:
        raise ValueError("the planar drawing needs n = 3")
    if a is None:
        a = default_matrix(ell, 3)
    if a.n != 3 or a.ell != ell:
        raise ValueError("matrix shape does not match the family")
    coeffs = {(1, 2): (1, 0), (2, 3): (0, 1), (1, 3): (1, 1)}
    lines = []
    for i in range(1, ell + 1):
        for (s, t), (A, B) in sorted(coeffs.items()):
            lines.append((i, s, t, Fraction(A), Fraction(B), a.offset(i, s, t)))
    points = set()
    for (i1, s1, t1, A1, B1, C1), (i2, s2, t2, A2, B2, C2) in itertools.combinations(lines, 2):
        det = A1 * B2 - A2 * B1
        if det == 0:
            continue
        points.add(((C1 * B2 - C2 * B1) / det, (A1 * C2 - A2 * C1) / det))
    points = sorted(points)
    us = [p[0] for p in points]
    vs = [p[1] for p in points]
    margin = max((max(us) - min(us)), (max(vs) - min(vs)), Fraction(1)) / 4
    u0, u1 = min(us) - margin, max(us) + margin
    v0, v1 = min(vs) - margin, max(vs) + margin
    span = max(u1 - u0, v1 - v0)
    u1, v1 = u0 + span, v0 + span
    pad = 20
    scale = Fraction(size - 2 * pad, 1) / span

    def px(u, v):
        return (
            float(pad + (u - u0) * scale),
            float(pad + (v1 - v) * scale),
        )

    body = ['<rect x="0" y="0" width="%d" height="%d" fill="white"/>' % (size, size)]
    for i, s, t, A, B, C in lines:
        hits = set()
        if B != 0:
            for ub in (u0, u1):
                vb = (C - A * ub) / B
                if v0 <= vb <= v1:
                    hits.add((ub, vb))
        if A != 0:
            for vb in (v0, v1):
                ub = (C - B * vb) / A
                if u0 <= ub <= u1:
                    hits.add((ub, vb))
        hits = sorted(hits)
        if len(hits) < 2:
            continue
        (ua, va), (ub, vb) = hits[0], hits[-1]
        xa, ya = px(ua, va)
        xb, yb = px(ub, vb)
        color = _PALETTE[(i - 1) % len(_PALETTE)]
        body.append(
            '<line x1="%.2f" y1="%.2f" x2="%.2f" y2="%.2f" stroke="%s" '
            'stroke-width="1.5"><title>copy %d: x%d - x%d = %s</title></line>'
            % (xa, ya, xb, yb, color, i, s, t, C)
        )
    for k, (u, v) in enumerate(points, start=1):
        x, y = px(u, v)
        body.append(
            '<circle cx="%.2f" cy="%.2f" r="4" fill="black">'
            "<title>(%s, %s)</title></circle>" % (x, y, u, v)
        )
        body.append(
            '<text x="%.2f" y="%.2f" class="ptlabel">p%d</text>'
            % (x + 6, y - 6, k)
        )
    return _svg_document(size, size, body)


def _label_for(face) -> str:
    return render_ordered_partition(face)


def svg_cubical2d(variant: str = "su", size: int = 480) -> str:
    """The subdivided square with every cell labeled."""
    c = build_cubical(2, variant)
    pad = 30
    side = size - 2 * pad

    def px(u, v):
        return (
            float(pad + u * side),
            float(pad + (1 - v) * side),
        )

    body = ['<rect x="0" y="0" width="%d" height="%d" fill="white"/>' % (size, size)]
    by_label = sorted(c, key=render_ordered_partition)
    for f in by_label:
        if c.dimension(f) != 2:
            continue
        (a, b), (d, e) = [
            (dyadic_value(lo), dyadic_value(hi)) for lo, hi in c.box(f)
        ]
        x, y = px(a, e)
        w = float((b - a) * side)
        h = float((e - d) * side)
        body.append(
            '<rect x="%.2f" y="%.2f" width="%.2f" height="%.2f" '
            'fill="#eef3fb" stroke="none"/>' % (x, y, w, h)
        )
        cx, cy = px((a + b) / 2, (d + e) / 2)
        body.append(
            '<text x="%.2f" y="%.2f" text-anchor="middle" fill="#555">%s</text>'
            % (cx, cy, _label_for(f))
        )
    for f in by_label:
        if c.dimension(f) != 1:
            continue
        (a, b), (d, e) = [
            (dyadic_value(lo), dyadic_value(hi)) for lo, hi in c.box(f)
        ]
        xa, ya = px(a, d)
        xb, yb = px(b, e)
        body.append(
            '<line x1="%.2f" y1="%.2f" x2="%.2f" y2="%.2f" stroke="#333" '
            'stroke-width="1.5"/>' % (xa, ya, xb, yb)
        )
        cx, cy = px((a + b) / 2, (d + e) / 2)
        body.append(
            '<text x="%.2f" y="%.2f" text-anchor="middle" dy="-4">%s</text>'
            % (cx, cy, _label_for(f))
        )
    for f in by_label:
        if c.dimension(f) != 0:
            continue
        u, v = [dyadic_value(lo) for lo, _ in c.box(f)]
        x, y = px(u, v)
        body.append('<circle cx="%.2f" cy="%.2f" r="3.5" fill="black"/>' % (x, y))
        dx = 8 if u < 1 else -8
        anchor = "start" if u < 1 else "end"
        dy = 14 if v < 1 else -8
        body.append(
            '<text x="%.2f" y="%.2f" text-anchor="%s" font-weight="bold">%s</text>'
            % (x + dx, y + dy, anchor, _label_for(f))
        )
    return _svg_document(size, size, body)


_NET_LAYOUT = {
    (2, 1): (1, 0),
    (0, 0): (0, 1),
    (1, 0): (1, 1),
    (0, 1): (2, 1),
    (1, 1): (3, 1),
    (2, 0): (1, 2),
}


def svg_cubical3d_net(variant: str = "su", panel: int = 190) -> str:
    """The six boundary squares of the subdivided cube, unfolded and labeled."""
    c = build_cubical(3, variant)
    sides = {key: [] for key in _NET_LAYOUT}
    for f in c.faces_of_dimension(2):
        box = c.box(f)
        flats = [i for i, (lo, hi) in enumerate(box) if lo == hi]
        if len(flats) != 1:
            raise AssertionError("a square face must be flat on one axis")
        ax = flats[0]
        val = dyadic_value(box[ax][0])
        if val == 0:
            key = (ax, 0)
        elif val == 1:
            key = (ax, 1)
        else:
            continue
        others = [i for i in range(3) if i != ax]
        sides[key].append((f, box[others[0]], box[others[1]]))
    gap = 14
    pad = 24
    width = pad * 2 + 4 * panel + 3 * gap
    height = pad * 2 + 3 * panel + 2 * gap + 16
    body = ['<rect x="0" y="0" width="%d" height="%d" fill="white"/>' % (width, height)]
    for key in sorted(sides):
        col, row = _NET_LAYOUT[key]
        ox = pad + col * (panel + gap)
        oy = pad + row * (panel + gap)
        body.append(
            '<rect x="%d" y="%d" width="%d" height="%d" fill="none" '
            'stroke="#333" stroke-width="1.5"/>' % (ox, oy, panel, panel)
        )
        body.append(
            '<text x="%d" y="%d" fill="#777">axis %d = %d</text>'
            % (ox, oy - 5, key[0] + 1, key[1])
        )
        for f, iu, iv in sorted(sides[key], key=lambda item: render_ordered_partition(item[0])):
            a, b = dyadic_value(iu[0]), dyadic_value(iu[1])
            d, e = dyadic_value(iv[0]), dyadic_value(iv[1])
            x = ox + float(a * panel)
            y = oy + float((1 - e) * panel)
            w = float((b - a) * panel)
            h = float((e - d) * panel)
            body.append(
                '<rect x="%.2f" y="%.2f" width="%.2f" height="%.2f" '
                'fill="#eef3fb" stroke="#666" stroke-width="0.75"/>' % (x, y, w, h)
            )
            body.append(
                '<text x="%.2f" y="%.2f" text-anchor="middle" font-size="9">%s</text>'
                % (x + w / 2, y + h / 2, _label_for(f))
            )
    return _svg_document(width, height, body)


def cmd_plot(args) -> str:
    if args.target == "arrangement2d":
        a = _load_matrix(args.matrix) if args.matrix else None
        return svg_arrangement2d(a, ell=args.ell, n=args.n)
    if args.target == "cubical2d":
        return svg_cubical2d(args.variant)
    if args.target == "cubical3d-net":
        return svg_cubical3d_net(args.variant)
    raise ValueError("unknown plot target %r" % (args.target,))


# ---------------------------------------------------------------------------
# the verification harness


class Check(NamedTuple):
    ident: str
    suite: str
    level: str
    source: str
    fn: object


def _golden(name: str) -> list:
    path = resources.files(__package__) / "goldens" / name
    with path.open(newline="") as fh:
        return list(csv.DictReader(fh))


def _facet_golden() -> dict:
    return {int(r["n"]): int(r["count"]) for r in _golden("facet_counts.csv")}


def check_mobius_displays():
    rows = _golden("mobius_polynomials.csv")
    return [
        ("n=%s" % r["n"], r["polynomial"], mobius_polynomial(2, int(r["n"])).render())
        for r in rows
    ]


def check_region_table():
    out = []
    for r in _golden("region_counts.csv"):
        n = int(r["n"])
        rank = n - 1
        chi = char_poly(2, n)
        out.append(("regions n=%d" % n, int(r["regions"]), region_count(2, n)))
        out.append(("bounded n=%d" % n, int(r["bounded"]), bounded_region_count(2, n)))
        out.append(
            ("regions via evaluation n=%d" % n, int(r["regions"]),
             (-1) ** rank * chi(-1))
        )
        out.append(
            ("bounded via evaluation n=%d" % n, int(r["bounded"]),
             (-1) ** rank * chi(1))
        )
    return out


def _prufer_image_count(ell: int, n: int) -> int:
    good = 0
    for word in itertools.product(
        itertools.product(range(1, n + 1), range(1, ell + 1)), repeat=n - 1
    ):
        try:
            prufer_decode(word, ell, n)
        except ValueError:
            continue
        good += 1
    return good


def _vertex_checks(max_n: int, min_n: int = 2):
    out = []
    for r in _golden("vertex_counts.csv"):
        ell, n, want = int(r["ell"]), int(r["n"]), int(r["count"])
        if not min_n <= n <= max_n:
            continue
        out.append(("closed form ell=%d n=%d" % (ell, n), want, vertex_count(ell, n)))
        out.append(
            ("tree enumeration ell=%d n=%d" % (ell, n), want,
             sum(1 for _ in enumerate_trees(ell, n)))
        )
        out.append(
            ("code image ell=%d n=%d" % (ell, n), want, _prufer_image_count(ell, n))
        )
    return out


def check_vertices_fast():
    return _vertex_checks(4)


def check_vertices_deep():
    return _vertex_checks(5, min_n=5)


def _strata_golden():
    table = {}
    for r in _golden("face_strata.csv"):
        table.setdefault(int(r["n"]), {})[int(r["dim"])] = int(r["count"])
    return {n: tuple(v[d] for d in sorted(v)) for n, v in table.items()}


def check_face_strata_fast():
    table = _strata_golden()
    out = []
    for n in (3, 4):
        got = face_vector(2, n, default_matrix(2, n))
        out.append(("strata n=%d" % n, table[n], got))
    return out


def check_face_strata_deep():
    table = _strata_golden()
    out = []
    for n in (3, 4):
        got = face_vector(2, n, alternate_matrix(2, n))
        out.append(("strata, second matrix, n=%d" % n, table[n], got))
    for n in (5, 6):
        got = f_polynomial(2, n).coefficient_vector()
        out.append(("strata via evaluation n=%d" % n, table[n], got))
    return out


def _facet_count_checks(ns):
    table = _facet_golden()
    out = []
    for n in ns:
        for variant in ("la", "su"):
            out.append(
                ("facets n=%d %s" % (n, variant), table[n], len(facets(n, variant)))
            )
    return out


def check_facet_counts_fast():
    return _facet_count_checks(range(1, 6))


def check_facet_counts_deep():
    out = _facet_count_checks((6, 7))
    table = _facet_golden()
    from .shifts import facets_via_shifts

    out.append(
        ("facets n=7 su, one-step path route", table[7],
         len(facets_via_shifts(7, "su", "path1")))
    )
    return out


def _bigraded_golden():
    table = {}
    for r in _golden("bigraded_counts.csv"):
        table.setdefault(int(r["n"]), {})[(int(r["p"]), int(r["q"]))] = int(r["count"])
    return table


def _bigraded_checks(ns, threads=None):
    table = _bigraded_golden()
    out = []
    for n in ns:
        got = bigraded_counts(n, la_ordering(n), threads=threads)
        out.append(("bigraded n=%d" % n, table[n], got))
    return out


def check_bigraded_fast():
    return _bigraded_checks(range(1, 5))


def check_bigraded_deep():
    return _bigraded_checks((5, 6), threads=thread_count())


def check_pattern_counts():
    out = []
    for r in _golden("pattern_counts.csv"):
        k, want = int(r["k"]), int(r["count"])
        for variant in ("la", "su"):
            out.append(
                ("patterns k=%d %s" % (k, variant), want,
                 len(generate_patterns(k, variant)))
            )
    return out


def check_isomorphisms():
    out = []
    for n in (2, 3, 4):
        la = facets(n, "la")
        su = facets(n, "su")
        image = {iso_t(iso_r(f)) for f in la}
        out.append(("conjugation carries la onto su, n=%d" % n, True, image == su))
    sample = sorted(facets(4, "la"))
    out.append(
        ("involutions square to the identity",
         True,
         all(
             iso_s(iso_s(f)) == f and iso_r(iso_r(f)) == f and iso_t(iso_t(f)) == f
             for f in sample
         ))
    )
    return out


def _lattice_product_checks(ns):
    table = _facet_golden()
    out = []
    for n in ns:
        for variant in ("la", "su"):
            total = 0
            seen = set()
            products_match = True
            for w in itertools.permutations(range(1, n + 1)):
                lattice = shift_lattice(w, variant)
                faces = lattice.faces()
                if len(faces) != lattice.heights.lattice_size:
                    products_match = False
                total += len(faces)
                seen.update(faces)
            out.append(
                ("chain products n=%d %s" % (n, variant), True, products_match)
            )
            out.append(("disjoint union n=%d %s" % (n, variant), table[n], total))
            out.append(
                ("union covers the facets n=%d %s" % (n, variant), table[n], len(seen))
            )
    return out


def check_lattice_products_fast():
    return _lattice_product_checks((2, 3, 4))


def check_lattice_products_deep():
    return _lattice_product_checks((5, 6))


def _statistics_checks(ns):
    table = _facet_golden()
    out = []
    for n in ns:
        for variant in ("la", "su"):
            out.append(
                ("size sum n=%d %s" % (n, variant), table[n],
                 lattice_size_sum(n, variant))
            )
    return out


def check_statistics_fast():
    return _statistics_checks(range(2, 6))


def check_statistics_deep():
    return _statistics_checks((6, 7))


def check_normalization_roundtrip():
    out = []
    for variant in ("la", "su"):
        ok = True
        for f in sorted(facets(4, variant)):
            scp, trace = normalize_to_scp(f, variant)
            rebuilt = scp.face
            for op in trace:
                rebuilt = apply_shift(rebuilt, op)
            if rebuilt != f:
                ok = False
        out.append(("normalize and replay, n=4 %s" % variant, True, ok))
    return out


def _order_refines(fine, coarse) -> bool:
    it = iter(fine)
    for block in coarse:
        need = set(block)
        while need:
            nxt = next(it, None)
            if nxt is None or not set(nxt) <= need:
                return False
            need.difference_update(nxt)
    return next(it, None) is None


def _poset_checks(ns):
    out = []
    for n in ns:
        for variant in ("la", "su"):
            c = build_cubical(n, variant)
            labels = list(c)
            values = {
                f: tuple(
                    (dyadic_value(lo), dyadic_value(hi)) for lo, hi in c.box(f)
                )
                for f in labels
            }
            ok = True
            for f in labels:
                bf = values[f]
                for g in labels:
                    bg = values[g]
                    geometric = all(
                        a <= p and q <= b for (a, b), (p, q) in zip(bg, bf)
                    )
                    if geometric != _order_refines(f, g):
                        ok = False
            out.append(("poset agreement n=%d %s" % (n, variant), True, ok))
    return out


def check_cubical_poset_fast():
    return _poset_checks((1, 2, 3))


def check_cubical_poset_deep():
    return _poset_checks((4,))


def _hourglass_checks(ns):
    table = _facet_golden()
    out = []
    for n in ns:
        for variant in ("la", "su"):
            total = sum(
                len(u) * len(l)
                for u, l in (
                    hourglass(w, variant)
                    for w in itertools.permutations(range(1, n + 1))
                )
            )
            out.append(("hourglass products n=%d %s" % (n, variant), table[n], total))
    return out


def check_hourglass_fast():
    return _hourglass_checks((2, 3, 4))


def check_hourglass_deep():
    return _hourglass_checks((5,))


def _matrix_checks(ns):
    table = _facet_golden()
    out = []
    for n in ns:
        for variant in ("la", "su"):
            grids = configuration_matrices(n, variant)
            out.append(("grid count n=%d %s" % (n, variant), table[n], len(grids)))
            readoff = {g.matrix.face for g in grids}
            out.append(
                ("grid read-off n=%d %s" % (n, variant), True,
                 readoff == facets(n, variant))
            )
    return out


def check_matrices_fast():
    return _matrix_checks((2, 3, 4))


def check_matrices_deep():
    return _matrix_checks((5,))


CHECKS = (
    Check("arr-01-mobius", "arrangement", "fast", "published:mobius-display",
          check_mobius_displays),
    Check("arr-02-regions", "arrangement", "fast", "published:region-table",
          check_region_table),
    Check("arr-03-vertices", "arrangement", "fast", "published:vertex-table",
          check_vertices_fast),
    Check("arr-03b-vertices-n5", "arrangement", "full", "published:vertex-table",
          check_vertices_deep),
    Check("arr-04-strata", "arrangement", "fast", "derived:two-route",
          check_face_strata_fast),
    Check("arr-04b-strata-deep", "arrangement", "full", "derived:zaslavsky",
          check_face_strata_deep),
    Check("dia-01-facets", "diagonal", "fast", "published:facet-table",
          check_facet_counts_fast),
    Check("dia-01b-facets-n7", "diagonal", "full", "published:facet-table",
          check_facet_counts_deep),
    Check("dia-02-bigraded", "diagonal", "fast", "published:bigraded-table",
          check_bigraded_fast),
    Check("dia-02b-bigraded-n6", "diagonal", "full", "published:bigraded-table",
          check_bigraded_deep),
    Check("dia-03-patterns", "diagonal", "fast", "published:pattern-count-formula",
          check_pattern_counts),
    Check("dia-04-isomorphisms", "diagonal", "fast", "derived:involutions",
          check_isomorphisms),
    Check("shi-01-lattices", "shifts", "fast", "published:facet-table",
          check_lattice_products_fast),
    Check("shi-01b-lattices-n6", "shifts", "full", "published:facet-table",
          check_lattice_products_deep),
    Check("shi-02-statistics", "shifts", "fast", "published:facet-table",
          check_statistics_fast),
    Check("shi-02b-statistics-n7", "shifts", "full", "published:facet-table",
          check_statistics_deep),
    Check("shi-03-normalize", "shifts", "fast", "derived:roundtrip",
          check_normalization_roundtrip),
    Check("cub-01-poset", "cubic", "fast", "derived:refinement-order",
          check_cubical_poset_fast),
    Check("cub-01b-poset-n4", "cubic", "full", "derived:refinement-order",
          check_cubical_poset_deep),
    Check("cub-02-hourglass", "cubic", "fast", "published:facet-table",
          check_hourglass_fast),
    Check("cub-02b-hourglass-n5", "cubic", "full", "published:facet-table",
          check_hourglass_deep),
    Check("cub-03-matrices", "cubic", "fast", "published:facet-table",
          check_matrices_fast),
    Check("cub-03b-matrices-n5", "cubic", "full", "published:facet-table",
          check_matrices_deep),
)

SUITES = ("arrangement", "diagonal", "shifts", "cubic", "all")


def _run_check(check: Check):
    try:
        return check.fn(), None
    except Exception as exc:
        return [], "%s: %s" % (type(exc).__name__, exc)


def run_verify(suite: str, level: str, threads=None, out=None) -> int:
    out = out or sys.stdout
    selected = [
        c for c in CHECKS
        if (suite == "all" or c.suite == suite)
        and (level == "full" or c.level == "fast")
    ]
    results = {}
    with ThreadPoolExecutor(max_workers=thread_count(threads)) as pool:
        futures = {c.ident: pool.submit(_run_check, c) for c in selected}
        for ident, future in futures.items():
            results[ident] = future.result()
    failures = 0
    for check in sorted(selected, key=lambda c: c.ident):
        triples, error = results[check.ident]
        if error is not None:
            failures += 1
            out.write("FAIL %s [%s] %s\n" % (check.ident, check.source, error))
            continue
        bad = [(lab, e, g) for lab, e, g in triples if e != g]
        if bad:
            failures += 1
            out.write(
                "FAIL %s [%s] %d of %d values mismatch\n"
                % (check.ident, check.source, len(bad), len(triples))
            )
            for lab, e, g in bad:
                out.write("     %s: expected %s, got %s\n" % (lab, e, g))
        else:
            out.write(
                "PASS %s [%s] %d values\n"
                % (check.ident, check.source, len(triples))
            )
    if failures:
        out.write("FAILED %d of %d checks (suite=%s level=%s)\n"
                  % (failures, len(selected), suite, level))
        return 1
    out.write("ok %d checks (suite=%s level=%s)\n" % (len(selected), suite, level))
    return 0


# ---------------------------------------------------------------------------
# parser and entry point


def _add_format(p):
    p.add_argument("--format", choices=("json", "csv", "text"), default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="permadiag",
        description="Exact counts, listings, and checks for braid arrangement "
        "faces and the two cellular diagonals of permutahedra.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("arrangement", help="face counts of translated braid copies")
    p.add_argument("action", choices=("mobius", "fvec", "count", "faces"))
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--matrix", help="JSON file with rows of exact offsets")
    p.add_argument("--cap", type=int, help="enumeration budget override")
    _add_format(p)

    p = sub.add_parser("diagonal", help="cellular image faces, facets, patterns")
    p.add_argument("action", choices=("faces", "facets", "vertices", "patterns"))
    p.add_argument("--n", type=int, required=True, help="size, or k for patterns")
    p.add_argument("--variant", choices=VARIANTS, default="la")
    p.add_argument("--cap", type=int, help="size cap override")
    _add_format(p)

    p = sub.add_parser("shifts", help="shift lattices and facet normalization")
    p.add_argument("action", choices=("lattice", "normalize", "closure"))
    p.add_argument("--variant", choices=("la", "su"), default="su")
    p.add_argument("--perm", help='a permutation, e.g. "3|1|2" or "312"')
    p.add_argument("--face", help='a facet pair "sigma ; tau"')
    p.add_argument("--mode", choices=("block1", "path1", "pathm"), default="block1")
    _add_format(p)

    p = sub.add_parser("cubic", help="cubical models, hourglasses, grids")
    p.add_argument("action", choices=("build", "hourglass", "stepmatrix"))
    p.add_argument("--n", type=int, help="dimension of the model")
    p.add_argument("--variant", choices=("la", "su"), default="su")
    p.add_argument("--perm", help="vertex permutation for hourglass/stepmatrix")
    p.add_argument("--cap", type=int, help="dimension cap override")
    _add_format(p)

    p = sub.add_parser("plot", help="static SVG drawings")
    p.add_argument("target", choices=("arrangement2d", "cubical2d", "cubical3d-net"))
    p.add_argument("--ell", type=int, default=2)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--variant", choices=("la", "su"), default="su")
    p.add_argument("--matrix", help="JSON file with rows of exact offsets")
    p.add_argument("--out", help="write the SVG here instead of stdout")

    p = sub.add_parser("verify", help="replay results against the golden tables")
    p.add_argument("--suite", choices=SUITES, default="all")
    p.add_argument("--level", choices=("fast", "full"), default="fast")
    p.add_argument("--threads", type=int)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return run_verify(args.suite, args.level, args.threads)
        if args.command == "plot":
            svg = cmd_plot(args)
            if args.out:
                with open(args.out, "w") as fh:
                    fh.write(svg)
            else:
                sys.stdout.write(svg)
            return 0
        handler = {
            "arrangement": cmd_arrangement,
            "diagonal": cmd_diagonal,
            "shifts": cmd_shifts,
            "cubic": cmd_cubic,
        }[args.command]
        table = handler(args)
        sys.stdout.write(render_table(table, args.format))
        return 0
    except (ValueError, CapExceeded, OSError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
