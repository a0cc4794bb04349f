"""Independent test oracles.

These deliberately avoid the library's relate/evaluate code paths: the
rectangle DE-9IM oracle classifies sample points with plain interval
arithmetic, and the query oracle is a nested-loop join over a raw triple
list.
"""

from __future__ import annotations

import itertools

INTERIOR, BOUNDARY, EXTERIOR = "I", "B", "E"


def classify_rect(rect, x, y) -> str:
    x0, y0, x1, y1 = rect
    if x0 < x < x1 and y0 < y < y1:
        return INTERIOR
    on_vertical = x in (x0, x1) and y0 <= y <= y1
    on_horizontal = y in (y0, y1) and x0 <= x <= x1
    if on_vertical or on_horizontal:
        return BOUNDARY
    return EXTERIOR


def _sample_points(a, b):
    xs = sorted({a[0], a[2], b[0], b[2]})
    ys = sorted({a[1], a[3], b[1], b[3]})
    span = max(xs[-1] - xs[0], ys[-1] - ys[0], 1.0)
    crit_x = set(xs) | {xs[0] - span, xs[-1] + span}
    crit_y = set(ys) | {ys[0] - span, ys[-1] + span}
    for lo, hi in zip(xs, xs[1:]):
        crit_x.add((lo + hi) / 2.0)
    for lo, hi in zip(ys, ys[1:]):
        crit_y.add((lo + hi) / 2.0)
    pts = set(itertools.product(crit_x, crit_y))
    # Dense grid over the union bbox (edge samples included via the
    # critical coordinates above).
    gx0, gx1 = xs[0] - 0.1, xs[-1] + 0.1
    gy0, gy1 = ys[0] - 0.1, ys[-1] + 0.1
    for i in range(201):
        for j in range(201):
            pts.add((gx0 + (gx1 - gx0) * i / 200.0,
                     gy0 + (gy1 - gy0) * j / 200.0))
    return pts


def _edges(rect):
    x0, y0, x1, y1 = rect
    return [
        ("h", y0, x0, x1), ("h", y1, x0, x1),
        ("v", x0, y0, y1), ("v", x1, y0, y1),
    ]


def _boundary_contact(a, b):
    """(shares a 1D segment, shares at least a point) of the two outlines."""
    shared_seg = False
    touch = False
    for ea, eb in itertools.product(_edges(a), _edges(b)):
        if ea[0] == eb[0]:
            if ea[1] == eb[1]:
                lo = max(ea[2], eb[2])
                hi = min(ea[3], eb[3])
                if lo < hi:
                    shared_seg = True
                    touch = True
                elif lo == hi:
                    touch = True
        else:
            # Perpendicular: h (y=c, x in [p,q]) x v (x=d, y in [r,s]).
            h, v = (ea, eb) if ea[0] == "h" else (eb, ea)
            if h[2] <= v[1] <= h[3] and v[2] <= h[1] <= v[3]:
                touch = True
    return shared_seg, touch


def rect_de9im(a, b) -> str:
    """Exact DE-9IM for two axis-aligned rectangles via point sampling
    plus 1D interval checks for the boundary-boundary entry."""
    seen = set()
    for x, y in _sample_points(a, b):
        seen.add((classify_rect(a, x, y), classify_rect(b, x, y)))
    shared_seg, touch = _boundary_contact(a, b)

    def dim(pair, when_present):
        return when_present if pair in seen else "F"

    bb = "1" if shared_seg else ("0" if touch else "F")
    return "".join([
        dim((INTERIOR, INTERIOR), "2"),
        dim((INTERIOR, BOUNDARY), "1"),
        dim((INTERIOR, EXTERIOR), "2"),
        dim((BOUNDARY, INTERIOR), "1"),
        bb,
        dim((BOUNDARY, EXTERIOR), "1"),
        dim((EXTERIOR, INTERIOR), "2"),
        dim((EXTERIOR, BOUNDARY), "1"),
        "2",
    ])


def rect_predicates(a, b) -> dict:
    """The 8 Simple Features predicates, derived from the oracle matrix
    entries by their OGC definitions."""
    m = rect_de9im(a, b)
    ii, ib, ie, bi, bb, be, ei, eb = (m[k] != "F" for k in range(8))
    intersects = ii or ib or bi or bb
    return {
        "sfEquals": ii and not ie and not be and not ei and not eb,
        "sfDisjoint": not intersects,
        "sfIntersects": intersects,
        "sfTouches": intersects and not ii,
        "sfWithin": ii and not ie and not be,
        "sfContains": ii and not ei and not eb,
        "sfOverlaps": ii and ie and ei,
        "sfCrosses": False,  # undefined for areal x areal
    }


def rect_rcc8(a, b) -> str:
    m = rect_de9im(a, b)
    p = rect_predicates(a, b)
    if p["sfEquals"]:
        return "EQ"
    if p["sfDisjoint"]:
        return "DC"
    if p["sfTouches"]:
        return "EC"
    boundary_contact = m[4] != "F"
    if p["sfWithin"]:
        return "TPP" if boundary_contact else "NTPP"
    if p["sfContains"]:
        return "TPPi" if boundary_contact else "NTPPi"
    return "PO"


# ---------------------------------------------------------------------------
# Query oracle


def nested_loop_join(patterns, triples, filters=(), projection=None):
    """Reference BGP evaluation: patterns in written order, raw list scans.

    patterns: [(s, p, o)] where each slot is ('var', name) or a concrete
    term; triples: [(s, p, o)] concrete. Returns binding dict rows.
    """

    def unify(slot, value, row):
        if isinstance(slot, tuple) and slot[0] == "var":
            name = slot[1]
            if name in row:
                return row if row[name] == value else None
            new = dict(row)
            new[name] = value
            return new
        return row if slot == value else None

    rows = [{}]
    for pat in patterns:
        new_rows = []
        for row in rows:
            for t in triples:
                r = row
                ok = True
                for slot, value in zip(pat, t):
                    r = unify(slot, value, r)
                    if r is None:
                        ok = False
                        break
                if ok:
                    new_rows.append(r)
        rows = new_rows
    for fn in filters:
        rows = [r for r in rows if fn(r)]
    if projection is not None:
        rows = [{k: r[k] for k in projection if k in r} for r in rows]
    return rows
