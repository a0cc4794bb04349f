"""Planar vector geometry and the DE-9IM topological relation calculus.

Coordinates are (lng, lat) degrees treated as a flat plane; topology uses
an absolute coincidence epsilon of 1e-9 degrees. The DE-9IM matrix is
computed from a boundary arrangement: each operand's boundary is split at
every intersection with the other's, the resulting sub-arcs are classified
by their midpoints (interior / boundary / exterior of the other operand),
and matrix entries follow from which classes are inhabited. For valid
inputs this is exact: an open set meeting a curve always captures a whole
sub-arc, never an isolated point.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from typing import Sequence

EPS = 1e-9
_MIN_RING_AREA = 1e-20

_AREAL_TAGS = ("Polygon", "MultiPolygon")
_LINEAL_TAGS = ("LineString", "MultiLineString")
_PUNTAL_TAGS = ("Point", "MultiPoint")


class GeometryError(ValueError):
    """Invalid geometry (construction or parse time)."""


class WktParseError(GeometryError):
    pass


class Location(enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    EXTERIOR = "exterior"


class SpatialPredicate(enum.Enum):
    EQUALS = "sfEquals"
    DISJOINT = "sfDisjoint"
    INTERSECTS = "sfIntersects"
    TOUCHES = "sfTouches"
    WITHIN = "sfWithin"
    CONTAINS = "sfContains"
    OVERLAPS = "sfOverlaps"
    CROSSES = "sfCrosses"


class RCC8Relation(enum.Enum):
    DC = "DC"
    EC = "EC"
    PO = "PO"
    EQ = "EQ"
    TPP = "TPP"
    NTPP = "NTPP"
    TPPi = "TPPi"
    NTPPi = "NTPPi"


@dataclass(frozen=True)
class Geometry:
    tag: str
    coordinates: tuple

    def dimension(self) -> int:
        if self.tag in _PUNTAL_TAGS:
            return 0
        if self.tag in _LINEAL_TAGS:
            return 1
        return 2

    def is_areal(self) -> bool:
        return self.tag in _AREAL_TAGS

    def is_empty(self) -> bool:
        return len(self.coordinates) == 0

    def bbox(self) -> tuple[float, float, float, float]:
        xs, ys = [], []
        for x, y in _iter_points(self):
            xs.append(x)
            ys.append(y)
        return (min(xs), min(ys), max(xs), max(ys))

    def __repr__(self):
        return f"<Geometry {serialize_wkt(self)}>"


def _iter_points(g: Geometry):
    if g.tag == "Point":
        yield g.coordinates
    elif g.tag in ("MultiPoint", "LineString"):
        yield from g.coordinates
    elif g.tag in ("MultiLineString", "Polygon"):
        for part in g.coordinates:
            yield from part
    else:
        for poly in g.coordinates:
            for ring in poly:
                yield from ring


def _check_point(x, y):
    if not (isinstance(x, (int, float)) and isinstance(y, (int, float))):
        raise GeometryError("coordinates must be numeric")
    if not (-180.0 <= x <= 180.0):
        raise GeometryError(f"longitude out of range: {x!r}")
    if not (-90.0 <= y <= 90.0):
        raise GeometryError(f"latitude out of range: {y!r}")
    return (float(x), float(y))


def point(x, y) -> Geometry:
    return Geometry("Point", _check_point(x, y))


def multipoint(pts: Sequence) -> Geometry:
    if not pts:
        raise GeometryError("MultiPoint needs at least one point")
    return Geometry("MultiPoint", tuple(_check_point(x, y) for x, y in pts))


def _check_line(pts) -> tuple:
    coords = [_check_point(x, y) for x, y in pts]
    if len(coords) < 2:
        raise GeometryError("LineString needs at least 2 points")
    for a, b in zip(coords, coords[1:]):
        if abs(a[0] - b[0]) <= EPS and abs(a[1] - b[1]) <= EPS:
            raise GeometryError("repeated consecutive vertex in LineString")
    return tuple(coords)


def linestring(pts: Sequence) -> Geometry:
    return Geometry("LineString", _check_line(pts))


def multilinestring(lines: Sequence) -> Geometry:
    if not lines:
        raise GeometryError("MultiLineString needs at least one part")
    return Geometry("MultiLineString", tuple(_check_line(l) for l in lines))


def ring_area(ring: Sequence) -> float:
    """Signed shoelace area of a closed ring (positive = counterclockwise)."""
    a = 0.0
    n = len(ring) - 1
    for k in range(n):
        x1, y1 = ring[k]
        x2, y2 = ring[k + 1]
        a += x1 * y2 - x2 * y1
    return 0.5 * a


def _check_ring(pts, want_ccw: bool) -> tuple:
    coords = [_check_point(x, y) for x, y in pts]
    if len(coords) < 4:
        raise GeometryError("ring needs at least 4 points (closed)")
    first, last = coords[0], coords[-1]
    if abs(first[0] - last[0]) > EPS or abs(first[1] - last[1]) > EPS:
        raise GeometryError("ring is not closed")
    coords[-1] = first
    for a, b in zip(coords, coords[1:]):
        if abs(a[0] - b[0]) <= EPS and abs(a[1] - b[1]) <= EPS:
            raise GeometryError("repeated consecutive vertex in ring")
    if abs(ring_area(coords)) < _MIN_RING_AREA:
        raise GeometryError("degenerate zero-area ring")
    _check_ring_simple(coords)
    if (ring_area(coords) > 0) != want_ccw:
        coords = coords[::-1]
    return tuple(coords)


def _check_ring_simple(coords):
    segs = list(zip(coords[:-1], coords[1:]))
    n = len(segs)
    for i in range(n):
        for j in range(i + 1, n):
            adjacent = (j == i + 1) or (i == 0 and j == n - 1)
            a, b = segs[i]
            c, d = segs[j]
            if adjacent:
                # Only the shared vertex may be common; a collinear
                # back-track (spike) makes the ring non-simple.
                shared = b if j == i + 1 else a
                far_c = d if j == i + 1 else c
                far_a = a if j == i + 1 else b
                if _point_on_segment(far_c, a, b) or _point_on_segment(far_a, c, d):
                    raise GeometryError("self-intersecting ring (spike)")
                continue
            if _segments_touch(a, b, c, d):
                raise GeometryError("self-intersecting ring")


def polygon(rings: Sequence) -> Geometry:
    """Polygon from [outer, hole, ...]; orientation is normalized to
    counterclockwise outer / clockwise holes."""
    if not rings:
        raise GeometryError("Polygon needs at least an outer ring")
    out = [_check_ring(rings[0], want_ccw=True)]
    for hole in rings[1:]:
        out.append(_check_ring(hole, want_ccw=False))
    return Geometry("Polygon", tuple(out))


def multipolygon(polys: Sequence) -> Geometry:
    if not polys:
        raise GeometryError("MultiPolygon needs at least one part")
    parts = []
    for rings in polys:
        parts.append(polygon(rings).coordinates)
    return Geometry("MultiPolygon", tuple(parts))


def box(minx, miny, maxx, maxy) -> Geometry:
    if minx >= maxx or miny >= maxy:
        raise GeometryError("box must have positive extent")
    return polygon([[(minx, miny), (maxx, miny), (maxx, maxy), (minx, maxy), (minx, miny)]])


def polygon_area(g: Geometry) -> float:
    """Net planar area (outer minus holes) in square degrees."""
    if not g.is_areal():
        raise GeometryError("area requires an areal geometry")
    total = 0.0
    for rings in _polygons_of(g):
        for ring in rings:
            total += ring_area(ring)
    return total


def _polygons_of(g: Geometry):
    if g.tag == "Polygon":
        return (g.coordinates,)
    if g.tag == "MultiPolygon":
        return g.coordinates
    raise GeometryError(f"not an areal geometry: {g.tag}")


def _lines_of(g: Geometry):
    if g.tag == "LineString":
        return (g.coordinates,)
    if g.tag == "MultiLineString":
        return g.coordinates
    raise GeometryError(f"not a lineal geometry: {g.tag}")


def _points_of(g: Geometry):
    if g.tag == "Point":
        return (g.coordinates,)
    if g.tag == "MultiPoint":
        return g.coordinates
    raise GeometryError(f"not a puntal geometry: {g.tag}")


# ---------------------------------------------------------------------------
# Planar primitives


def _point_on_segment(p, a, b) -> bool:
    px, py = p
    ax, ay = a
    bx, by = b
    dx, dy = bx - ax, by - ay
    L2 = dx * dx + dy * dy
    if L2 == 0.0:
        return math.hypot(px - ax, py - ay) <= EPS
    t = ((px - ax) * dx + (py - ay) * dy) / L2
    t = max(0.0, min(1.0, t))
    qx, qy = ax + t * dx, ay + t * dy
    return math.hypot(px - qx, py - qy) <= EPS


def _seg_param(p, a, b) -> float:
    ax, ay = a
    bx, by = b
    dx, dy = bx - ax, by - ay
    L2 = dx * dx + dy * dy
    if L2 == 0.0:
        return 0.0
    return ((p[0] - ax) * dx + (p[1] - ay) * dy) / L2


def _segments_touch(a, b, c, d) -> bool:
    """True when segments share at least one point (eps-tolerant)."""
    if (max(a[0], b[0]) < min(c[0], d[0]) - EPS
            or max(c[0], d[0]) < min(a[0], b[0]) - EPS
            or max(a[1], b[1]) < min(c[1], d[1]) - EPS
            or max(c[1], d[1]) < min(a[1], b[1]) - EPS):
        return False
    if (_point_on_segment(c, a, b) or _point_on_segment(d, a, b)
            or _point_on_segment(a, c, d) or _point_on_segment(b, c, d)):
        return True
    d1 = _cross(a, b, c)
    d2 = _cross(a, b, d)
    d3 = _cross(c, d, a)
    d4 = _cross(c, d, b)
    return ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0))


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _split_params(a, b, other_segs) -> tuple[list[float], bool]:
    """Parameters in (0,1) where segment (a,b) meets any of other_segs,
    plus a flag for whether any contact at all (including endpoints)."""
    seg_len = math.hypot(b[0] - a[0], b[1] - a[1])
    tol = EPS / seg_len if seg_len > 0 else 0.5
    params: list[float] = []
    touched = False
    for c, d in other_segs:
        if (max(a[0], b[0]) < min(c[0], d[0]) - EPS
                or max(c[0], d[0]) < min(a[0], b[0]) - EPS
                or max(a[1], b[1]) < min(c[1], d[1]) - EPS
                or max(c[1], d[1]) < min(a[1], b[1]) - EPS):
            continue
        local: list[float] = []
        for q in (c, d):
            if _point_on_segment(q, a, b):
                local.append(_seg_param(q, a, b))
        for q in (a, b):
            if _point_on_segment(q, c, d):
                local.append(_seg_param(q, a, b))
        if not local:
            d1 = _cross(a, b, c)
            d2 = _cross(a, b, d)
            d3 = _cross(c, d, a)
            d4 = _cross(c, d, b)
            if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)):
                denom = d3 - d4
                if denom != 0.0:
                    local.append(d3 / denom)
        if local:
            touched = True
            params.extend(local)
    cuts = sorted(t for t in params if tol < t < 1.0 - tol)
    merged: list[float] = []
    for t in cuts:
        if not merged or t - merged[-1] > tol:
            merged.append(t)
    return merged, touched


def _sub_midpoints(a, b, cuts):
    ts = [0.0] + cuts + [1.0]
    for t1, t2 in zip(ts, ts[1:]):
        tm = 0.5 * (t1 + t2)
        yield (a[0] + tm * (b[0] - a[0]), a[1] + tm * (b[1] - a[1]))


def locate_point_areal(g: Geometry, x: float, y: float) -> Location:
    """Even-odd point location against all rings of an areal geometry."""
    inside = 0
    for rings in _polygons_of(g):
        for ring in rings:
            n = len(ring) - 1
            for k in range(n):
                if _point_on_segment((x, y), ring[k], ring[k + 1]):
                    return Location.BOUNDARY
            for k in range(n):
                x1, y1 = ring[k]
                x2, y2 = ring[k + 1]
                if (y1 > y) != (y2 > y):
                    xint = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
                    if xint > x:
                        inside ^= 1
    return Location.INTERIOR if inside else Location.EXTERIOR


def point_in_polygon(g: Geometry, x: float, y: float) -> bool:
    """Closed containment test (interior or boundary)."""
    return locate_point_areal(g, x, y) is not Location.EXTERIOR


def _line_boundary_points(g: Geometry) -> list[tuple[float, float]]:
    """Mod-2 endpoints of a lineal geometry (OGC boundary rule)."""
    counts: dict[tuple[float, float], int] = {}
    for line in _lines_of(g):
        for p in (line[0], line[-1]):
            key = None
            for q in counts:
                if abs(q[0] - p[0]) <= EPS and abs(q[1] - p[1]) <= EPS:
                    key = q
                    break
            key = key or p
            counts[key] = counts.get(key, 0) + 1
    return [p for p, c in counts.items() if c % 2 == 1]


def _line_segments(g: Geometry):
    for line in _lines_of(g):
        for k in range(len(line) - 1):
            yield (line[k], line[k + 1])


def locate_point_lineal(g: Geometry, x: float, y: float) -> Location:
    for bp in _line_boundary_points(g):
        if math.hypot(bp[0] - x, bp[1] - y) <= EPS:
            return Location.BOUNDARY
    for a, b in _line_segments(g):
        if _point_on_segment((x, y), a, b):
            return Location.INTERIOR
    return Location.EXTERIOR


# ---------------------------------------------------------------------------
# DE-9IM


_MATRIX_POS = {
    (Location.INTERIOR, Location.INTERIOR): 0,
    (Location.INTERIOR, Location.BOUNDARY): 1,
    (Location.INTERIOR, Location.EXTERIOR): 2,
    (Location.BOUNDARY, Location.INTERIOR): 3,
    (Location.BOUNDARY, Location.BOUNDARY): 4,
    (Location.BOUNDARY, Location.EXTERIOR): 5,
    (Location.EXTERIOR, Location.INTERIOR): 6,
    (Location.EXTERIOR, Location.BOUNDARY): 7,
    (Location.EXTERIOR, Location.EXTERIOR): 8,
}

_TRANSPOSE_ORDER = (0, 3, 6, 1, 4, 7, 2, 5, 8)


@dataclass(frozen=True)
class DE9IMMatrix:
    """Nine intersection dimensions, row-major over (interior, boundary,
    exterior) of A crossed with the same for B; entries in {F, 0, 1, 2}."""

    value: str

    def __post_init__(self):
        if len(self.value) != 9 or any(ch not in "F012" for ch in self.value):
            raise GeometryError(f"bad DE-9IM value: {self.value!r}")

    def entry(self, row: Location, col: Location) -> str:
        return self.value[_MATRIX_POS[(row, col)]]

    def transpose(self) -> "DE9IMMatrix":
        return DE9IMMatrix("".join(self.value[i] for i in _TRANSPOSE_ORDER))

    def matches(self, mask: str) -> bool:
        if len(mask) != 9:
            raise GeometryError("mask must have 9 characters")
        for have, want in zip(self.value, mask):
            if want == "*":
                continue
            if want == "T":
                if have == "F":
                    return False
            elif have != want:
                return False
        return True

    def __str__(self):
        return self.value


def _matrix(entries: dict[int, str]) -> DE9IMMatrix:
    chars = ["F"] * 9
    for pos, val in entries.items():
        chars[pos] = val
    return DE9IMMatrix("".join(chars))


def _boundary_segments_areal(g: Geometry):
    """Directed boundary edges; the polygon interior lies to the LEFT of
    every edge (outer rings counterclockwise, holes clockwise)."""
    for rings in _polygons_of(g):
        for ring in rings:
            for k in range(len(ring) - 1):
                yield (ring[k], ring[k + 1])


def _classify_boundary(segs_a, other: Geometry, other_segs, locate):
    """Split segs_a at crossings with other_segs and bin the sub-arc
    midpoints by their location in `other`. Boundary hits also report the
    traversal direction agreement with the host edge under the midpoint."""
    res = {
        "in": False, "out": False, "on_same": False, "on_opp": False,
        "touched": False,
    }
    other_segs = list(other_segs)
    for a, b in segs_a:
        cuts, touched = _split_params(a, b, other_segs)
        if touched:
            res["touched"] = True
        for m in _sub_midpoints(a, b, cuts):
            loc = locate(other, m[0], m[1])
            if loc is Location.INTERIOR:
                res["in"] = True
            elif loc is Location.EXTERIOR:
                res["out"] = True
            else:
                res["touched"] = True
                host = None
                best = 0.0
                for c, d in other_segs:
                    if _point_on_segment(m, c, d):
                        ex, ey = b[0] - a[0], b[1] - a[1]
                        fx, fy = d[0] - c[0], d[1] - c[1]
                        dot = ex * fx + ey * fy
                        if abs(dot) > abs(best):
                            best = dot
                            host = (c, d)
                if host is not None and best > 0:
                    res["on_same"] = True
                elif host is not None:
                    res["on_opp"] = True
    return res


def _relate_area_area(a: Geometry, b: Geometry) -> DE9IMMatrix:
    segs_a = list(_boundary_segments_areal(a))
    segs_b = list(_boundary_segments_areal(b))
    ca = _classify_boundary(segs_a, b, segs_b, locate_point_areal)
    cb = _classify_boundary(segs_b, a, segs_a, locate_point_areal)
    on_same = ca["on_same"] or cb["on_same"]
    on_opp = ca["on_opp"] or cb["on_opp"]
    touched = ca["touched"] or cb["touched"]

    entries = {8: "2"}
    if ca["in"] or cb["in"] or on_same:
        entries[0] = "2"
    if cb["in"]:
        entries[1] = "1"
    if ca["out"] or on_opp or cb["in"]:
        entries[2] = "2"
    if ca["in"]:
        entries[3] = "1"
    if on_same or on_opp:
        entries[4] = "1"
    elif touched:
        entries[4] = "0"
    if ca["out"]:
        entries[5] = "1"
    if cb["out"] or on_opp or ca["in"]:
        entries[6] = "2"
    if cb["out"]:
        entries[7] = "1"
    return _matrix(entries)


def _relate_line_area(line: Geometry, area: Geometry) -> DE9IMMatrix:
    area_segs = list(_boundary_segments_areal(area))
    line_segs = list(_line_segments(line))
    bpts = _line_boundary_points(line)

    li_in = li_on = li_out = False
    contact_interior = False
    for a, b in line_segs:
        cuts, touched = _split_params(a, b, area_segs)
        for m in _sub_midpoints(a, b, cuts):
            loc = locate_point_areal(area, m[0], m[1])
            if loc is Location.INTERIOR:
                li_in = True
            elif loc is Location.EXTERIOR:
                li_out = True
            else:
                li_on = True
        if touched:
            # Isolated contact points: credit them to the line's interior
            # unless they coincide with a line boundary endpoint.
            for t in cuts + [0.0, 1.0]:
                px = a[0] + t * (b[0] - a[0])
                py = a[1] + t * (b[1] - a[1])
                if locate_point_areal(area, px, py) is Location.BOUNDARY:
                    if locate_point_lineal(line, px, py) is Location.INTERIOR:
                        contact_interior = True

    lb_in = lb_on = lb_out = False
    for px, py in bpts:
        loc = locate_point_areal(area, px, py)
        if loc is Location.INTERIOR:
            lb_in = True
        elif loc is Location.BOUNDARY:
            lb_on = True
        else:
            lb_out = True

    eb_out = False
    for c, d in area_segs:
        cuts, _ = _split_params(c, d, line_segs)
        for m in _sub_midpoints(c, d, cuts):
            if locate_point_lineal(line, m[0], m[1]) is Location.EXTERIOR:
                eb_out = True
                break
        if eb_out:
            break

    entries = {6: "2", 8: "2"}
    if li_in:
        entries[0] = "1"
    if li_on:
        entries[1] = "1"
    elif contact_interior:
        entries[1] = "0"
    if li_out:
        entries[2] = "1"
    if lb_in:
        entries[3] = "0"
    if lb_on:
        entries[4] = "0"
    if lb_out:
        entries[5] = "0"
    if eb_out:
        entries[7] = "1"
    return _matrix(entries)


def _relate_point_area(pts: Geometry, area: Geometry) -> DE9IMMatrix:
    entries = {6: "2", 7: "1", 8: "2"}
    for x, y in _points_of(pts):
        loc = locate_point_areal(area, x, y)
        if loc is Location.INTERIOR:
            entries[0] = "0"
        elif loc is Location.BOUNDARY:
            entries[1] = "0"
        else:
            entries[2] = "0"
    return _matrix(entries)


def _relate_line_line(a: Geometry, b: Geometry) -> DE9IMMatrix:
    segs_a = list(_line_segments(a))
    segs_b = list(_line_segments(b))
    bd_a = _line_boundary_points(a)
    bd_b = _line_boundary_points(b)

    shared = False
    ii_point = ib_point = False
    ie = False
    for p, q in segs_a:
        cuts, touched = _split_params(p, q, segs_b)
        for m in _sub_midpoints(p, q, cuts):
            on_b = any(_point_on_segment(m, c, d) for c, d in segs_b)
            if on_b:
                shared = True
            else:
                ie = True
        if touched:
            for t in cuts + [0.0, 1.0]:
                px = p[0] + t * (q[0] - p[0])
                py = p[1] + t * (q[1] - p[1])
                loc_b = locate_point_lineal(b, px, py)
                if loc_b is Location.EXTERIOR:
                    continue
                loc_a = locate_point_lineal(a, px, py)
                if loc_a is Location.INTERIOR and loc_b is Location.INTERIOR:
                    ii_point = True
                elif loc_a is Location.INTERIOR and loc_b is Location.BOUNDARY:
                    ib_point = True

    bi_point = bb_point = be_point = False
    for px, py in bd_a:
        loc = locate_point_lineal(b, px, py)
        if loc is Location.INTERIOR:
            bi_point = True
        elif loc is Location.BOUNDARY:
            bb_point = True
        else:
            be_point = True

    ei = False
    for p, q in segs_b:
        cuts, _ = _split_params(p, q, segs_a)
        for m in _sub_midpoints(p, q, cuts):
            if not any(_point_on_segment(m, c, d) for c, d in segs_a):
                ei = True
                break
        if ei:
            break
    eb_point = any(
        locate_point_lineal(a, px, py) is Location.EXTERIOR for px, py in bd_b
    )

    entries = {8: "2"}
    if shared:
        entries[0] = "1"
    elif ii_point:
        entries[0] = "0"
    if ib_point:
        entries[1] = "0"
    if ie:
        entries[2] = "1"
    if bi_point:
        entries[3] = "0"
    if bb_point:
        entries[4] = "0"
    if be_point:
        entries[5] = "0"
    if ei:
        entries[6] = "1"
    if eb_point:
        entries[7] = "0"
    return _matrix(entries)


def _relate_point_line(pts: Geometry, line: Geometry) -> DE9IMMatrix:
    entries = {6: "1", 8: "2"}
    points = list(_points_of(pts))
    for x, y in points:
        loc = locate_point_lineal(line, x, y)
        if loc is Location.INTERIOR:
            entries[0] = "0"
        elif loc is Location.BOUNDARY:
            entries[1] = "0"
        else:
            entries[2] = "0"
    for bx, by in _line_boundary_points(line):
        if not any(math.hypot(bx - x, by - y) <= EPS for x, y in points):
            entries[7] = "0"
            break
    return _matrix(entries)


def _relate_point_point(a: Geometry, b: Geometry) -> DE9IMMatrix:
    pa = list(_points_of(a))
    pb = list(_points_of(b))

    def member(p, pool):
        return any(math.hypot(p[0] - q[0], p[1] - q[1]) <= EPS for q in pool)

    entries = {8: "2"}
    if any(member(p, pb) for p in pa):
        entries[0] = "0"
    if any(not member(p, pb) for p in pa):
        entries[2] = "0"
    if any(not member(q, pa) for q in pb):
        entries[6] = "0"
    return _matrix(entries)


def relate(a: Geometry, b: Geometry) -> DE9IMMatrix:
    """DE-9IM intersection matrix of two valid geometries."""
    da, db = a.dimension(), b.dimension()
    if da == 2 and db == 2:
        return _relate_area_area(a, b)
    if da == 1 and db == 2:
        return _relate_line_area(a, b)
    if da == 2 and db == 1:
        return _relate_line_area(b, a).transpose()
    if da == 0 and db == 2:
        return _relate_point_area(a, b)
    if da == 2 and db == 0:
        return _relate_point_area(b, a).transpose()
    if da == 1 and db == 1:
        return _relate_line_line(a, b)
    if da == 0 and db == 1:
        return _relate_point_line(a, b)
    if da == 1 and db == 0:
        return _relate_point_line(b, a).transpose()
    return _relate_point_point(a, b)


def predicate(a: Geometry, b: Geometry, p: SpatialPredicate,
              matrix: DE9IMMatrix | None = None) -> bool:
    """OGC Simple Features predicate, as a mask test over relate(a, b)."""
    m = matrix if matrix is not None else relate(a, b)
    if p is SpatialPredicate.EQUALS:
        return m.matches("T*F**FFF*")
    if p is SpatialPredicate.DISJOINT:
        return m.matches("FF*FF****")
    if p is SpatialPredicate.INTERSECTS:
        return not m.matches("FF*FF****")
    if p is SpatialPredicate.TOUCHES:
        return (m.matches("FT*******") or m.matches("F**T*****")
                or m.matches("F***T****"))
    if p is SpatialPredicate.WITHIN:
        return m.matches("T*F**F***")
    if p is SpatialPredicate.CONTAINS:
        return m.transpose().matches("T*F**F***")
    da, db = a.dimension(), b.dimension()
    if p is SpatialPredicate.OVERLAPS:
        if da != db:
            return False
        if da == 1:
            return m.matches("1*T***T**")
        return m.matches("T*T***T**")
    if p is SpatialPredicate.CROSSES:
        if da < db:
            return m.matches("T*T******")
        if da > db:
            return m.matches("T*****T**")
        if da == 1:
            return m.matches("0********")
        return False
    raise GeometryError(f"unknown predicate: {p}")


def rcc8_of(a: Geometry, b: Geometry) -> RCC8Relation:
    """RCC-8 relation between two areal geometries."""
    if not a.is_areal() or not b.is_areal():
        raise GeometryError("RCC-8 requires areal operands")
    m = relate(a, b)
    if predicate(a, b, SpatialPredicate.EQUALS, m):
        return RCC8Relation.EQ
    if predicate(a, b, SpatialPredicate.DISJOINT, m):
        return RCC8Relation.DC
    if predicate(a, b, SpatialPredicate.TOUCHES, m):
        return RCC8Relation.EC
    boundary_contact = m.entry(Location.BOUNDARY, Location.BOUNDARY) != "F"
    if predicate(a, b, SpatialPredicate.WITHIN, m):
        return RCC8Relation.TPP if boundary_contact else RCC8Relation.NTPP
    if predicate(a, b, SpatialPredicate.CONTAINS, m):
        return RCC8Relation.TPPi if boundary_contact else RCC8Relation.NTPPi
    return RCC8Relation.PO


# ---------------------------------------------------------------------------
# WKT


_WKT_TOKEN = re.compile(r"\s*(?:(?P<word>[A-Za-z]+)|(?P<num>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<punct>[(),]))")


def _tokenize_wkt(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _WKT_TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip() == "":
                break
            raise WktParseError(f"unexpected character at offset {pos}: {text[pos]!r}")
        if m.group("word"):
            out.append(("word", m.group("word").upper(), pos))
        elif m.group("num"):
            out.append(("num", float(m.group("num")), pos))
        else:
            out.append(("punct", m.group("punct"), pos))
        pos = m.end()
    return out


class _WktReader:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self, kind=None, value=None):
        tok = self.peek()
        if tok is None:
            raise WktParseError("unexpected end of WKT text")
        if kind and tok[0] != kind:
            raise WktParseError(f"expected {value or kind} at offset {tok[2]}")
        if value is not None and tok[1] != value:
            raise WktParseError(f"expected {value!r} at offset {tok[2]}")
        self.i += 1
        return tok

    def coord(self):
        x = self.next("num")[1]
        tok = self.peek()
        if tok is None or tok[0] != "num":
            raise WktParseError("coordinates must have exactly 2 values")
        y = self.next("num")[1]
        tok = self.peek()
        if tok is not None and tok[0] == "num":
            raise WktParseError("coordinates must have exactly 2 values")
        return (x, y)

    def point_list(self):
        pts = [self.coord()]
        while self.peek() and self.peek()[1] == ",":
            self.next()
            pts.append(self.coord())
        return pts


def parse_wkt(text: str) -> Geometry:
    """Parse the six supported WKT geometry types (axis order lng lat)."""
    reader = _WktReader(_tokenize_wkt(text))
    g = _parse_wkt_body(reader)
    if reader.peek() is not None:
        tok = reader.peek()
        raise WktParseError(f"trailing content at offset {tok[2]}")
    return g


def _parse_wkt_body(r: _WktReader) -> Geometry:
    tag = r.next("word")[1]

    def parens(inner):
        r.next("punct", "(")
        out = inner()
        r.next("punct", ")")
        return out

    if tag == "POINT":
        return point(*parens(r.coord))
    if tag == "LINESTRING":
        return linestring(parens(r.point_list))
    if tag == "POLYGON":
        return polygon(parens(lambda: _comma_list(r, lambda: parens(r.point_list))))
    if tag == "MULTIPOINT":
        def one_point():
            if r.peek() and r.peek()[1] == "(":
                return parens(r.coord)
            return r.coord()
        return multipoint(parens(lambda: _comma_list(r, one_point)))
    if tag == "MULTILINESTRING":
        return multilinestring(parens(lambda: _comma_list(r, lambda: parens(r.point_list))))
    if tag == "MULTIPOLYGON":
        def one_poly():
            return parens(lambda: _comma_list(r, lambda: parens(r.point_list)))
        return multipolygon(parens(lambda: _comma_list(r, one_poly)))
    raise WktParseError(f"unknown geometry tag: {tag}")


def _comma_list(r: _WktReader, item):
    out = [item()]
    while r.peek() and r.peek()[1] == ",":
        r.next()
        out.append(item())
    return out


def _fmt(x: float) -> str:
    if x == int(x) and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def serialize_wkt(g: Geometry) -> str:
    def pts(seq):
        return ", ".join(f"{_fmt(x)} {_fmt(y)}" for x, y in seq)

    if g.tag == "Point":
        x, y = g.coordinates
        return f"POINT ({_fmt(x)} {_fmt(y)})"
    if g.tag == "MultiPoint":
        return "MULTIPOINT (" + ", ".join(f"({_fmt(x)} {_fmt(y)})" for x, y in g.coordinates) + ")"
    if g.tag == "LineString":
        return f"LINESTRING ({pts(g.coordinates)})"
    if g.tag == "MultiLineString":
        return "MULTILINESTRING (" + ", ".join(f"({pts(l)})" for l in g.coordinates) + ")"
    if g.tag == "Polygon":
        return "POLYGON (" + ", ".join(f"({pts(rg)})" for rg in g.coordinates) + ")"
    if g.tag == "MultiPolygon":
        parts = []
        for rings in g.coordinates:
            parts.append("(" + ", ".join(f"({pts(rg)})" for rg in rings) + ")")
        return "MULTIPOLYGON (" + ", ".join(parts) + ")"
    raise GeometryError(f"unknown geometry tag: {g.tag}")


# ---------------------------------------------------------------------------
# GeoJSON


def to_geojson(g: Geometry) -> dict:
    def listify(x):
        if isinstance(x, tuple) and x and isinstance(x[0], float):
            return [x[0], x[1]]
        return [listify(v) for v in x]

    return {"type": g.tag, "coordinates": listify(g.coordinates)}


def from_geojson(obj: dict) -> Geometry:
    try:
        tag = obj["type"]
        coords = obj["coordinates"]
    except (KeyError, TypeError) as exc:
        raise GeometryError(f"not a GeoJSON geometry: {exc}") from None
    builders = {
        "Point": lambda c: point(c[0], c[1]),
        "MultiPoint": multipoint,
        "LineString": linestring,
        "MultiLineString": multilinestring,
        "Polygon": polygon,
        "MultiPolygon": multipolygon,
    }
    if tag not in builders:
        raise GeometryError(f"unsupported GeoJSON type: {tag}")
    return builders[tag](coords)
