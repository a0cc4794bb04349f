"""Hierarchical discrete global grid on a cube-face quadtree.

The sphere is split into 6 cube faces; each face carries a quadtree in a
local (s, t) unit square. A cell is identified by (face, level, path of
quadrant digits) and bit-packs into a single integer (3 face bits, 5 level
bits, 2 bits per path digit). Face points project linearly onto the cube
and are then normalized onto the unit sphere, so cell edges are geodesic
arcs; serialized cell polygons interpolate their 4 corners with straight
lines in lat/lng instead, which is the planar contract the rest of the
system (covering, relations, GeoJSON) is built on.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from . import geometry as geom

EARTH_RADIUS_KM = 6371.0088
MAX_LEVEL = 30

# Faces 2 and 5 are the +z / -z faces; the poles sit at their centers,
# (s, t) = (0.5, 0.5).
_NORTH_FACE = 2
_SOUTH_FACE = 5


class DggError(ValueError):
    """Invalid grid input (coordinates, level, token)."""


@dataclass(frozen=True)
class LatLng:
    """Geodetic point in degrees; lng normalized into (-180, 180]."""

    lat: float
    lng: float

    def __post_init__(self):
        if not (-90.0 <= self.lat <= 90.0):
            raise DggError(f"latitude out of range: {self.lat!r}")
        if not (-180.0 <= self.lng <= 180.0):
            raise DggError(f"longitude out of range: {self.lng!r}")
        if self.lng == -180.0:
            object.__setattr__(self, "lng", 180.0)


def _latlng_to_xyz(p: LatLng) -> tuple[float, float, float]:
    phi = math.radians(p.lat)
    lam = math.radians(p.lng)
    c = math.cos(phi)
    return (c * math.cos(lam), c * math.sin(lam), math.sin(phi))


def _xyz_to_latlng(x: float, y: float, z: float) -> LatLng:
    lat = math.degrees(math.atan2(z, math.hypot(x, y)))
    lng = math.degrees(math.atan2(y, x))
    if lng <= -180.0:
        lng += 360.0
    return LatLng(max(-90.0, min(90.0, lat)), lng)


def _face_uv_to_xyz(face: int, u: float, v: float) -> tuple[float, float, float]:
    if face == 0:
        return (1.0, u, v)
    if face == 1:
        return (-u, 1.0, v)
    if face == 2:
        return (-u, -v, 1.0)
    if face == 3:
        return (-1.0, -v, -u)
    if face == 4:
        return (v, -1.0, -u)
    return (v, u, -1.0)


def _xyz_to_face_uv(x: float, y: float, z: float) -> tuple[int, float, float]:
    # Face choice: axis of largest |component|; ties resolve to the smallest
    # face index so boundary points land on the numerically smallest packed
    # cell id (faces occupy the top bits of the packing).
    m = max(abs(x), abs(y), abs(z))
    candidates = []
    for axis, c in enumerate((x, y, z)):
        if abs(c) == m:
            candidates.append(axis if c > 0 else axis + 3)
    face = min(candidates)
    if face == 0:
        u, v = y / x, z / x
    elif face == 1:
        u, v = -x / y, z / y
    elif face == 2:
        u, v = -x / z, -y / z
    elif face == 3:
        u, v = z / x, y / x
    elif face == 4:
        u, v = z / y, -x / y
    else:
        u, v = -y / z, -x / z
    return face, u, v


def _norm3(x: float, y: float, z: float) -> tuple[float, float, float]:
    n = math.sqrt(x * x + y * y + z * z)
    return (x / n, y / n, z / n)


@dataclass(frozen=True, order=True)
class CellId:
    """Quadtree cell: face 0-5, level 0-30, one quadrant digit per level.

    Digit d encodes the (s, t) quadrant as d = 2*t_half + s_half, so
    lexicographic path order equals packed-integer order at a fixed level.
    """

    face: int
    level: int
    path: tuple[int, ...]

    def __post_init__(self):
        if not 0 <= self.face <= 5:
            raise DggError(f"face out of range: {self.face}")
        if not 0 <= self.level <= MAX_LEVEL:
            raise DggError(f"level out of range: {self.level}")
        if len(self.path) != self.level:
            raise DggError("path length must equal level")
        if any(d not in (0, 1, 2, 3) for d in self.path):
            raise DggError("path digits must be 0-3")

    @property
    def packed(self) -> int:
        bits = 0
        for i, d in enumerate(self.path):
            bits |= d << (2 * (MAX_LEVEL - 1 - i))
        return ((self.face << 5) | self.level) << (2 * MAX_LEVEL) | bits

    def parent(self) -> "CellId":
        if self.level == 0:
            raise DggError("level-0 cell has no parent")
        return CellId(self.face, self.level - 1, self.path[:-1])

    def ancestor(self, level: int) -> "CellId":
        if not 0 <= level <= self.level:
            raise DggError(f"ancestor level must be in [0, {self.level}]")
        return CellId(self.face, level, self.path[:level])

    def children(self) -> tuple["CellId", "CellId", "CellId", "CellId"]:
        if self.level >= MAX_LEVEL:
            raise DggError(f"cannot subdivide below level {MAX_LEVEL}")
        return tuple(
            CellId(self.face, self.level + 1, self.path + (d,)) for d in range(4)
        )

    def st_extent(self) -> tuple[float, float, float, float]:
        """(s_lo, s_hi, t_lo, t_hi) of the cell in face coordinates."""
        i = j = 0
        for d in self.path:
            i = (i << 1) | (d & 1)
            j = (j << 1) | (d >> 1)
        scale = 1.0 / (1 << self.level)
        return (i * scale, (i + 1) * scale, j * scale, (j + 1) * scale)

    def __repr__(self):
        return f"CellId({token(self)!r})"


@dataclass(frozen=True)
class CellPolygon:
    """The cell's 4 corners in counterclockwise order (seen from outside)."""

    vertices: tuple[LatLng, LatLng, LatLng, LatLng]
    level: int


def face_cells() -> tuple[CellId, ...]:
    return tuple(CellId(f, 0, ()) for f in range(6))


def cell_from_point(p: LatLng, level: int) -> CellId:
    """Locate the level-`level` cell containing p.

    On shared boundaries the lower quadrant (and, across faces, the lower
    face index) wins, i.e. the numerically smallest packed containing cell.
    """
    if not 0 <= level <= MAX_LEVEL:
        raise DggError(f"level out of range: {level}")
    face, u, v = _xyz_to_face_uv(*_latlng_to_xyz(p))
    s = min(1.0, max(0.0, 0.5 * (u + 1.0)))
    t = min(1.0, max(0.0, 0.5 * (v + 1.0)))
    n = 1 << level
    # ceil(x*n)-1 assigns exact boundary values to the lower cell; the float
    # products are exact (power-of-two scaling), which makes truncation of
    # the resulting path agree with locating at a coarser level directly.
    i = min(n - 1, max(0, math.ceil(s * n) - 1))
    j = min(n - 1, max(0, math.ceil(t * n) - 1))
    path = []
    for k in range(level - 1, -1, -1):
        path.append((((j >> k) & 1) << 1) | ((i >> k) & 1))
    return CellId(face, level, tuple(path))


def parent(c: CellId) -> CellId:
    return c.parent()


def children(c: CellId) -> tuple[CellId, ...]:
    return c.children()


def _cell_corners_xyz(c: CellId) -> list[tuple[float, float, float]]:
    s0, s1, t0, t1 = c.st_extent()
    pts = []
    for s, t in ((s0, t0), (s1, t0), (s1, t1), (s0, t1)):
        x, y, z = _face_uv_to_xyz(c.face, 2.0 * s - 1.0, 2.0 * t - 1.0)
        pts.append(_norm3(x, y, z))
    return pts


def cell_polygon(c: CellId) -> CellPolygon:
    """4-corner polygon of the cell, counterclockwise from outside."""
    pts = _cell_corners_xyz(c)
    # Orient via the loop normal: for a CCW loop (seen from outside the
    # sphere) the summed edge normal points away from the origin.
    nx = ny = nz = 0.0
    for k in range(4):
        ax, ay, az = pts[k]
        bx, by, bz = pts[(k + 1) % 4]
        nx += ay * bz - az * by
        ny += az * bx - ax * bz
        nz += ax * by - ay * bx
    cx = sum(p[0] for p in pts)
    cy = sum(p[1] for p in pts)
    cz = sum(p[2] for p in pts)
    if nx * cx + ny * cy + nz * cz < 0:
        pts.reverse()
    return CellPolygon(tuple(_xyz_to_latlng(*p) for p in pts), c.level)


def _tri_excess(a, b, c) -> float:
    """Spherical excess of triangle (a, b, c) by L'Huilier's theorem."""

    def angle(u, v):
        cx = u[1] * v[2] - u[2] * v[1]
        cy = u[2] * v[0] - u[0] * v[2]
        cz = u[0] * v[1] - u[1] * v[0]
        return math.atan2(math.sqrt(cx * cx + cy * cy + cz * cz),
                          u[0] * v[0] + u[1] * v[1] + u[2] * v[2])

    sa, sb, sc = angle(b, c), angle(c, a), angle(a, b)
    s = 0.5 * (sa + sb + sc)
    t = (math.tan(0.5 * s) * math.tan(0.5 * (s - sa))
         * math.tan(0.5 * (s - sb)) * math.tan(0.5 * (s - sc)))
    return 4.0 * math.atan(math.sqrt(max(0.0, t)))


def cell_area_km2(c: CellId) -> float:
    """Spherical area of the cell's geodesic quadrilateral in km^2."""
    p = _cell_corners_xyz(c)
    excess = _tri_excess(p[0], p[1], p[2]) + _tri_excess(p[0], p[2], p[3])
    return excess * EARTH_RADIUS_KM * EARTH_RADIUS_KM


# ---------------------------------------------------------------------------
# Token codec


_TOKEN_RE = re.compile(r"^([0-9])-([0-9]{1,2})-([0-3]*)$")


def token(c: CellId) -> str:
    """Stable id string `<face>-<level>-<base-4 path>` (e.g. "2-3-013")."""
    return f"{c.face}-{c.level}-{''.join(str(d) for d in c.path)}"


def cell_from_token(s: str) -> CellId:
    m = _TOKEN_RE.match(s)
    if not m:
        raise DggError(f"malformed cell token: {s!r}")
    face, level, path = int(m.group(1)), int(m.group(2)), m.group(3)
    if face > 5:
        raise DggError(f"face out of range in token: {s!r}")
    if level > MAX_LEVEL:
        raise DggError(f"level out of range in token: {s!r}")
    if len(path) != level:
        raise DggError(f"path length does not match level in token: {s!r}")
    return CellId(face, level, tuple(int(d) for d in path))


# ---------------------------------------------------------------------------
# Planar lat/lng form of a cell.
#
# Cells are serialized as planar polygons over their 4 corners. Two cases
# need a canonical non-quad form: cells spanning the antimeridian are split
# at lng ±180, and the two level-0 polar cells (pole strictly inside)
# become a band closed over the pole. Cells merely touching a pole at a
# corner keep a 4-vertex form with the pole vertex given the longitude of
# the opposite corner.


def _contains_pole(c: CellId) -> bool:
    if c.face not in (_NORTH_FACE, _SOUTH_FACE):
        return False
    s0, s1, t0, t1 = c.st_extent()
    return s0 <= 0.5 <= s1 and t0 <= 0.5 <= t1


def _unwrap(lngs: Sequence[float]) -> list[float]:
    out = [lngs[0]]
    for lng in lngs[1:]:
        prev = out[-1]
        while lng - prev > 180.0:
            lng -= 360.0
        while lng - prev < -180.0:
            lng += 360.0
        out.append(lng)
    return out


def _clip_lng(ring: list[tuple[float, float]], bound: float, keep_below: bool):
    """Sutherland-Hodgman clip of a ring against a vertical lng line."""
    out = []
    n = len(ring)
    for k in range(n):
        x1, y1 = ring[k]
        x2, y2 = ring[(k + 1) % n]
        in1 = x1 <= bound if keep_below else x1 >= bound
        in2 = x2 <= bound if keep_below else x2 >= bound
        if in1:
            out.append((x1, y1))
        if in1 != in2:
            f = (bound - x1) / (x2 - x1)
            out.append((bound, y1 + f * (y2 - y1)))
    return out


def _dedupe_ring(ring: list[tuple[float, float]]) -> list[tuple[float, float]]:
    out = []
    for pt in ring:
        if not out or (abs(pt[0] - out[-1][0]) > 1e-12 or abs(pt[1] - out[-1][1]) > 1e-12):
            out.append(pt)
    if len(out) > 1 and abs(out[0][0] - out[-1][0]) <= 1e-12 and abs(out[0][1] - out[-1][1]) <= 1e-12:
        out.pop()
    return out


def _ring_area(ring) -> float:
    a = 0.0
    n = len(ring)
    for k in range(n):
        x1, y1 = ring[k]
        x2, y2 = ring[(k + 1) % n]
        a += x1 * y2 - x2 * y1
    return 0.5 * a


def cell_geometry(c: CellId) -> geom.Geometry:
    """Canonical planar geometry of a cell (Polygon or split MultiPolygon).

    This single definition backs covering, spatial integration, WKT
    literals and the GeoJSON tile payloads, so all consumers agree on what
    a cell "is" in planar space.
    """
    pole_inside = _contains_pole(c)
    corners = cell_polygon(c).vertices
    pole_lat = 90.0 if c.face == _NORTH_FACE else -90.0

    if pole_inside and c.level == 0:
        # Band closed over the pole. The ring runs along the 4 corners
        # (all at |lat| = atan(1/sqrt(2))) and is sealed at lng ±180.
        ordered = sorted(corners, key=lambda p: p.lng)
        edge_lat = ordered[0].lat
        ring = [(-180.0, edge_lat)]
        ring += [(p.lng, p.lat) for p in ordered]
        ring += [(180.0, edge_lat), (180.0, pole_lat), (-180.0, pole_lat)]
        return _rings_to_geometry([ring])

    pts = [(p.lng, p.lat) for p in corners]
    if pole_inside:
        # Pole on the cell's corner: give that vertex the longitude of the
        # diagonally opposite corner so the planar quad stays simple.
        for k, (lng, lat) in enumerate(pts):
            if abs(lat) >= 90.0 - 1e-12:
                pts[k] = (pts[(k + 2) % 4][0], pole_lat)

    lngs = _unwrap([lng for lng, _ in pts])
    ring = [(lng, lat) for lng, (_, lat) in zip(lngs, pts)]
    lo, hi = min(lngs), max(lngs)
    if lo >= -180.0 and hi <= 180.0:
        return _rings_to_geometry([ring])

    pieces = []
    for bound, keep_below, shift in ((180.0, True, 0.0), (180.0, False, -360.0)):
        part = _dedupe_ring(_clip_lng(ring, bound, keep_below))
        if len(part) >= 3 and abs(_ring_area(part)) > 1e-12:
            pieces.append([(lng + shift, lat) for lng, lat in part])
    return _rings_to_geometry(pieces)


def _rings_to_geometry(rings: list[list[tuple[float, float]]]) -> geom.Geometry:
    polys = []
    for ring in rings:
        closed = list(ring) + [ring[0]]
        polys.append(geom.polygon([closed]))
    if len(polys) == 1:
        return polys[0]
    return geom.multipolygon([p.coordinates for p in polys])


# ---------------------------------------------------------------------------
# Conservative lat/lng bounds of the spherical cell region, used to prune
# the covering descent. The bounds cover every descendant's planar quad:
# descendant corners lie on the spherical cell and straight lat/lng edges
# stay inside the corner box.


def _arc_lat_extrema(a, b) -> list[float]:
    lats = []
    nx = a[1] * b[2] - a[2] * b[1]
    ny = a[2] * b[0] - a[0] * b[2]
    nz = a[0] * b[1] - a[1] * b[0]
    nn = math.sqrt(nx * nx + ny * ny + nz * nz)
    if nn < 1e-15:
        return lats
    nzu = nz / nn
    zmax = math.sqrt(max(0.0, 1.0 - nzu * nzu))
    if zmax <= 0.0:
        return lats
    # Highest/lowest-latitude points of the full great circle.
    px, py, pz = _norm3(-nzu * nx / nn, -nzu * ny / nn, 1.0 - nzu * nzu)
    for qx, qy, qz in ((px, py, pz), (-px, -py, -pz)):
        w1 = ((a[1] * qz - a[2] * qy) * nx + (a[2] * qx - a[0] * qz) * ny
              + (a[0] * qy - a[1] * qx) * nz)
        w2 = ((qy * b[2] - qz * b[1]) * nx + (qz * b[0] - qx * b[2]) * ny
              + (qx * b[1] - qy * b[0]) * nz)
        if w1 >= -1e-12 and w2 >= -1e-12:
            lats.append(math.degrees(math.asin(max(-1.0, min(1.0, qz)))))
    return lats


def _arc_lng_sweep(a, b, lng_a: float, lng_b: float) -> float:
    """Signed lng change along the minor arc a->b (lng is monotone on it)."""
    tx = b[0] - (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]) * a[0]
    ty = b[1] - (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]) * a[1]
    east = -a[1] * tx + a[0] * ty
    d = (lng_b - lng_a) % 360.0
    if east >= 0.0:
        return d
    return d - 360.0 if d > 0 else d


class _CellBounds:
    __slots__ = ("lat_lo", "lat_hi", "lng_lo", "lng_hi", "full_lng")

    def __init__(self, lat_lo, lat_hi, lng_lo, lng_hi, full_lng=False):
        self.lat_lo = lat_lo
        self.lat_hi = lat_hi
        self.lng_lo = lng_lo  # unwrapped, lng_hi may exceed 180
        self.lng_hi = lng_hi
        self.full_lng = full_lng

    def intersects_bbox(self, minx, miny, maxx, maxy) -> bool:
        if self.lat_hi < miny or self.lat_lo > maxy:
            return False
        if self.full_lng:
            return True
        for shift in (-360.0, 0.0, 360.0):
            if self.lng_lo + shift <= maxx and self.lng_hi + shift >= minx:
                return True
        return False

    def as_rectangle(self) -> geom.Geometry | None:
        if self.full_lng:
            lo, hi = -180.0, 180.0
        elif self.lng_lo >= -180.0 and self.lng_hi <= 180.0:
            lo, hi = self.lng_lo, self.lng_hi
        else:
            return None
        return geom.box(lo, self.lat_lo, hi, self.lat_hi)


def _cell_bounds(c: CellId) -> _CellBounds:
    if _contains_pole(c):
        corners = _cell_corners_xyz(c)
        lats = [math.degrees(math.asin(max(-1.0, min(1.0, p[2])))) for p in corners]
        if c.face == _NORTH_FACE:
            return _CellBounds(min(lats), 90.0, -180.0, 180.0, full_lng=True)
        return _CellBounds(-90.0, max(lats), -180.0, 180.0, full_lng=True)

    pts = _cell_corners_xyz(c)
    lls = [_xyz_to_latlng(*p) for p in pts]
    lat_lo = min(p.lat for p in lls)
    lat_hi = max(p.lat for p in lls)
    cum = lls[0].lng
    lng_lo = lng_hi = cum
    for k in range(4):
        a, b = pts[k], pts[(k + 1) % 4]
        la, lb = lls[k], lls[(k + 1) % 4]
        for lat in _arc_lat_extrema(a, b):
            lat_lo = min(lat_lo, lat)
            lat_hi = max(lat_hi, lat)
        cum += _arc_lng_sweep(a, b, la.lng, lb.lng)
        lng_lo = min(lng_lo, cum)
        lng_hi = max(lng_hi, cum)
    if lng_hi - lng_lo >= 360.0:
        return _CellBounds(lat_lo, lat_hi, -180.0, 180.0, full_lng=True)
    return _CellBounds(lat_lo, lat_hi, lng_lo, lng_hi)


# ---------------------------------------------------------------------------
# Covering


def cover_geometry(g: geom.Geometry, level: int) -> set[CellId]:
    """All level-`level` cells whose planar geometry intersects g.

    Quadtree descent: prune subtrees whose spherical bounds miss g's
    bounding box, take whole subtrees whose bounds fall inside g, and test
    the survivors exactly at the target level.
    """
    if not 0 <= level <= MAX_LEVEL:
        raise DggError(f"level out of range: {level}")
    if g.is_empty():
        raise DggError("cannot cover an empty geometry")
    minx, miny, maxx, maxy = g.bbox()
    out: set[CellId] = set()
    stack = list(face_cells())
    while stack:
        c = stack.pop()
        bounds = _cell_bounds(c)
        if not bounds.intersects_bbox(minx, miny, maxx, maxy):
            continue
        rect = bounds.as_rectangle()
        if rect is not None and geom.predicate(rect, g, geom.SpatialPredicate.WITHIN):
            _emit_descendants(c, level, out)
            continue
        if c.level == level:
            if not geom.predicate(cell_geometry(c), g, geom.SpatialPredicate.DISJOINT):
                out.add(c)
        else:
            stack.extend(c.children())
    return out


def _emit_descendants(c: CellId, level: int, out: set[CellId]) -> None:
    if c.level == level:
        out.add(c)
        return
    for child in c.children():
        _emit_descendants(child, level, out)


def all_cells_at_level(level: int) -> Iterator[CellId]:
    """Every cell at `level`, in packed order. 6*4^level ids; use with care."""
    stack: list[CellId] = []

    def walk(c: CellId):
        if c.level == level:
            yield c
        else:
            for ch in c.children():
                yield from walk(ch)

    for f in face_cells():
        yield from walk(f)


def cells_to_geojson(cells: Iterable[CellId]) -> dict:
    """GeoJSON FeatureCollection of cells with `token` and `level` props."""
    feats = []
    for c in sorted(cells, key=lambda c: c.packed):
        feats.append({
            "type": "Feature",
            "geometry": geom.to_geojson(cell_geometry(c)),
            "properties": {"token": token(c), "level": c.level},
        })
    return {"type": "FeatureCollection", "features": feats}
