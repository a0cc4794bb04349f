#!/usr/bin/env python3
"""Regenerate the bundled Louisiana-style fixture data files.

County polygons are exact unions of level-13 grid-cell quads near Baton
Rouge, so spatial integration produces a known number of within/touches
relations (county A = 3 cells, county B = 2 cells, county C = 1 cell out
of state). Output is frozen into src/geokg/data/fixture/ and committed;
rerun only if the grid math ever changes.
"""

import csv
import json
import pathlib

from geokg import dgg
from geokg import geometry as geom

OUT = pathlib.Path(__file__).resolve().parent.parent / "src" / "geokg" / "data" / "fixture"
LEVEL = 13


def cell_at(face: int, i: int, j: int) -> dgg.CellId:
    path = []
    for k in range(LEVEL - 1, -1, -1):
        path.append((((j >> k) & 1) << 1) | ((i >> k) & 1))
    return dgg.CellId(face, LEVEL, tuple(path))


def corner(face: int, i: int, j: int) -> tuple[float, float]:
    n = 1 << LEVEL
    x, y, z = dgg._face_uv_to_xyz(face, 2.0 * (i / n) - 1.0, 2.0 * (j / n) - 1.0)
    ll = dgg._xyz_to_latlng(*dgg._norm3(x, y, z))
    return (ll.lng, ll.lat)


def row_polygon(face: int, i0: int, j0: int, ncells: int) -> geom.Geometry:
    """Union outline of a 1 x ncells row of cells, vertex-exact."""
    ring = [corner(face, i0 + k, j0) for k in range(ncells + 1)]
    ring += [corner(face, i0 + ncells - k, j0 + 1) for k in range(ncells + 1)]
    ring.append(ring[0])
    return geom.polygon([ring])


def write_csv(name: str, header: list[str], rows: list[list[str]]):
    with open(OUT / name, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def write_json(name: str, doc):
    with open(OUT / name, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def main():
    OUT.mkdir(parents=True, exist_ok=True)

    anchor = dgg.cell_from_point(dgg.LatLng(30.45, -91.15), LEVEL)
    face = anchor.face
    i = j = 0
    for d in anchor.path:
        i = (i << 1) | (d & 1)
        j = (j << 1) | (d >> 1)

    county_a = row_polygon(face, i, j, 3)
    county_b = row_polygon(face, i, j + 3, 2)
    county_c = row_polygon(face, i + 20, j, 1)

    # State rectangle: comfortably contains counties A and B, excludes C.
    pts = [p for g in (county_a, county_b) for p in g.coordinates[0]]
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    pad = 0.02
    state = geom.box(min(xs) - pad, min(ys) - pad, max(xs) + pad, max(ys) + pad)
    assert geom.predicate(county_c, state, geom.SpatialPredicate.DISJOINT), \
        "county C must fall outside the state"
    assert geom.predicate(county_a, state, geom.SpatialPredicate.WITHIN)
    assert geom.predicate(county_b, state, geom.SpatialPredicate.WITHIN)
    assert geom.predicate(county_a, county_b, geom.SpatialPredicate.DISJOINT)

    sminx, sminy, smaxx, smaxy = state.bbox()
    # Hurricane track: a polyline cutting across the state and county A.
    a_pts = county_a.coordinates[0]
    ax = sum(p[0] for p in a_pts[:-1]) / (len(a_pts) - 1)
    ay = sum(p[1] for p in a_pts[:-1]) / (len(a_pts) - 1)
    track = geom.linestring([
        (sminx - 0.05, sminy - 0.04),
        (ax, ay),
        (smaxx + 0.03, smaxy + 0.05),
    ])
    # Areal impact extent: overlaps county A and the state's western half.
    extent = geom.box(sminx - 0.03, sminy - 0.02, ax + 0.004, smaxy + 0.01)

    write_csv("gadm_states.csv", ["gadm_key", "name", "wkt"], [
        ["Earth.NA.US.USA.19_1", "Louisiana", geom.serialize_wkt(state)],
    ])
    write_json("gadm_states.config.json", {
        "dataset_id": "gadm_states",
        "foi_kind": "region",
        "foi_class": "kwg-ont:AdminRegion_2",
        "foi_key_column": "gadm_key",
        "label_column": "name",
        "geometry": {"column": "wkt", "format": "wkt"},
        "integration_level": LEVEL,
    })
    write_json("gadm_states.manifest.json", {
        "dataset_id": "gadm_states",
        "title": "Global administrative regions, state level (fixture extract)",
        "organization": "GADM.org",
        "license": "CC-BY 4.0",
        "retrieved": "2024-05-02",
    })

    write_csv("cdc_svi.csv", ["gadm_key", "name", "wkt", "svi_score"], [
        ["Earth.NA.US.USA.19.17_1", "East Baton Rouge Parish",
         geom.serialize_wkt(county_a), "0.87"],
        ["Earth.NA.US.USA.19.24_1", "West Feliciana Parish",
         geom.serialize_wkt(county_b), "0.42"],
        ["Earth.NA.US.USA.25.1_1", "Adams County",
         geom.serialize_wkt(county_c), "0.15"],
    ])
    write_json("cdc_svi.config.json", {
        "dataset_id": "cdc_svi",
        "foi_kind": "region",
        "foi_class": "kwg-ont:AdminRegion_3",
        "foi_key_column": "gadm_key",
        "label_column": "name",
        "geometry": {"column": "wkt", "format": "wkt"},
        "properties": [
            {"column": "svi_score",
             "observation_class": "kwg-ont:VulnerabilityObservation",
             "result": "simple"},
        ],
        "integration_level": LEVEL,
    })
    write_json("cdc_svi.manifest.json", {
        "dataset_id": "cdc_svi",
        "title": "CDC/ATSDR Social Vulnerability Index (fixture extract)",
        "organization": "CDC/ATSDR",
        "license": "public domain",
        "retrieved": "2024-05-02",
    })

    write_csv("county_health.csv",
              ["gadm_key", "name", "obesity_rate", "diabetes_rate"], [
                  ["Earth.NA.US.USA.19.17_1", "East Baton Rouge Parish", "36.2", "13.1"],
                  ["Earth.NA.US.USA.19.24_1", "West Feliciana Parish", "31.8", "10.4"],
                  ["Earth.NA.US.USA.25.1_1", "Adams County", "39.5", ""],
              ])
    write_json("county_health.config.json", {
        "dataset_id": "county_health",
        "foi_kind": "region",
        "foi_class": "kwg-ont:AdminRegion_3",
        "foi_key_column": "gadm_key",
        "label_column": "name",
        "properties": [
            {"column": "obesity_rate",
             "observation_class": "kwg-ont:HealthObservation",
             "result": {"quantity": {"unit": "qudt-unit:PERCENT"}}},
            {"column": "diabetes_rate",
             "observation_class": "kwg-ont:HealthObservation",
             "result": {"quantity": {"unit": "qudt-unit:PERCENT"}}},
        ],
        "integration_level": LEVEL,
    })
    write_json("county_health.manifest.json", {
        "dataset_id": "county_health",
        "title": "County health profile: obesity and diabetes (fixture extract)",
        "organization": "UW:PHI",
        "license": "CC-BY 4.0",
        "retrieved": "2024-05-02",
    })

    write_csv("noaa_hurricanes.csv",
              ["hazard_key", "name", "wkt", "begin", "end", "max_wind_kts"], [
                  ["hurricane.ida_fixture.track", "Hurricane Ida (fixture) track",
                   geom.serialize_wkt(track),
                   "2021-08-26T12:00:00", "2021-09-04T06:00:00", "130"],
                  ["hurricane.ida_fixture.extent", "Hurricane Ida (fixture) impact extent",
                   geom.serialize_wkt(extent),
                   "2021-08-26T12:00:00", "2021-09-04T06:00:00", ""],
              ])
    write_json("noaa_hurricanes.config.json", {
        "dataset_id": "noaa_hurricanes",
        "foi_kind": "hazard",
        "foi_class": "kwg-ont:HurricaneEvent",
        "foi_key_column": "hazard_key",
        "label_column": "name",
        "geometry": {"column": "wkt", "format": "wkt"},
        "time": {"mode": "interval", "begin_column": "begin", "end_column": "end"},
        "properties": [
            {"column": "max_wind_kts",
             "observation_class": "kwg-ont:HurricaneObservation",
             "result": {"quantity": {"unit": "qudt-unit:KN"}}},
        ],
        "integration_level": LEVEL,
    })
    write_json("noaa_hurricanes.manifest.json", {
        "dataset_id": "noaa_hurricanes",
        "title": "Hurricane tracks and impact extents (fixture extract)",
        "organization": "NOAA",
        "license": "public domain",
        "retrieved": "2024-05-02",
    })

    write_json("thematic.json", [
        {"slug": "disaster_response",
         "theme": "disaster response",
         "datasets": ["cdc_svi", "county_health", "noaa_hurricanes"]},
    ])

    print(f"fixture written to {OUT}")
    print("anchor cell:", dgg.token(anchor), "face/i/j:", face, i, j)
    print("county A cells:", [dgg.token(cell_at(face, i + k, j)) for k in range(3)])
    print("county B cells:", [dgg.token(cell_at(face, i + k, j + 3)) for k in range(2)])


if __name__ == "__main__":
    main()
