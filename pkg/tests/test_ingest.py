import json
import random

import numpy as np
import pytest

from geokg import dgg
from geokg import geometry as geom
from geokg import ingest
from geokg import kgmodel as kg


MANIFEST = ingest.DatasetManifest(
    dataset_id="svi", title="SVI test rows", organization="CDC/ATSDR",
    license="public domain", retrieved="2024-05-02")


def svi_config(**kw):
    doc = {
        "dataset_id": "svi",
        "foi_kind": "region",
        "foi_class": "kwg-ont:AdminRegion_3",
        "foi_key_column": "key",
        "label_column": "name",
        "properties": [
            {"column": "svi_score",
             "observation_class": "kwg-ont:VulnerabilityObservation",
             "result": "simple"},
            {"column": "poverty_rate",
             "observation_class": "kwg-ont:HealthObservation",
             "result": {"quantity": {"unit": "qudt-unit:PERCENT"}}},
        ],
        "integration_level": 6,
    }
    doc.update(kw)
    return ingest.MappingConfig.from_json(doc)


def rows3():
    return [
        {"key": "A", "name": "Alpha", "svi_score": "0.9", "poverty_rate": "12.0"},
        {"key": "B", "name": "Beta", "svi_score": "0.5", "poverty_rate": "8.5"},
        {"key": "C", "name": "Gamma", "svi_score": "0.1", "poverty_rate": "3.0"},
    ]


def test_three_rows_two_columns_no_blanks():
    result = ingest.ingest_table(rows3(), svi_config(), MANIFEST)
    assert len(result.features) == 3
    assert len(result.observations) == 6
    assert len(result.properties) == 2
    assert result.skipped_blank_cells == 0


def test_blank_cell_skips_one_observation():
    rows = rows3()
    rows[1]["poverty_rate"] = ""
    result = ingest.ingest_table(rows, svi_config(), MANIFEST)
    assert len(result.observations) == 5
    assert result.skipped_blank_cells == 1


def test_vulnerability_observation_class_applied():
    result = ingest.ingest_table(rows3(), svi_config(), MANIFEST)
    classes = {o.class_iri for o in result.observations}
    assert kg.KWG_ONT.VulnerabilityObservation in classes
    svi_obs = [o for o in result.observations
               if o.class_iri == kg.KWG_ONT.VulnerabilityObservation]
    assert all(isinstance(o.result, kg.Literal) for o in svi_obs)


def test_missing_column_is_an_error():
    rows = [{"key": "A", "name": "x", "svi_score": "1"}]
    with pytest.raises(ingest.IngestError, match="poverty_rate"):
        ingest.ingest_table(rows, svi_config(), MANIFEST)


def test_duplicate_foi_key_is_an_error_not_a_merge():
    rows = rows3() + [rows3()[0]]
    with pytest.raises(ingest.IngestError, match="duplicate FOI key"):
        ingest.ingest_table(rows, svi_config(), MANIFEST)


def test_non_numeric_quantity_is_an_error():
    rows = rows3()
    rows[0]["poverty_rate"] = "lots"
    with pytest.raises(ingest.IngestError, match="not numeric"):
        ingest.ingest_table(rows, svi_config(), MANIFEST)


def test_ingest_is_idempotent():
    a = ingest.ingest_table(rows3(), svi_config(), MANIFEST)
    b = ingest.ingest_table(rows3(), svi_config(), MANIFEST)
    assert kg.serialize_ntriples(a.to_triples()) == kg.serialize_ntriples(b.to_triples())


def test_triple_totals_match_emission_formulas():
    rows = rows3()
    rows[2]["svi_score"] = ""
    result = ingest.ingest_table(rows, svi_config(), MANIFEST)
    triples = result.to_triples()
    n_simple = sum(1 for o in result.observations if isinstance(o.result, kg.Literal))
    n_quantity = len(result.observations) - n_simple
    want = (
        3 * 3                        # features: class + kind + label
        + n_simple * 4 + n_quantity * 7
        + len(result.observations)   # isFeatureOfInterestOf links
        + 2 * 3                      # observable properties
        + 6                          # dataset subgraph incl. license, no creator
    )
    assert len(set(triples)) == want


def test_geojson_rows_and_geometry_formats():
    fc = {
        "type": "FeatureCollection",
        "features": [
            {"type": "Feature",
             "properties": {"key": "A", "name": "Alpha", "svi_score": "0.9",
                            "poverty_rate": "1.0"},
             "geometry": {"type": "Point", "coordinates": [10.0, 20.0]}},
        ],
    }
    rows = ingest.geojson_feature_rows(fc)
    cfg = svi_config(geometry={"column": "geometry", "format": "geojson"})
    result = ingest.ingest_table(rows, cfg, MANIFEST)
    assert result.features[0].geometry == geom.point(10.0, 20.0)


def test_simple_result_literal_typing():
    rows = [
        {"key": "A", "name": "x", "svi_score": "0.25", "poverty_rate": "1"},
        {"key": "B", "name": "y", "svi_score": "high", "poverty_rate": "2"},
    ]
    result = ingest.ingest_table(rows, svi_config(), MANIFEST)
    simple = {o.feature_of_interest.value.rsplit("/", 1)[-1]: o.result
              for o in result.observations
              if o.class_iri == kg.KWG_ONT.VulnerabilityObservation}
    assert simple["A"].datatype == kg.XSD.double
    assert simple["B"].datatype == kg.XSD.string


# ---------------------------------------------------------------------------
# Spatial integration


def _cell_union_feature(level, ncells, label="county"):
    anchor = dgg.cell_from_point(dgg.LatLng(30.45, -91.15), level)
    face = anchor.face
    i = j = 0
    for d in anchor.path:
        i = (i << 1) | (d & 1)
        j = (j << 1) | (d >> 1)
    n = 1 << level

    def corner(ii, jj):
        xyz = dgg._face_uv_to_xyz(face, 2.0 * (ii / n) - 1.0, 2.0 * (jj / n) - 1.0)
        ll = dgg._xyz_to_latlng(*dgg._norm3(*xyz))
        return (ll.lng, ll.lat)

    ring = [corner(i + k, j) for k in range(ncells + 1)]
    ring += [corner(i + ncells - k, j + 1) for k in range(ncells + 1)]
    ring.append(ring[0])
    cells = []
    for k in range(ncells):
        path = []
        for bit in range(level - 1, -1, -1):
            path.append((((j >> bit) & 1) << 1) | (((i + k) >> bit) & 1))
        cells.append(dgg.CellId(face, level, tuple(path)))
    feature = kg.Feature(iri=kg.mint_iri("region", label), kind="region",
                         class_iri=kg.KWG_ONT.AdminRegion_3, label=label,
                         geometry=geom.polygon([ring]))
    return feature, cells


def test_cell_union_county_yields_exact_within_relations():
    county, cells = _cell_union_feature(6, 4)
    result = ingest.integrate_spatial([county], 6)
    store_triples = set(result.relation_triples)
    for cell in cells:
        assert kg.Triple(kg.mint_cell_iri(cell), kg.KWG_ONT.sfWithin,
                         county.iri) in store_triples
        assert kg.Triple(county.iri, kg.KWG_ONT.sfContains,
                         kg.mint_cell_iri(cell)) in store_triples
    withins = [t for t in store_triples if t.p == kg.KWG_ONT.sfWithin]
    assert len(withins) == 4


def test_point_hazard_relates_to_exactly_one_cell():
    hazard = kg.Feature(iri=kg.mint_iri("hazard", "spark"), kind="hazard",
                        class_iri=kg.KWG_ONT.FireEvent, label="spark",
                        geometry=geom.point(-91.0, 30.0))
    result = ingest.integrate_spatial([hazard], 7)
    contains = [t for t in result.relation_triples
                if t.p == kg.KWG_ONT.sfContains]
    assert len(contains) == 1
    assert len(result.cell_features) == 1
    token = result.cell_features[0].label
    assert dgg.cell_from_token(token) == dgg.cell_from_point(dgg.LatLng(30.0, -91.0), 7)


def test_disjoint_regions_emit_no_region_relations():
    a = kg.Feature(iri=kg.mint_iri("region", "ra"), kind="region",
                   class_iri=kg.KWG_ONT.AdminRegion_3, label="ra",
                   geometry=geom.box(0, 0, 1, 1))
    b = kg.Feature(iri=kg.mint_iri("region", "rb"), kind="region",
                   class_iri=kg.KWG_ONT.AdminRegion_3, label="rb",
                   geometry=geom.box(5, 5, 6, 6))
    result = ingest.integrate_spatial([a, b], 4)
    between = [t for t in result.relation_triples
               if {t.s, t.o} == {a.iri, b.iri}]
    assert between == []


def test_region_region_alias_and_hazard_no_alias():
    state = kg.Feature(iri=kg.mint_iri("region", "state"), kind="region",
                       class_iri=kg.KWG_ONT.AdminRegion_2, label="state",
                       geometry=geom.box(0, 0, 10, 10))
    county = kg.Feature(iri=kg.mint_iri("region", "county"), kind="region",
                        class_iri=kg.KWG_ONT.AdminRegion_3, label="county",
                        geometry=geom.box(2, 2, 4, 4))
    storm = kg.Feature(iri=kg.mint_iri("hazard", "storm"), kind="hazard",
                       class_iri=kg.KWG_ONT.HurricaneEvent, label="storm",
                       geometry=geom.box(3, 3, 12, 12))
    result = ingest.integrate_spatial([state, county, storm], 3)
    triples = set(result.relation_triples)
    assert kg.Triple(county.iri, kg.GEO.sfWithin, state.iri) in triples
    assert kg.Triple(county.iri, kg.KWG_ONT.sfWithin, state.iri) in triples
    assert kg.Triple(storm.iri, kg.KWG_ONT.sfOverlaps, state.iri) in triples
    assert kg.Triple(storm.iri, kg.GEO.sfOverlaps, state.iri) not in triples


def test_every_related_cell_is_materialized_once():
    county, _ = _cell_union_feature(6, 3)
    result = ingest.integrate_spatial([county, county], 6)
    cell_iris = [f.iri for f in result.cell_features]
    assert len(cell_iris) == len(set(cell_iris))
    related = {t.s for t in result.relation_triples
               if t.s.value.find("/s2.") >= 0}
    related |= {t.o for t in result.relation_triples
                if isinstance(t.o, kg.Iri) and t.o.value.find("/s2.") >= 0}
    assert related == set(cell_iris)


def test_antimeridian_feature_rejected():
    wrap = kg.Feature(iri=kg.mint_iri("hazard", "wrap"), kind="hazard",
                      class_iri=kg.KWG_ONT.HurricaneEvent, label="wrap",
                      geometry=geom.linestring([(179.0, 0.0), (-179.0, 1.0)]))
    with pytest.raises(ingest.AntimeridianError):
        ingest.integrate_spatial([wrap], 3)


def test_merge_features_prefers_geometry():
    bare = kg.Feature(iri=kg.mint_iri("region", "x"), kind="region",
                      class_iri=kg.KWG_ONT.AdminRegion_3, label="x")
    rich = kg.Feature(iri=kg.mint_iri("region", "x"), kind="region",
                      class_iri=kg.KWG_ONT.AdminRegion_3, label="x",
                      geometry=geom.box(0, 0, 1, 1))
    merged = ingest.merge_features([[bare], [rich]])
    assert len(merged) == 1
    assert merged[0].geometry is not None


# ---------------------------------------------------------------------------
# Raster


def _raster(values, bbox=(-91.4, 30.0, -90.9, 30.4), kind="continuous"):
    arr = np.asarray(values, dtype=float)
    return ingest.RasterLayer(bbox, arr.shape[0], arr.shape[1], arr, kind)


RASTER_MANIFEST = ingest.DatasetManifest(
    dataset_id="landcover", title="land cover", organization="USDA")


def test_constant_raster_means():
    raster = _raster(np.full((10, 10), 7.0))
    result = ingest.summarize_raster(raster, 8, kg.mint_property_iri("landcover", "mean"),
                                     None, RASTER_MANIFEST)
    assert result.observations
    for o in result.observations:
        assert float(o.result.lexical) == 7.0
        assert o.feature_of_interest.value.find("/s2.") >= 0


def test_categorical_mode_with_tie_break():
    raster = _raster([[1.0, 1.0], [2.0, 3.0]],
                     bbox=(-91.001, 30.0, -91.0, 30.001), kind="categorical")
    result = ingest.summarize_raster(raster, 5, kg.mint_property_iri("landcover", "mode"),
                                     None, RASTER_MANIFEST)
    assert len(result.observations) == 1
    assert float(result.observations[0].result.lexical) == 1.0
    tie = _raster([[4.0, 4.0], [2.0, 2.0]],
                  bbox=(-91.001, 30.0, -91.0, 30.001), kind="categorical")
    result = ingest.summarize_raster(tie, 5, kg.mint_property_iri("landcover", "mode"),
                                     None, RASTER_MANIFEST)
    assert float(result.observations[0].result.lexical) == 2.0


def test_raster_means_match_bucketing_oracle():
    rng = np.random.default_rng(97)
    values = rng.uniform(0.0, 100.0, size=(50, 50))
    raster = _raster(values)
    level = 8
    result = ingest.summarize_raster(raster, level,
                                     kg.mint_property_iri("landcover", "mean"),
                                     None, RASTER_MANIFEST)
    got = {o.feature_of_interest.value: float(o.result.lexical)
           for o in result.observations}

    buckets = {}
    minx, miny, maxx, maxy = raster.bbox
    dx = (maxx - minx) / raster.cols
    dy = (maxy - miny) / raster.rows
    for i in range(raster.rows):
        for j in range(raster.cols):
            center = dgg.LatLng(maxy - (i + 0.5) * dy, minx + (j + 0.5) * dx)
            cell = dgg.cell_from_point(center, level)
            buckets.setdefault(kg.mint_cell_iri(cell).value, []).append(values[i, j])
    assert set(got) == set(buckets)
    for iri, vals in buckets.items():
        assert got[iri] == pytest.approx(float(np.mean(vals)), rel=1e-12)


def test_raster_level_too_fine():
    raster = _raster(np.ones((4, 4)))
    with pytest.raises(ingest.IngestError, match="coarser level"):
        ingest.summarize_raster(raster, 13, kg.mint_property_iri("landcover", "mean"),
                                None, RASTER_MANIFEST)


def test_parse_ascii_grid_roundtrip():
    text = """ncols 3
nrows 2
xmin -91.4
ymin 30.0
xmax -91.1
ymax 30.2
kind continuous
1 2 3
4 5 6
"""
    raster = ingest.parse_ascii_grid(text)
    assert raster.rows == 2 and raster.cols == 3
    assert raster.values[1, 2] == 6.0
    with pytest.raises(ingest.IngestError):
        ingest.parse_ascii_grid("ncols 2\nnrows 2\nxmin 0\nymin 0\nxmax 1\nymax 1\n1 2 3")
