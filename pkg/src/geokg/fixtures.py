"""The bundled Louisiana-style demo fixture.

Four small datasets (state boundary, county SVI scores, county health
profiles, a hurricane track with its impact extent) are ingested through
the regular pipeline and integrated on the level-13 grid. County polygons
are exact unions of grid-cell quads - county A holds 3 cells, county B
holds 2 - so the bundled vulnerability query has a known 5-row answer.
"""

from __future__ import annotations

import json
from importlib import resources

from . import ingest
from . import kgmodel as kg
from .store import TripleStore

FIXTURE_LEVEL = 13

DATASETS = ("gadm_states", "cdc_svi", "county_health", "noaa_hurricanes")

STATE_IRI = "http://stko-kwg.geog.ucsb.edu/lod/resource/Earth.NA.US.USA.19_1"
COUNTY_A_IRI = "http://stko-kwg.geog.ucsb.edu/lod/resource/Earth.NA.US.USA.19.17_1"
COUNTY_B_IRI = "http://stko-kwg.geog.ucsb.edu/lod/resource/Earth.NA.US.USA.19.24_1"
COUNTY_C_IRI = "http://stko-kwg.geog.ucsb.edu/lod/resource/Earth.NA.US.USA.25.1_1"


def _fixture_text(name: str) -> str:
    return resources.files("geokg").joinpath(f"data/fixture/{name}").read_text("utf-8")


def shapes_text() -> str:
    return resources.files("geokg").joinpath("data/shapes.json").read_text("utf-8")


def demo_query_text() -> str:
    return _fixture_text("vulnerability_query.rq")


def load_dataset(name: str) -> tuple[list[dict], ingest.MappingConfig, ingest.DatasetManifest]:
    _, rows = ingest.read_csv(_fixture_text(f"{name}.csv"))
    cfg = ingest.MappingConfig.from_json(json.loads(_fixture_text(f"{name}.config.json")))
    manifest = ingest.DatasetManifest.from_json(json.loads(_fixture_text(f"{name}.manifest.json")))
    return rows, cfg, manifest


def build_fixture_results() -> list[ingest.IngestResult]:
    out = []
    for name in DATASETS:
        rows, cfg, manifest = load_dataset(name)
        out.append(ingest.ingest_table(rows, cfg, manifest))
    return out


def build_fixture_triples(level: int = FIXTURE_LEVEL) -> list[kg.Triple]:
    results = build_fixture_results()
    triples: list[kg.Triple] = []
    for result in results:
        triples.extend(result.to_triples())
    features = ingest.merge_features([r.features for r in results])
    integration = ingest.integrate_spatial(features, level)
    triples.extend(integration.to_triples())
    for entry in json.loads(_fixture_text("thematic.json")):
        triples.extend(kg.emit_thematic_subgraph(kg.ThematicSubgraph(
            iri=kg.mint_iri("thematic", entry["slug"]),
            theme=entry["theme"],
            datasets=tuple(kg.mint_iri("dataset", d) for d in entry["datasets"]),
        )))
    return kg.sort_triples(triples)


def build_fixture_store(level: int = FIXTURE_LEVEL) -> TripleStore:
    store = TripleStore()
    store.bulk_load(build_fixture_triples(level))
    return store
