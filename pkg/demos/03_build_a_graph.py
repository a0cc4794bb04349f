"""From a CSV to a knowledge graph: ingest, integrate, serialize.

Run:  python3 demos/03_build_a_graph.py
"""

from geokg import ingest
from geokg import kgmodel as kg

# A tiny "wildfire" dataset. Each row becomes a hazard feature; each
# configured property column becomes one observation per row.
rows = [
    {"fire_id": "fire.creek_2020", "name": "Creek Fire",
     "wkt": "POLYGON ((-119.4 37.1, -119.1 37.1, -119.1 37.35, -119.4 37.35, -119.4 37.1))",
     "start": "2020-09-04", "end": "2020-12-24", "acres_burned": "379895"},
    {"fire_id": "fire.august_2020", "name": "August Complex",
     "wkt": "POLYGON ((-123.1 39.5, -122.6 39.5, -122.6 40.1, -123.1 40.1, -123.1 39.5))",
     "start": "2020-08-16", "end": "2020-11-12", "acres_burned": "1032648"},
]

cfg = ingest.MappingConfig.from_json({
    "dataset_id": "usfs_wildfires",
    "foi_kind": "hazard",
    "foi_class": "kwg-ont:WildfireEvent",
    "foi_key_column": "fire_id",
    "label_column": "name",
    "geometry": {"column": "wkt", "format": "wkt"},
    "time": {"mode": "interval", "begin_column": "start", "end_column": "end"},
    "properties": [
        {"column": "acres_burned",
         "observation_class": "kwg-ont:WildfireObservation",
         "result": {"quantity": {"unit": "qudt-unit:AC"}}},
    ],
    "integration_level": 7,
})
manifest = ingest.DatasetManifest(
    dataset_id="usfs_wildfires", title="Wildfire perimeters (demo)",
    organization="USFS", license="public domain")

result = ingest.ingest_table(rows, cfg, manifest)
print(f"{len(result.features)} hazards, {len(result.observations)} observations")

# Spatial integration aligns each hazard to the grid and relates hazards
# to each other; every referenced cell is materialized once.
integration = ingest.integrate_spatial(result.features, level=7)
print(f"{len(integration.cell_features)} level-7 cells touched, "
      f"{len(integration.relation_triples)} relation triples")

triples = kg.sort_triples(result.to_triples() + integration.to_triples())
print(f"{len(triples)} triples total\n")

print("Turtle excerpt:")
ttl = kg.serialize_turtle(triples)
for line in ttl.splitlines():
    if "fire.creek_2020 " in line or line.startswith("@prefix kwg"):
        print(" ", line[:110])
