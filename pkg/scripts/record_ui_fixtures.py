#!/usr/bin/env python3
"""Record service payloads for the frontend's snapshot tests.

Every number the UI renders must be byte-traceable to one of these files,
so they are frozen in frontend/tests/fixtures/ and committed. Rerun after
changing the bundled fixture or the service payload shapes.
"""

import json
import pathlib

from fastapi.testclient import TestClient

from geokg import dgg, fixtures, kgmodel as kg
from geokg.service import create_app
from geokg.store import TripleStore

OUT = pathlib.Path(__file__).resolve().parent.parent / "frontend" / "tests" / "fixtures"

# Viewport around the fixture counties (see scripts/make_fixture.py).
BBOX = "-91.35,30.25,-90.95,30.55"


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    store = TripleStore()
    store.bulk_load(fixtures.build_fixture_triples())
    client = TestClient(create_app(store))

    def record(name, response):
        assert response.status_code in (200, 404), (name, response.status_code)
        doc = response.json()
        (OUT / name).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n",
                                encoding="utf-8")
        print(f"{name}: {len(json.dumps(doc))} bytes")
        return doc

    record("health.json", client.get("/health"))
    cells9 = record("cells_level9.json",
                    client.get("/cells", params={"bbox": BBOX, "level": 9}))
    cells10 = record("cells_level10.json",
                     client.get("/cells", params={"bbox": BBOX, "level": 10}))
    print("cell counts:", len(cells9["features"]), len(cells10["features"]))

    record("briefing_county_a.json",
           client.get("/briefing", params={"region": fixtures.COUNTY_A_IRI}))
    record("briefing_county_b.json",
           client.get("/briefing", params={"region": fixtures.COUNTY_B_IRI}))

    ocean = dgg.token(dgg.cell_from_point(dgg.LatLng(-44.0, -133.0), 13))
    record("briefing_ocean_cell.json",
           client.get("/briefing", params={"cell": ocean}))

    # A cell inside county A that the hurricane track crosses: its briefing
    # carries both the track (line) and the impact extent (polygon).
    track_iri = kg.mint_iri("hazard", "hurricane.ida_fixture.track")
    crossed = {t.s.value for t in store.match(None, kg.KWG_ONT.sfCrosses, track_iri)}
    within_a = {t.s.value for t in store.match(
        None, kg.KWG_ONT.sfWithin, kg.Iri(fixtures.COUNTY_A_IRI))}
    both = sorted(crossed & within_a)
    assert both, "expected a county-A cell crossed by the track"
    token = both[0].rsplit(".", 1)[-1]
    record("briefing_cell_in_a.json", client.get("/briefing", params={"cell": token}))
    (OUT / "tokens.json").write_text(json.dumps(
        {"cell_in_county_a": token, "ocean_cell": ocean,
         "county_a": fixtures.COUNTY_A_IRI, "county_b": fixtures.COUNTY_B_IRI,
         "bbox": BBOX}, indent=2) + "\n")

    record("compare_a_b.json",
           client.get("/compare", params={"a": fixtures.COUNTY_A_IRI,
                                          "b": fixtures.COUNTY_B_IRI}))
    record("datasets.json", client.get("/datasets"))

    svi_query = """SELECT ?county ?result WHERE {
  ?obs a kwg-ont:VulnerabilityObservation ;
    sosa:hasFeatureOfInterest ?county ;
    sosa:hasSimpleResult ?result .
}"""
    record("query_svi_by_county.json",
           client.post("/query", content=svi_query,
                       headers={"content-type": "text/plain"}))


if __name__ == "__main__":
    main()
