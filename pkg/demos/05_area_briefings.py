"""Area briefings: "what is here?" for a county and a grid cell.

Run:  python3 demos/05_area_briefings.py
(For the HTTP version of the same payloads: `geokg serve` and then
GET /briefing?region=... or /briefing?cell=...)
"""

from geokg import fixtures, kgmodel as kg
from geokg.service import briefing_payload, compare_payload

store = fixtures.build_fixture_store()


def show(doc):
    target = doc["target"]
    print(f"briefing for {target['label']} ({target['kind']})")
    print(f"  related features: {len(doc['features'])}")
    for f in doc["features"]:
        if f["kind"] != "cell":
            print(f"    {f['relation']:<11} {f['kind']:<7} {f['label']}")
    cells = sum(1 for f in doc["features"] if f["kind"] == "cell")
    print(f"    ... plus {cells} grid cells")
    print("  observations:")
    for group in doc["observations"]:
        for item in group["items"]:
            unit = f" {item['unit'].rsplit('/', 1)[-1]}" if item["unit"] else ""
            print(f"    {group['property_label']:<14} {item['result']}{unit}"
                  f"  on {item['foi_label']}")
    print("  provenance:")
    for p in doc["provenance"]:
        print(f"    {p['title']}  ({p['organization_label']})")


show(briefing_payload(store, region=fixtures.COUNTY_A_IRI))

# A disjoint time window hides the hurricane and its observations.
print("\nsame briefing, restricted to calendar year 2023:")
doc = briefing_payload(store, region=fixtures.COUNTY_A_IRI,
                       window=("2023-01-01T00:00:00", "2023-12-31T23:59:59"))
print(f"  hazards now visible: "
      f"{[f['label'] for f in doc['features'] if f['kind'] == 'hazard']}")

# Compare two counties property by property.
print("\ncomparison (county A vs county B):")
doc = compare_payload(store, {"region": fixtures.COUNTY_A_IRI},
                      {"region": fixtures.COUNTY_B_IRI})
for prop in doc["comparison"]["properties"]:
    print(f"  {prop['property_label']:<14} A={prop['a'][0]:<7} B={prop['b'][0]}")
