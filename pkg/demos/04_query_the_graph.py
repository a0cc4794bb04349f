"""Querying the bundled fixture graph.

Run:  python3 demos/04_query_the_graph.py
"""

from geokg import fixtures
from geokg.query import run_query

store = fixtures.build_fixture_store()
print(f"fixture graph: {len(store)} triples\n")

# The bundled query joins grid cells, counties, a state, and the
# vulnerability observations attached to the counties.
text = fixtures.demo_query_text()
print(text)
header, rows = run_query(text, store)
print(f"-> {len(rows)} rows")
for row in sorted(rows, key=lambda r: (str(r["county"]), str(r["cell"]))):
    cell = str(row["cell"]).rsplit("/", 1)[-1]
    county = str(row["county"]).rsplit("/", 1)[-1]
    print(f"   {cell:<30} {county:<28} svi={row['result']}")

# FILTER narrows to the most vulnerable counties.
print("\ncounties with SVI above 0.5:")
_, rows = run_query("""
    SELECT DISTINCT ?county ?result WHERE {
      ?obs a kwg-ont:VulnerabilityObservation ;
        sosa:hasFeatureOfInterest ?county ;
        sosa:hasSimpleResult ?result .
      FILTER (?result > 0.5)
    }
""", store)
for row in rows:
    print(f"   {str(row['county']).rsplit('/', 1)[-1]}  svi={row['result']}")

# Provenance is always three hops away from an observation.
print("\nwho provided the vulnerability data?")
_, rows = run_query("""
    SELECT DISTINCT ?dataset ?org WHERE {
      ?obs a kwg-ont:VulnerabilityObservation ;
        sosa:observedProperty ?prop .
      ?prop kwg-ont:sourceDataset ?dataset .
      ?dataset kwg-ont:providedBy ?org .
    }
""", store)
for row in rows:
    print(f"   {row['dataset']}  <-  {row['org']}")
