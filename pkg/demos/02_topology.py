"""DE-9IM matrices, Simple Features predicates, and RCC-8.

Run:  python3 demos/02_topology.py
"""

from geokg import geometry as g

# Geometries parse from WKT (axis order: lng lat).
county = g.parse_wkt("POLYGON ((0 0, 4 0, 4 4, 0 4, 0 0))")
suburb = g.parse_wkt("POLYGON ((1 1, 3 1, 3 3, 1 3, 1 1))")
neighbor = g.parse_wkt("POLYGON ((4 0, 7 0, 7 4, 4 4, 4 0))")
far_away = g.parse_wkt("POLYGON ((10 10, 12 10, 12 12, 10 12, 10 10))")
track = g.parse_wkt("LINESTRING (-1 -1, 5 5)")

pairs = [
    ("suburb vs county  ", suburb, county),
    ("county vs neighbor", county, neighbor),
    ("county vs far_away", county, far_away),
    ("track  vs county  ", track, county),
]
print("DE-9IM intersection matrices:")
for label, a, b in pairs:
    print(f"  {label}: {g.relate(a, b)}")

print("\nSimple Features predicates:")
print("  suburb within county:  ", g.predicate(suburb, county, g.SpatialPredicate.WITHIN))
print("  county contains suburb:", g.predicate(county, suburb, g.SpatialPredicate.CONTAINS))
print("  county touches neighbor:", g.predicate(county, neighbor, g.SpatialPredicate.TOUCHES))
print("  track crosses county:  ", g.predicate(track, county, g.SpatialPredicate.CROSSES))
print("  county disjoint far_away:", g.predicate(county, far_away, g.SpatialPredicate.DISJOINT))

# RCC-8 gives each areal pair exactly one relation.
print("\nRCC-8 relations:")
for label, a, b in pairs[:3]:
    print(f"  {label}: {g.rcc8_of(a, b).value}")
overlapping = g.parse_wkt("POLYGON ((2 2, 6 2, 6 6, 2 6, 2 2))")
print(f"  county vs overlap : {g.rcc8_of(county, overlapping).value}")
print(f"  county vs county  : {g.rcc8_of(county, county).value}")
