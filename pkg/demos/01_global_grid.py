"""Tour of the discrete global grid.

Run:  python3 demos/01_global_grid.py
"""

from geokg import dgg
from geokg import geometry as geom

# Every point on Earth lives in exactly one cell per level. Level 0 is one
# of the six cube faces; each deeper level splits a cell into 4.
baton_rouge = dgg.LatLng(30.45, -91.15)

print("Baton Rouge across levels:")
for level in (0, 5, 9, 13):
    cell = dgg.cell_from_point(baton_rouge, level)
    print(f"  level {level:>2}: token {dgg.token(cell):<22} "
          f"area {dgg.cell_area_km2(cell):,.2f} km^2")

# Tokens round-trip, and the hierarchy is strict: truncating the path is
# the same as locating at a coarser level.
c13 = dgg.cell_from_point(baton_rouge, 13)
assert dgg.cell_from_token(dgg.token(c13)) == c13
assert c13.ancestor(9) == dgg.cell_from_point(baton_rouge, 9)
print("\ntoken round-trip and ancestor consistency hold")

# Cell areas partition the sphere: the 96 level-2 cells sum to the full
# Earth surface.
total = sum(dgg.cell_area_km2(c) for c in dgg.all_cells_at_level(2))
print(f"\nsum of all level-2 cell areas: {total/1e6:,.3f} million km^2")

# At level 13 (the resolution used for US data) a cell is ~1.27 km^2.
import random

rng = random.Random(0)
sample = [dgg.CellId(rng.randint(0, 5), 13,
                     tuple(rng.randint(0, 3) for _ in range(13)))
          for _ in range(5000)]
mean = sum(dgg.cell_area_km2(c) for c in sample) / len(sample)
print(f"mean level-13 cell area (5000 sampled): {mean:.4f} km^2")

# Covering: which level-9 cells intersect a bounding box around the city?
rect = geom.box(-91.3, 30.3, -91.0, 30.6)
cover = dgg.cover_geometry(rect, 9)
print(f"\n{len(cover)} level-9 cells cover a 0.3 deg box around Baton Rouge:")
for cell in sorted(cover, key=lambda c: c.packed)[:5]:
    print("  ", dgg.token(cell))
print("   ...")
