import { describe, expect, it } from "vitest";

import { extractHazardOverlay } from "../src/overlay.js";
import type { Briefing } from "../src/types.js";
import { loadFixture } from "./helpers.js";

describe("hazard overlay", () => {
  it("a cell crossed by the hurricane yields one track line and one extent polygon", () => {
    const briefing = loadFixture<Briefing>("briefing_cell_in_a.json");
    const overlay = extractHazardOverlay(briefing);
    expect(overlay.lines.length).toBe(1);
    expect(overlay.polygons.length).toBe(1);
    expect(overlay.lines[0]!.geometry.type).toBe("LineString");
    expect(overlay.polygons[0]!.geometry.type).toBe("Polygon");
    expect(overlay.lines[0]!.label).toContain("track");
    expect(overlay.polygons[0]!.label).toContain("extent");
  });

  it("no hazards means no overlay", () => {
    const briefing = loadFixture<Briefing>("briefing_ocean_cell.json");
    const overlay = extractHazardOverlay(briefing);
    expect(overlay.lines).toEqual([]);
    expect(overlay.polygons).toEqual([]);
  });

  it("overlay geometries are the payload geometries, untouched", () => {
    const briefing = loadFixture<Briefing>("briefing_cell_in_a.json");
    const overlay = extractHazardOverlay(briefing);
    for (const shape of [...overlay.lines, ...overlay.polygons]) {
      const source = briefing.features.find((f) => f.iri === shape.iri);
      expect(shape.geometry).toEqual(source!.geometry);
    }
  });
});
