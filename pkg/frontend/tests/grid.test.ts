import { describe, expect, it } from "vitest";

import { makeProjector } from "../src/geo.js";
import { buildGridLayer, parentToken } from "../src/grid.js";
import type { Bbox, CellsResponse } from "../src/types.js";
import { loadFixture } from "./helpers.js";

const tokens = loadFixture<{ bbox: string }>("tokens.json");
const BBOX = tokens.bbox.split(",").map(Number) as unknown as Bbox;
const projector = makeProjector(BBOX, 900, 620);

describe("grid layer", () => {
  it("draws exactly the /cells payload, 1:1", () => {
    const payload = loadFixture<CellsResponse>("cells_level9.json");
    const layer = buildGridLayer(payload, projector);
    expect(layer.length).toBe(payload.features.length);
    layer.forEach((cell, i) => {
      const feature = payload.features[i]!;
      expect(cell.token).toBe(feature.properties.token);
      expect(cell.level).toBe(feature.properties.level);
      expect(cell.geometry).toEqual(feature.geometry);
      expect(cell.path.startsWith("M")).toBe(true);
    });
    // snapshot of the recorded viewport
    expect(layer.length).toBe(9);
    expect(layer.map((c) => c.token)).toMatchSnapshot();
  });

  it("renders nothing for an empty payload", () => {
    const layer = buildGridLayer({ type: "FeatureCollection", features: [] }, projector);
    expect(layer).toEqual([]);
  });

  it("one zoom level deeper quadruples the cell density", () => {
    const l9 = loadFixture<CellsResponse>("cells_level9.json");
    const l10 = loadFixture<CellsResponse>("cells_level10.json");
    expect(l9.features.length).toBe(9);
    expect(l10.features.length).toBe(25);
    // 4-ary subdivision: every deeper cell refines a coarser one from the
    // same response, and the count grows by at most 4x over the viewport
    // (boundary cells keep the ratio below the exact 4).
    const coarse = new Set(l9.features.map((f) => f.properties.token));
    for (const feature of l10.features) {
      expect(coarse.has(parentToken(feature.properties.token)!)).toBe(true);
    }
    const ratio = l10.features.length / l9.features.length;
    expect(ratio).toBeGreaterThan(1);
    expect(ratio).toBeLessThanOrEqual(4);
  });

  it("parentToken follows the token grammar", () => {
    expect(parentToken("2-3-013")).toBe("2-2-01");
    expect(parentToken("4-1-2")).toBe("4-0-");
    expect(parentToken("4-0-")).toBeNull();
    expect(parentToken("garbage")).toBeNull();
  });
});
