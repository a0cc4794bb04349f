// Planar lng/lat -> SVG pixel projection and GeoJSON path construction.
// The service speaks planar coordinates, so an equirectangular fit of the
// viewport bbox onto the SVG box is exact for its payloads.

import type { Bbox, GeoJsonGeometry, Position } from "./types.js";

export interface Projector {
  x(lng: number): number;
  y(lat: number): number;
  width: number;
  height: number;
}

export function makeProjector(bbox: Bbox, width: number, height: number): Projector {
  const [minLng, minLat, maxLng, maxLat] = bbox;
  const sx = width / (maxLng - minLng);
  const sy = height / (maxLat - minLat);
  return {
    width,
    height,
    x: (lng) => (lng - minLng) * sx,
    y: (lat) => (maxLat - lat) * sy, // SVG y grows downward
  };
}

export function bboxCenter(bbox: Bbox): Position {
  return [(bbox[0] + bbox[2]) / 2, (bbox[1] + bbox[3]) / 2];
}

export function centerBboxOn(bbox: Bbox, center: Position): Bbox {
  const halfW = (bbox[2] - bbox[0]) / 2;
  const halfH = (bbox[3] - bbox[1]) / 2;
  return [center[0] - halfW, center[1] - halfH, center[0] + halfW, center[1] + halfH];
}

export function geometryBbox(geometry: GeoJsonGeometry): Bbox {
  let minLng = Infinity;
  let minLat = Infinity;
  let maxLng = -Infinity;
  let maxLat = -Infinity;
  for (const [lng, lat] of iterPositions(geometry)) {
    minLng = Math.min(minLng, lng);
    minLat = Math.min(minLat, lat);
    maxLng = Math.max(maxLng, lng);
    maxLat = Math.max(maxLat, lat);
  }
  return [minLng, minLat, maxLng, maxLat];
}

export function* iterPositions(geometry: GeoJsonGeometry): Generator<Position> {
  const walk = function* (node: unknown): Generator<Position> {
    if (Array.isArray(node) && node.length >= 2 && typeof node[0] === "number") {
      yield [node[0] as number, node[1] as number];
      return;
    }
    if (Array.isArray(node)) {
      for (const child of node) yield* walk(child);
    }
  };
  yield* walk(geometry.coordinates);
}

function ringPath(ring: Position[], p: Projector): string {
  const parts = ring.map(
    ([lng, lat], i) =>
      `${i === 0 ? "M" : "L"}${p.x(lng).toFixed(2)},${p.y(lat).toFixed(2)}`,
  );
  return parts.join("") + "Z";
}

function linePath(line: Position[], p: Projector): string {
  return line
    .map(
      ([lng, lat], i) =>
        `${i === 0 ? "M" : "L"}${p.x(lng).toFixed(2)},${p.y(lat).toFixed(2)}`,
    )
    .join("");
}

/** SVG path data for any supported GeoJSON geometry. */
export function geometryToPath(geometry: GeoJsonGeometry, p: Projector): string {
  const coords = geometry.coordinates;
  switch (geometry.type) {
    case "Point": {
      const [lng, lat] = coords as Position;
      const r = 3;
      const cx = p.x(lng);
      const cy = p.y(lat);
      return `M${(cx - r).toFixed(2)},${cy.toFixed(2)}a${r},${r} 0 1,0 ${2 * r},0a${r},${r} 0 1,0 ${-2 * r},0`;
    }
    case "MultiPoint":
      return (coords as Position[])
        .map((pt) => geometryToPath({ type: "Point", coordinates: pt }, p))
        .join("");
    case "LineString":
      return linePath(coords as Position[], p);
    case "MultiLineString":
      return (coords as Position[][]).map((line) => linePath(line, p)).join("");
    case "Polygon":
      return (coords as Position[][]).map((ring) => ringPath(ring, p)).join("");
    case "MultiPolygon":
      return (coords as Position[][][])
        .map((rings) => rings.map((ring) => ringPath(ring, p)).join(""))
        .join("");
  }
}

/** Slippy-map tile references covering a bbox at an integer zoom. */
export function tilesForBbox(
  bbox: Bbox,
  zoom: number,
  template: string,
): { url: string; x: number; y: number; z: number }[] {
  if (!template) return [];
  const z = Math.max(0, Math.min(19, Math.floor(zoom)));
  const n = 2 ** z;
  const lngToX = (lng: number) => Math.floor(((lng + 180) / 360) * n);
  const latToY = (lat: number) => {
    const rad = (lat * Math.PI) / 180;
    return Math.floor(((1 - Math.asinh(Math.tan(rad)) / Math.PI) / 2) * n);
  };
  const x0 = Math.max(0, lngToX(bbox[0]));
  const x1 = Math.min(n - 1, lngToX(bbox[2]));
  const y0 = Math.max(0, latToY(bbox[3]));
  const y1 = Math.min(n - 1, latToY(bbox[1]));
  const out = [];
  for (let x = x0; x <= x1; x++) {
    for (let y = y0; y <= y1; y++) {
      out.push({
        x,
        y,
        z,
        url: template
          .replace("{z}", String(z))
          .replace("{x}", String(x))
          .replace("{y}", String(y)),
      });
    }
  }
  return out;
}
