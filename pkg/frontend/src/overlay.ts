// Hazard overlay: track lines and areal extents drawn above the
// choropleth, sourced from the hazard features of a briefing payload.

import type { Briefing, GeoJsonGeometry } from "./types.js";

export interface HazardShape {
  iri: string;
  label: string;
  geometry: GeoJsonGeometry;
}

export interface HazardOverlay {
  lines: HazardShape[];
  polygons: HazardShape[];
}

export function extractHazardOverlay(briefing: Briefing): HazardOverlay {
  const lines: HazardShape[] = [];
  const polygons: HazardShape[] = [];
  for (const feature of briefing.features) {
    if (feature.kind !== "hazard" || !feature.geometry) continue;
    const shape = {
      iri: feature.iri,
      label: feature.label,
      geometry: feature.geometry,
    };
    if (feature.geometry.type === "LineString" || feature.geometry.type === "MultiLineString") {
      lines.push(shape);
    } else if (
      feature.geometry.type === "Polygon" ||
      feature.geometry.type === "MultiPolygon"
    ) {
      polygons.push(shape);
    }
  }
  return { lines, polygons };
}
