// Grid layer: a 1:1 view of the /cells payload. The UI never invents or
// drops cells; the drawn set IS the response.

import type { Projector } from "./geo.js";
import { geometryToPath } from "./geo.js";
import type { CellsResponse, GeoJsonGeometry } from "./types.js";

export interface GridCell {
  token: string;
  level: number;
  geometry: GeoJsonGeometry;
  path: string;
}

export function buildGridLayer(cells: CellsResponse, projector: Projector): GridCell[] {
  return cells.features.map((feature) => ({
    token: feature.properties.token,
    level: feature.properties.level,
    geometry: feature.geometry,
    path: geometryToPath(feature.geometry, projector),
  }));
}

/** Parent token of a cell token (face-level-path digits). */
export function parentToken(token: string): string | null {
  const m = /^(\d)-(\d{1,2})-([0-3]*)$/.exec(token);
  if (!m) return null;
  const level = Number(m[2]);
  if (level === 0) return null;
  const path = m[3] ?? "";
  return `${m[1]}-${level - 1}-${path.slice(0, -1)}`;
}
