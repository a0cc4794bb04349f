// Deployment knobs. The zoom->level table is fixed configuration: the
// grid level shown at zoom 10 is 9 and at zoom 14 is 13, with a monotone
// ramp in between (level = zoom - 1, clamped to the grid's range).

export interface UiConfig {
  serviceBase: string;
  tileUrlTemplate: string; // slippy {z}/{x}/{y} template; empty = no tiles
  zoomLevelTable: Record<number, number>;
}

function defaultZoomTable(): Record<number, number> {
  const table: Record<number, number> = {};
  for (let zoom = 0; zoom <= 22; zoom++) {
    table[zoom] = Math.min(30, Math.max(0, zoom - 1));
  }
  return table;
}

export const DEFAULT_CONFIG: UiConfig = {
  serviceBase: "http://127.0.0.1:8000",
  tileUrlTemplate: "",
  zoomLevelTable: defaultZoomTable(),
};

export function zoomToLevel(zoom: number, config: UiConfig = DEFAULT_CONFIG): number {
  const z = Math.max(0, Math.min(22, Math.round(zoom)));
  const level = config.zoomLevelTable[z];
  return level === undefined ? Math.max(0, z - 1) : level;
}
