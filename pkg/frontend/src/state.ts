// View state and its transitions. Invariants: the grid level is bound to
// zoom through the config table, at most one target is selected, and a
// failed refresh keeps the last good layer on screen behind an error
// banner.

import { DEFAULT_CONFIG, UiConfig, zoomToLevel } from "./config.js";
import { bboxCenter, centerBboxOn } from "./geo.js";
import type { GridCell } from "./grid.js";
import type { Bbox, Position } from "./types.js";

export type Target =
  | { type: "cell"; token: string }
  | { type: "region"; iri: string };

export interface ViewState {
  viewport: Bbox;
  zoom: number;
  level: number;
  selected: Target | null;
  compareWith: Target | null;
  layers: Set<string>; // "grid" | "choropleth" | "hazards"
  window: [string, string] | null;
  gridCells: GridCell[];
  error: string | null;
}

export const DEFAULT_LAYERS = ["grid", "choropleth", "hazards"] as const;

export function initialState(viewport: Bbox, zoom: number,
                             config: UiConfig = DEFAULT_CONFIG): ViewState {
  return {
    viewport,
    zoom,
    level: zoomToLevel(zoom, config),
    selected: null,
    compareWith: null,
    layers: new Set(DEFAULT_LAYERS),
    window: null,
    gridCells: [],
    error: null,
  };
}

export function setViewport(state: ViewState, viewport: Bbox, zoom: number,
                            config: UiConfig = DEFAULT_CONFIG): ViewState {
  return { ...state, viewport, zoom, level: zoomToLevel(zoom, config) };
}

export function selectTarget(state: ViewState, target: Target | null): ViewState {
  return { ...state, selected: target, compareWith: null };
}

/** Select a feature from the panel and re-center the viewport on it: the
 * feedback loop that makes the panel a steering control. */
export function selectAndCenter(state: ViewState, target: Target,
                                center: Position): ViewState {
  return {
    ...selectTarget(state, target),
    viewport: centerBboxOn(state.viewport, center),
  };
}

export function setCompare(state: ViewState, other: Target | null): ViewState {
  if (!state.selected) return state;
  return { ...state, compareWith: other };
}

export function toggleLayer(state: ViewState, layer: string): ViewState {
  const layers = new Set(state.layers);
  if (layers.has(layer)) {
    layers.delete(layer);
  } else {
    layers.add(layer);
  }
  return { ...state, layers };
}

export function applyGrid(state: ViewState, cells: GridCell[]): ViewState {
  return { ...state, gridCells: cells, error: null };
}

/** Endpoint failure: show a banner, keep the stale layer. */
export function gridFailed(state: ViewState, message: string): ViewState {
  return { ...state, error: message };
}

export function clearError(state: ViewState): ViewState {
  return { ...state, error: null };
}

export function setWindow(state: ViewState, window: [string, string] | null): ViewState {
  return { ...state, window };
}

export function viewportCenter(state: ViewState): Position {
  return bboxCenter(state.viewport);
}
