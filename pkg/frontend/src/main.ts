// Browser bootstrap: wires the pure modules to the DOM. All data shown
// comes from the service endpoints; this file only moves it around.

import { ApiClient, ApiError, LatestOnly } from "./api.js";
import { makeScale, valuesByRegion } from "./choropleth.js";
import { buildCompareModel, renderCompareHtml } from "./compare.js";
import { DEFAULT_CONFIG } from "./config.js";
import { geometryToPath, makeProjector, geometryBbox, bboxCenter, tilesForBbox } from "./geo.js";
import { buildGridLayer } from "./grid.js";
import { extractHazardOverlay } from "./overlay.js";
import { buildPanelModel, renderPanelHtml } from "./panel.js";
import {
  ViewState,
  applyGrid,
  gridFailed,
  initialState,
  selectAndCenter,
  selectTarget,
  setCompare,
  setViewport,
  toggleLayer,
} from "./state.js";
import type { Bbox, Briefing } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const WIDTH = 900;
const HEIGHT = 620;

const params = new URLSearchParams(window.location.search);
const config = {
  ...DEFAULT_CONFIG,
  serviceBase: params.get("service") ?? DEFAULT_CONFIG.serviceBase,
  tileUrlTemplate: params.get("tiles") ?? DEFAULT_CONFIG.tileUrlTemplate,
};
const api = new ApiClient(config.serviceBase);
const briefingRequests = new LatestOnly();

// Opening viewport: the bundled fixture's neighborhood.
let state: ViewState = initialState([-91.35, 30.25, -90.95, 30.55], 14);
let choroplethValues = new Map<string, number>();
let currentBriefing: Briefing | null = null;

const mapEl = document.getElementById("map") as unknown as SVGSVGElement;
const panelEl = document.getElementById("panel")!;
const bannerEl = document.getElementById("banner")!;
const statusEl = document.getElementById("status")!;
const tilesEl = document.getElementById("tiles")!;

function projector() {
  return makeProjector(state.viewport, WIDTH, HEIGHT);
}

function render() {
  bannerEl.textContent = state.error ?? "";
  bannerEl.style.display = state.error ? "block" : "none";
  statusEl.textContent = `zoom ${state.zoom} -> grid level ${state.level}; ` +
    `${state.gridCells.length} cells`;

  while (mapEl.firstChild) mapEl.removeChild(mapEl.firstChild);
  const p = projector();

  if (state.layers.has("choropleth") && currentBriefing) {
    const scale = choroplethValues.size ? makeScale(choroplethValues.values()) : null;
    for (const feature of currentBriefing.features) {
      if (feature.kind !== "region" || !feature.geometry || !scale) continue;
      const value = choroplethValues.get(feature.iri);
      if (value === undefined) continue;
      const path = document.createElementNS(SVG_NS, "path");
      path.setAttribute("d", geometryToPath(feature.geometry, p));
      path.setAttribute("fill", scale.color(value));
      path.setAttribute("fill-opacity", "0.6");
      path.setAttribute("stroke", "#7a5900");
      mapEl.appendChild(path);
    }
  }

  if (state.layers.has("grid")) {
    for (const cell of state.gridCells) {
      const path = document.createElementNS(SVG_NS, "path");
      path.setAttribute("d", cell.path);
      path.setAttribute("class", "cell");
      path.setAttribute("data-token", cell.token);
      if (state.selected?.type === "cell" && state.selected.token === cell.token) {
        path.setAttribute("class", "cell selected");
      }
      path.addEventListener("click", () => {
        state = selectTarget(state, { type: "cell", token: cell.token });
        refreshBriefing();
        render();
      });
      mapEl.appendChild(path);
    }
  }

  if (state.layers.has("hazards") && currentBriefing) {
    const overlay = extractHazardOverlay(currentBriefing);
    for (const shape of overlay.polygons) {
      const path = document.createElementNS(SVG_NS, "path");
      path.setAttribute("d", geometryToPath(shape.geometry, p));
      path.setAttribute("class", "hazard-extent");
      mapEl.appendChild(path);
    }
    for (const shape of overlay.lines) {
      const path = document.createElementNS(SVG_NS, "path");
      path.setAttribute("d", geometryToPath(shape.geometry, p));
      path.setAttribute("class", "hazard-track");
      mapEl.appendChild(path);
    }
  }

  renderTiles();
}

function renderTiles() {
  tilesEl.innerHTML = "";
  for (const tile of tilesForBbox(state.viewport, state.zoom, config.tileUrlTemplate)) {
    const img = document.createElement("img");
    img.src = tile.url;
    img.alt = "";
    tilesEl.appendChild(img);
  }
}

function renderPanel() {
  if (!currentBriefing) {
    panelEl.innerHTML = "<p class=\"empty\">Select a cell or region.</p>";
    return;
  }
  const model = buildPanelModel(currentBriefing);
  let html = renderPanelHtml(model);
  if (currentBriefing.comparison) {
    html += "<h3>Comparison</h3>" + renderCompareHtml(buildCompareModel(currentBriefing));
  }
  panelEl.innerHTML = html;
  for (const link of panelEl.querySelectorAll("a[data-feature]")) {
    link.addEventListener("click", (event) => {
      event.preventDefault();
      const iri = (link as HTMLElement).dataset.feature!;
      const feature = currentBriefing?.features.find((f) => f.iri === iri);
      const center = feature?.geometry
        ? bboxCenter(geometryBbox(feature.geometry))
        : undefined;
      state = center
        ? selectAndCenter(state, { type: "region", iri }, center)
        : selectTarget(state, { type: "region", iri });
      refreshGrid();
      refreshBriefing();
    });
  }
  for (const link of panelEl.querySelectorAll("a[data-compare]")) {
    link.addEventListener("click", (event) => {
      event.preventDefault();
      const iri = (link as HTMLElement).dataset.compare!;
      state = setCompare(state, { type: "region", iri });
      refreshBriefing();
    });
  }
}

async function refreshGrid() {
  try {
    const cells = await api.getCells(state.viewport, state.level);
    state = applyGrid(state, buildGridLayer(cells, projector()));
  } catch (err) {
    state = gridFailed(state, err instanceof ApiError ? err.message : String(err));
  }
  render();
}

async function refreshBriefing() {
  const selected = state.selected;
  if (!selected) {
    currentBriefing = null;
    renderPanel();
    return;
  }
  const target = selected.type === "cell" ? { cell: selected.token } : { region: selected.iri };
  const result = await briefingRequests.run((signal) =>
    state.compareWith && selected.type === "region"
      ? api.getCompare(
          selected.iri,
          state.compareWith.type === "region"
            ? state.compareWith.iri
            : state.compareWith.token,
          signal,
        )
      : api.getBriefing(target, state.window, signal),
  ).catch((err) => {
    state = gridFailed(state, err instanceof ApiError ? err.message : String(err));
    render();
    return null;
  });
  if (result === null) return; // aborted by a newer selection or failed
  currentBriefing = result;
  renderPanel();
  render();
}

async function loadChoropleth() {
  try {
    const results = await api.postQuery(
      `SELECT ?county ?result WHERE {
         ?obs a kwg-ont:VulnerabilityObservation ;
           sosa:hasFeatureOfInterest ?county ;
           sosa:hasSimpleResult ?result .
       }`,
    );
    choroplethValues = valuesByRegion(results);
  } catch {
    choroplethValues = new Map();
  }
}

function wireControls() {
  for (const id of ["grid", "choropleth", "hazards"]) {
    const box = document.getElementById(`layer-${id}`) as HTMLInputElement;
    box.checked = state.layers.has(id);
    box.addEventListener("change", () => {
      state = toggleLayer(state, id);
      render();
    });
  }
  document.getElementById("zoom-in")!.addEventListener("click", () => zoomBy(1));
  document.getElementById("zoom-out")!.addEventListener("click", () => zoomBy(-1));
}

function zoomBy(delta: number) {
  const [minLng, minLat, maxLng, maxLat] = state.viewport;
  const cx = (minLng + maxLng) / 2;
  const cy = (minLat + maxLat) / 2;
  const f = delta > 0 ? 0.5 : 2.0;
  const halfW = ((maxLng - minLng) / 2) * f;
  const halfH = ((maxLat - minLat) / 2) * f;
  const viewport: Bbox = [cx - halfW, cy - halfH, cx + halfW, cy + halfH];
  state = setViewport(state, viewport, state.zoom + delta);
  refreshGrid();
}

wireControls();
renderPanel();
void loadChoropleth().then(render);
void refreshGrid();
