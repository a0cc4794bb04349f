// Briefing panel: a faithful view of one /briefing payload. Result
// strings, units and labels are rendered verbatim so that everything on
// screen is byte-traceable to the recorded response.

import type { Briefing } from "./types.js";

export interface PanelRow {
  property: string;
  result: string;
  unit: string;
  foi: string;
  time: string;
}

export interface PanelFeatureRow {
  iri: string;
  label: string;
  kind: string;
  relation: string;
}

export interface PanelModel {
  title: string;
  kind: string;
  empty: boolean;
  featureRows: PanelFeatureRow[];
  cellCount: number;
  observationRows: PanelRow[];
  provenanceRows: { title: string; organization: string }[];
}

function shortUnit(unit: string | null): string {
  if (!unit) return "";
  const idx = unit.lastIndexOf("/");
  return idx >= 0 ? unit.slice(idx + 1) : unit;
}

export function buildPanelModel(briefing: Briefing): PanelModel {
  const featureRows = briefing.features
    .filter((f) => f.kind !== "cell")
    .map((f) => ({ iri: f.iri, label: f.label, kind: f.kind, relation: f.relation }));
  const observationRows: PanelRow[] = [];
  for (const group of briefing.observations) {
    for (const item of group.items) {
      observationRows.push({
        property: group.property_label,
        result: item.result ?? "",
        unit: shortUnit(item.unit),
        foi: item.foi_label,
        time: item.time ? `${item.time[0]} .. ${item.time[1]}` : "",
      });
    }
  }
  return {
    title: briefing.target.label,
    kind: briefing.target.kind,
    empty: briefing.features.length === 0 && briefing.observations.length === 0,
    featureRows,
    cellCount: briefing.features.filter((f) => f.kind === "cell").length,
    observationRows,
    provenanceRows: briefing.provenance.map((p) => ({
      title: p.title,
      organization: p.organization_label ?? "",
    })),
  };
}

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderPanelHtml(model: PanelModel): string {
  if (model.empty) {
    return (
      `<h2>${esc(model.title)}</h2>` +
      `<p class="empty">No data here: nothing is related to this ${esc(model.kind)}.</p>`
    );
  }
  const parts = [`<h2>${esc(model.title)}</h2>`, `<p class="kind">${esc(model.kind)}</p>`];
  if (model.featureRows.length || model.cellCount) {
    parts.push("<h3>Related features</h3><ul class=\"features\">");
    for (const row of model.featureRows) {
      const compare =
        row.kind === "region"
          ? ` <a href="#" class="vs" data-compare="${esc(row.iri)}">vs</a>`
          : "";
      parts.push(
        `<li><a href="#" data-feature="${esc(row.iri)}">${esc(row.label)}</a> ` +
          `<span class="rel">${esc(row.relation)}</span> <span class="kind">${esc(row.kind)}</span>${compare}</li>`,
      );
    }
    if (model.cellCount) {
      parts.push(`<li class="cells">${model.cellCount} grid cells</li>`);
    }
    parts.push("</ul>");
  }
  if (model.observationRows.length) {
    parts.push("<h3>Observations</h3><table class=\"observations\"><tbody>");
    for (const row of model.observationRows) {
      parts.push(
        `<tr><td>${esc(row.property)}</td><td class="result">${esc(row.result)}</td>` +
          `<td>${esc(row.unit)}</td><td>${esc(row.foi)}</td><td>${esc(row.time)}</td></tr>`,
      );
    }
    parts.push("</tbody></table>");
  }
  if (model.provenanceRows.length) {
    parts.push("<h3>Sources</h3><ul class=\"provenance\">");
    for (const row of model.provenanceRows) {
      parts.push(`<li>${esc(row.title)} (${esc(row.organization)})</li>`);
    }
    parts.push("</ul>");
  }
  parts.push('<h3 class="experts">Experts</h3><p class="experts-empty">none listed</p>');
  return parts.join("");
}
