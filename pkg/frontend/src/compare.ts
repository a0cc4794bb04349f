// Compare view: the property-aligned table from a /compare payload.

import type { Briefing } from "./types.js";

export interface CompareRow {
  property: string;
  unit: string | null;
  a: string;
  b: string;
}

export interface CompareModel {
  titleA: string;
  titleB: string;
  rows: CompareRow[];
}

export function buildCompareModel(payload: Briefing): CompareModel {
  const comparison = payload.comparison;
  if (!comparison) {
    return { titleA: payload.target.label, titleB: "", rows: [] };
  }
  return {
    titleA: payload.target.label,
    titleB: comparison.other.label,
    rows: comparison.properties.map((p) => ({
      property: p.property_label,
      unit: p.unit,
      a: p.a.join(", "),
      b: p.b.join(", "),
    })),
  };
}

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function renderCompareHtml(model: CompareModel): string {
  if (!model.rows.length) {
    return `<p class="empty">No shared observed properties.</p>`;
  }
  const parts = [
    `<table class="compare"><thead><tr><th></th>` +
      `<th>${esc(model.titleA)}</th><th>${esc(model.titleB)}</th></tr></thead><tbody>`,
  ];
  for (const row of model.rows) {
    parts.push(
      `<tr><td>${esc(row.property)}</td><td>${esc(row.a)}</td><td>${esc(row.b)}</td></tr>`,
    );
  }
  parts.push("</tbody></table>");
  return parts.join("");
}
