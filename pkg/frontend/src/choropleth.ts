// Choropleth support: numeric values per region from a query result, and
// a yellow-to-red ramp scaled min-max over the visible values.

import type { QueryResults } from "./types.js";

/** Strip N-Triples quoting: <iri> -> iri, "lex"^^<dt> -> lex. */
export function termValue(term: string): string {
  if (term.startsWith("<") && term.endsWith(">")) return term.slice(1, -1);
  const m = /^"((?:[^"\\]|\\.)*)"/.exec(term);
  if (m) return (m[1] ?? "").replace(/\\(.)/g, "$1");
  return term;
}

export function valuesByRegion(
  results: QueryResults,
  regionVar = "county",
  valueVar = "result",
): Map<string, number> {
  const out = new Map<string, number>();
  for (const row of results.results.bindings) {
    const region = row[regionVar];
    const value = row[valueVar];
    if (region === undefined || value === undefined) continue;
    const num = Number(termValue(value));
    if (Number.isFinite(num)) out.set(termValue(region), num);
  }
  return out;
}

export interface ColorScale {
  min: number;
  max: number;
  color(value: number): string;
}

const LOW = [255, 255, 178] as const; // pale yellow
const HIGH = [189, 0, 38] as const; // deep red

export function makeScale(values: Iterable<number>): ColorScale {
  const all = [...values];
  const min = Math.min(...all);
  const max = Math.max(...all);
  return {
    min,
    max,
    color(value: number): string {
      const t = max > min ? Math.max(0, Math.min(1, (value - min) / (max - min))) : 0.5;
      const channel = (i: 0 | 1 | 2) => Math.round(LOW[i] + t * (HIGH[i] - LOW[i]));
      const hex = (n: number) => n.toString(16).padStart(2, "0");
      return `#${hex(channel(0))}${hex(channel(1))}${hex(channel(2))}`;
    },
  };
}
