// Service payload shapes. The UI renders these verbatim: every number or
// geometry on screen must be traceable to one of these structures.

export type Position = [number, number];

export interface GeoJsonGeometry {
  type:
    | "Point"
    | "MultiPoint"
    | "LineString"
    | "MultiLineString"
    | "Polygon"
    | "MultiPolygon";
  coordinates: unknown;
}

export interface CellFeature {
  type: "Feature";
  geometry: GeoJsonGeometry;
  properties: { token: string; level: number };
}

export interface CellsResponse {
  type: "FeatureCollection";
  features: CellFeature[];
}

export interface BriefingTarget {
  kind: string;
  iri: string;
  label: string;
  token?: string;
  geometry: GeoJsonGeometry | null;
}

export interface BriefingFeature {
  iri: string;
  kind: string;
  class: string | null;
  label: string;
  relation: string;
  geometry: GeoJsonGeometry | null;
}

export interface ObservationItem {
  observation: string;
  foi: string;
  foi_label: string;
  result: string | null;
  unit: string | null;
  time: [string, string] | null;
}

export interface ObservationGroup {
  property: string;
  property_label: string;
  dataset: string | null;
  items: ObservationItem[];
}

export interface ProvenanceEntry {
  dataset: string;
  title: string;
  license: string | null;
  organization: string | null;
  organization_label: string | null;
}

export interface ComparisonProperty {
  property: string;
  property_label: string;
  unit: string | null;
  a: string[];
  b: string[];
}

export interface Comparison {
  other: BriefingTarget;
  other_observations: ObservationGroup[];
  other_provenance: ProvenanceEntry[];
  properties: ComparisonProperty[];
}

export interface Briefing {
  target: BriefingTarget;
  features: BriefingFeature[];
  observations: ObservationGroup[];
  provenance: ProvenanceEntry[];
  experts: unknown[];
  comparison: Comparison | null;
}

export interface DatasetsResponse {
  datasets: {
    dataset: string;
    title: string;
    license: string | null;
    organization: string | null;
    organization_label: string | null;
  }[];
  thematic: { subgraph: string; theme: string | null; datasets: string[] }[];
}

export interface QueryResults {
  head: { vars: string[] };
  results: { bindings: Record<string, string>[] };
}

export type Bbox = [number, number, number, number]; // minLng, minLat, maxLng, maxLat
