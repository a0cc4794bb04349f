"""Dataset ingestion: tabular sources to kernel entities, grid integration.

A MappingConfig is a declarative JSON recipe: which column keys the
feature of interest, which columns become observations (simple literal or
unit-carrying quantity results), where geometry and time live, and the
grid level used for spatial integration. Ingesting the same rows with the
same config twice yields the identical triple set - every IRI is minted
deterministically.

Triple-count formulas (N data rows, M property columns, B blank cells):
  features        N x emit_feature(...)   (see kgmodel emission counts)
  observations    (N*M - B) x emit_observation(...)
  inverse links   (N*M - B) x 1           (foi isFeatureOfInterestOf obs)
  properties      M x 3
  metadata        emit_dataset_subgraph(...)
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from . import dgg
from . import geometry as geom
from . import kgmodel as kg


class IngestError(ValueError):
    """Bad config, malformed source data, or unsupported geometry."""


class AntimeridianError(IngestError):
    """Feature geometry spans the antimeridian (unsupported in v1)."""


@dataclass(frozen=True)
class PropertySpec:
    column: str
    observation_class: kg.Iri
    property_iri: Optional[kg.Iri] = None
    quantity_unit: Optional[kg.Iri] = None  # None = simple result

    @property
    def is_quantity(self) -> bool:
        return self.quantity_unit is not None


@dataclass(frozen=True)
class MappingConfig:
    dataset_id: str
    foi_kind: str  # "hazard" | "region"
    foi_class: kg.Iri
    foi_key_column: str
    label_column: Optional[str] = None
    geometry_column: Optional[str] = None
    geometry_format: str = "wkt"  # "wkt" | "geojson"
    time_mode: Optional[str] = None  # "instant" | "interval"
    time_columns: tuple[str, ...] = ()
    properties: tuple[PropertySpec, ...] = ()
    integration_level: int = 9

    def __post_init__(self):
        if self.foi_kind not in ("hazard", "region"):
            raise IngestError(f"foi_kind must be hazard or region: {self.foi_kind!r}")
        if self.geometry_format not in ("wkt", "geojson"):
            raise IngestError(f"unknown geometry format: {self.geometry_format!r}")
        if self.time_mode not in (None, "instant", "interval"):
            raise IngestError(f"unknown time mode: {self.time_mode!r}")
        if self.time_mode == "instant" and len(self.time_columns) != 1:
            raise IngestError("instant time needs exactly one column")
        if self.time_mode == "interval" and len(self.time_columns) != 2:
            raise IngestError("interval time needs begin and end columns")
        seen = set()
        for spec in self.properties:
            iri = spec.property_iri or kg.mint_property_iri(self.dataset_id, spec.column)
            if iri in seen:
                raise IngestError(f"duplicate property IRI in config: {iri}")
            seen.add(iri)
        if not 0 <= self.integration_level <= dgg.MAX_LEVEL:
            raise IngestError(f"integration level out of range: {self.integration_level}")

    def property_iri(self, spec: PropertySpec) -> kg.Iri:
        return spec.property_iri or kg.mint_property_iri(self.dataset_id, spec.column)

    @staticmethod
    def from_json(doc: dict) -> "MappingConfig":
        try:
            props = []
            for p in doc.get("properties", []):
                result = p.get("result", "simple")
                unit = None
                if isinstance(result, dict):
                    unit = kg.expand(result["quantity"]["unit"])
                elif result not in ("simple", "Simple"):
                    raise IngestError(f"unknown result mode: {result!r}")
                props.append(PropertySpec(
                    column=p["column"],
                    observation_class=kg.expand(p["observation_class"]),
                    property_iri=kg.expand(p["property"]) if "property" in p else None,
                    quantity_unit=unit,
                ))
            geometry = doc.get("geometry") or {}
            time_cfg = doc.get("time") or {}
            time_mode = time_cfg.get("mode")
            if time_mode == "instant":
                time_cols = (time_cfg["column"],)
            elif time_mode == "interval":
                time_cols = (time_cfg["begin_column"], time_cfg["end_column"])
            else:
                time_cols = ()
            return MappingConfig(
                dataset_id=doc["dataset_id"],
                foi_kind=doc["foi_kind"],
                foi_class=kg.expand(doc["foi_class"]),
                foi_key_column=doc["foi_key_column"],
                label_column=doc.get("label_column"),
                geometry_column=geometry.get("column"),
                geometry_format=geometry.get("format", "wkt"),
                time_mode=time_mode,
                time_columns=time_cols,
                properties=tuple(props),
                integration_level=doc.get("integration_level", 9),
            )
        except KeyError as exc:
            raise IngestError(f"mapping config is missing {exc}") from None


@dataclass(frozen=True)
class DatasetManifest:
    dataset_id: str
    title: str
    organization: str
    license: str = ""
    retrieved: str = ""
    creator: str = ""

    def __post_init__(self):
        if not self.dataset_id or not self.title:
            raise IngestError("manifest needs a dataset id and title")

    @staticmethod
    def from_json(doc: dict) -> "DatasetManifest":
        try:
            return DatasetManifest(
                dataset_id=doc["dataset_id"],
                title=doc["title"],
                organization=doc["organization"],
                license=doc.get("license", ""),
                retrieved=doc.get("retrieved", ""),
                creator=doc.get("creator", ""),
            )
        except KeyError as exc:
            raise IngestError(f"manifest is missing {exc}") from None

    def subgraph(self) -> kg.DatasetSubgraph:
        return kg.DatasetSubgraph(
            iri=kg.mint_iri("dataset", self.dataset_id),
            title=self.title,
            organization=kg.mint_iri("organization", self.organization),
            organization_label=self.organization,
            license=self.license,
            creator=self.creator,
        )


@dataclass
class IngestResult:
    features: list[kg.Feature]
    observations: list[kg.Observation]
    properties: list[kg.ObservableProperty]
    dataset: kg.DatasetSubgraph
    skipped_blank_cells: int = 0

    def to_triples(self) -> list[kg.Triple]:
        known = {f.iri for f in self.features} | {p.iri for p in self.properties}
        out: list[kg.Triple] = []
        for f in self.features:
            out.extend(kg.emit_feature(f))
        for o in self.observations:
            out.extend(kg.emit_observation(o, known_iris=known))
            out.append(kg.emit_foi_link(o))
        for p in self.properties:
            out.extend(kg.emit_observable_property(p))
        out.extend(kg.emit_dataset_subgraph(self.dataset))
        return out


def read_csv(text: str) -> tuple[list[str], list[dict[str, str]]]:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None:
        raise IngestError("CSV has no header row")
    rows = list(reader)
    return list(reader.fieldnames), rows


def geojson_feature_rows(doc: dict, geometry_column: str = "geometry") -> list[dict[str, str]]:
    """Flatten a GeoJSON FeatureCollection into CSV-like rows; the feature
    geometry lands in `geometry_column` as a GeoJSON string."""
    if doc.get("type") != "FeatureCollection":
        raise IngestError("expected a GeoJSON FeatureCollection")
    rows = []
    for feat in doc.get("features", []):
        row = {k: "" if v is None else str(v)
               for k, v in (feat.get("properties") or {}).items()}
        if feat.get("geometry"):
            row[geometry_column] = json.dumps(feat["geometry"])
        rows.append(row)
    return rows


def _parse_geometry(raw: str, fmt: str) -> geom.Geometry:
    if fmt == "wkt":
        return geom.parse_wkt(raw)
    return geom.from_geojson(json.loads(raw))


def _mint_foi(kind: str, key: str) -> kg.Iri:
    return kg.mint_iri(kind, key)


def _simple_literal(raw: str) -> kg.Literal:
    try:
        float(raw)
        return kg.Literal(raw, kg.XSD.double)
    except ValueError:
        return kg.string_literal(raw)


def ingest_table(rows: Sequence[dict], cfg: MappingConfig,
                 manifest: DatasetManifest) -> IngestResult:
    """Turn tabular rows into features + observations per the config.

    N rows with M property columns yield N features and N*M minus blank
    cells observations; duplicate FOI keys are an error, not a merge.
    """
    if manifest.dataset_id != cfg.dataset_id:
        raise IngestError("manifest and config disagree on dataset id")
    if rows:
        header = set(rows[0].keys())
        needed = {cfg.foi_key_column}
        needed.update(s.column for s in cfg.properties)
        if cfg.label_column:
            needed.add(cfg.label_column)
        if cfg.geometry_column:
            needed.add(cfg.geometry_column)
        needed.update(cfg.time_columns)
        missing = sorted(needed - header)
        if missing:
            raise IngestError(f"missing column(s) in source: {', '.join(missing)}")

    dataset = manifest.subgraph()
    properties = [
        kg.ObservableProperty(iri=cfg.property_iri(spec), label=spec.column,
                              dataset=dataset.iri)
        for spec in cfg.properties
    ]

    features: list[kg.Feature] = []
    observations: list[kg.Observation] = []
    seen_keys: set[str] = set()
    blanks = 0

    for lineno, row in enumerate(rows, 2):
        key = (row.get(cfg.foi_key_column) or "").strip()
        if not key:
            raise IngestError(f"row {lineno}: empty FOI key")
        if key in seen_keys:
            raise IngestError(f"row {lineno}: duplicate FOI key {key!r}")
        seen_keys.add(key)

        geometry = None
        if cfg.geometry_column:
            raw = (row.get(cfg.geometry_column) or "").strip()
            if raw:
                try:
                    geometry = _parse_geometry(raw, cfg.geometry_format)
                except (geom.GeometryError, json.JSONDecodeError) as exc:
                    raise IngestError(f"row {lineno}: bad geometry: {exc}") from None

        scope = None
        if cfg.time_mode == "instant":
            raw = (row.get(cfg.time_columns[0]) or "").strip()
            if raw:
                scope = kg.Instant(raw)
        elif cfg.time_mode == "interval":
            begin = (row.get(cfg.time_columns[0]) or "").strip()
            end = (row.get(cfg.time_columns[1]) or "").strip()
            if begin and end:
                scope = kg.Interval(begin, end)

        label = (row.get(cfg.label_column) or "").strip() if cfg.label_column else ""
        foi = _mint_foi(cfg.foi_kind, key)
        features.append(kg.Feature(
            iri=foi, kind=cfg.foi_kind, class_iri=cfg.foi_class,
            label=label or key, geometry=geometry, temporal_scope=scope,
        ))

        for spec in cfg.properties:
            raw = (row.get(spec.column) or "").strip()
            if not raw:
                blanks += 1
                continue
            if spec.is_quantity:
                try:
                    value = float(raw)
                except ValueError:
                    raise IngestError(
                        f"row {lineno}: column {spec.column!r} is not numeric: {raw!r}"
                    ) from None
                result = kg.QuantityValue(value, spec.quantity_unit)
            else:
                result = _simple_literal(raw)
            observations.append(kg.Observation(
                iri=kg.mint_observation_iri(cfg.dataset_id, key, spec.column),
                class_iri=spec.observation_class,
                feature_of_interest=foi,
                observed_property=cfg.property_iri(spec),
                result=result,
                phenomenon_time=scope,
            ))

    return IngestResult(features, observations, properties, dataset, blanks)


def merge_features(feature_lists: Iterable[Sequence[kg.Feature]]) -> list[kg.Feature]:
    """Unify features that several datasets mint under the same IRI,
    preferring the geometry-bearing description."""
    by_iri: dict[kg.Iri, kg.Feature] = {}
    for features in feature_lists:
        for f in features:
            current = by_iri.get(f.iri)
            if current is None or (current.geometry is None and f.geometry is not None):
                by_iri[f.iri] = f
    return [by_iri[iri] for iri in sorted(by_iri, key=lambda i: i.value)]


# ---------------------------------------------------------------------------
# Spatial integration


_PREDICATE_ORDER = (
    geom.SpatialPredicate.EQUALS,
    geom.SpatialPredicate.WITHIN,
    geom.SpatialPredicate.CONTAINS,
    geom.SpatialPredicate.OVERLAPS,
    geom.SpatialPredicate.CROSSES,
    geom.SpatialPredicate.TOUCHES,
)


def most_specific_predicate(a: geom.Geometry, b: geom.Geometry):
    """The single stored predicate for a non-disjoint pair (None when
    disjoint). Priority: equals > within/contains > overlaps > crosses >
    touches."""
    m = geom.relate(a, b)
    if geom.predicate(a, b, geom.SpatialPredicate.DISJOINT, m):
        return None
    for pred in _PREDICATE_ORDER:
        if geom.predicate(a, b, pred, m):
            return pred
    return geom.SpatialPredicate.INTERSECTS


def _check_antimeridian(f: kg.Feature) -> None:
    g = f.geometry
    pts = list(_geometry_edges(g))
    for (x1, _), (x2, _) in pts:
        if abs(x2 - x1) > 180.0:
            raise AntimeridianError(
                f"feature {f.iri} crosses the antimeridian; split it at lng 180"
            )


def _geometry_edges(g: geom.Geometry):
    if g.tag in ("LineString",):
        yield from zip(g.coordinates, g.coordinates[1:])
    elif g.tag == "MultiLineString":
        for line in g.coordinates:
            yield from zip(line, line[1:])
    elif g.tag == "Polygon":
        for ring in g.coordinates:
            yield from zip(ring, ring[1:])
    elif g.tag == "MultiPolygon":
        for rings in g.coordinates:
            for ring in rings:
                yield from zip(ring, ring[1:])


@dataclass
class IntegrationResult:
    relation_triples: list[kg.Triple]
    cell_features: list[kg.Feature]

    def to_triples(self) -> list[kg.Triple]:
        out = list(self.relation_triples)
        for f in self.cell_features:
            out.extend(kg.emit_feature(f))
        return out


def integrate_spatial(features: Sequence[kg.Feature], level: int) -> IntegrationResult:
    """Precompute grid alignment and feature-feature topology.

    Every feature with geometry is covered by level-`level` cells; each
    covered cell gets the SF predicate that actually holds against the
    feature (plus its inverse). All areal features are related pairwise;
    region-region pairs are additionally aliased into the geo: namespace.
    Referenced cells are materialized as Cell features exactly once.
    """
    cells: dict[dgg.CellId, kg.Feature] = {}
    triples: list[kg.Triple] = []

    located = [f for f in features if f.geometry is not None]
    for f in located:
        _check_antimeridian(f)

    for f in located:
        for cell in sorted(dgg.cover_geometry(f.geometry, level),
                           key=lambda c: c.packed):
            cell_geom = dgg.cell_geometry(cell)
            pred = most_specific_predicate(cell_geom, f.geometry)
            if pred is None:
                continue
            if cell not in cells:
                cells[cell] = kg.Feature(
                    iri=kg.mint_cell_iri(cell), kind="cell",
                    class_iri=kg.KWG_ONT.S2Cell, label=dgg.token(cell),
                    geometry=cell_geom,
                )
            triples.extend(kg.emit_spatial_relation(
                cells[cell].iri, pred, f.iri))

    areal = [f for f in located if f.geometry.is_areal()]
    for i in range(len(areal)):
        for j in range(i + 1, len(areal)):
            a, b = areal[i], areal[j]
            pred = most_specific_predicate(a.geometry, b.geometry)
            if pred is None:
                continue
            alias = a.kind == "region" and b.kind == "region"
            triples.extend(kg.emit_spatial_relation(a.iri, pred, b.iri,
                                                    alias_geo=alias))

    ordered_cells = [cells[c] for c in sorted(cells, key=lambda c: c.packed)]
    return IntegrationResult(triples, ordered_cells)


def features_from_store(store) -> list[kg.Feature]:
    """Rebuild hazard/region features from an already-materialized graph
    (the `relate` pipeline stage runs over merged graphs)."""
    out = []
    for kind, kind_class in (("hazard", kg.KWG_ONT.Hazard), ("region", kg.KWG_ONT.Region)):
        for t in store.match(None, kg.RDF.type, kind_class):
            iri = t.s
            class_iri = kind_class
            for tt in store.match(iri, kg.RDF.type, None):
                if tt.o != kind_class:
                    class_iri = tt.o
            labels = sorted(str(o) for o in store.objects(iri, kg.RDFS.label))
            geometry = None
            for gnode in store.objects(iri, kg.GEO.hasGeometry):
                for wkt in store.objects(gnode, kg.GEO.asWKT):
                    geometry = geom.parse_wkt(str(wkt))
            out.append(kg.Feature(
                iri=iri, kind=kind, class_iri=class_iri,
                label=labels[0] if labels else str(iri), geometry=geometry,
            ))
    out.sort(key=lambda f: f.iri.value)
    return out


# ---------------------------------------------------------------------------
# Raster summarization


@dataclass(frozen=True)
class RasterLayer:
    bbox: tuple[float, float, float, float]  # minlng, minlat, maxlng, maxlat
    rows: int
    cols: int
    values: np.ndarray  # shape (rows, cols); row 0 = northmost
    kind: str  # "continuous" | "categorical"

    def __post_init__(self):
        if self.kind not in ("continuous", "categorical"):
            raise IngestError(f"unknown raster kind: {self.kind!r}")
        if self.values.shape != (self.rows, self.cols):
            raise IngestError("raster value grid does not match rows x cols")
        minx, miny, maxx, maxy = self.bbox
        if minx >= maxx or miny >= maxy:
            raise IngestError("raster bbox is not well-ordered")

    def pixel_centers(self):
        minx, miny, maxx, maxy = self.bbox
        dx = (maxx - minx) / self.cols
        dy = (maxy - miny) / self.rows
        for i in range(self.rows):
            lat = maxy - (i + 0.5) * dy
            for j in range(self.cols):
                yield i, j, dgg.LatLng(lat, minx + (j + 0.5) * dx)


def parse_ascii_grid(text: str) -> RasterLayer:
    """Header lines `ncols`, `nrows`, `xmin`, `ymin`, `xmax`, `ymax`,
    optional `kind`, then nrows lines of ncols values (north row first)."""
    header: dict[str, str] = {}
    lines = [ln for ln in text.splitlines() if ln.strip()]
    idx = 0
    while idx < len(lines):
        parts = lines[idx].split()
        if len(parts) == 2 and parts[0].lower() in (
                "ncols", "nrows", "xmin", "ymin", "xmax", "ymax", "kind"):
            header[parts[0].lower()] = parts[1]
            idx += 1
        else:
            break
    try:
        cols = int(header["ncols"])
        rows = int(header["nrows"])
        bbox = (float(header["xmin"]), float(header["ymin"]),
                float(header["xmax"]), float(header["ymax"]))
    except KeyError as exc:
        raise IngestError(f"ASCII grid header is missing {exc}") from None
    kind = header.get("kind", "continuous")
    data = []
    for ln in lines[idx:]:
        data.extend(float(tok) for tok in ln.split())
    if len(data) != rows * cols:
        raise IngestError(
            f"ASCII grid has {len(data)} values, expected {rows * cols}")
    values = np.array(data, dtype=float).reshape(rows, cols)
    return RasterLayer(bbox, rows, cols, values, kind)


def summarize_raster(raster: RasterLayer, level: int, property_iri: kg.Iri,
                     unit: Optional[kg.Iri], manifest: DatasetManifest,
                     observation_class: Optional[kg.Iri] = None) -> IngestResult:
    """Per-cell summary observations: mean for continuous rasters, mode
    (smallest code wins ties) for categorical. Pixels belong to the cell
    containing their center; the FOI of each observation is the cell."""
    minx, miny, maxx, maxy = raster.bbox
    dx = (maxx - minx) / raster.cols
    dy = (maxy - miny) / raster.rows
    cell_width_deg = 90.0 / (1 << level)
    if cell_width_deg < min(dx, dy):
        raise IngestError(
            f"level {level} cells are smaller than one raster pixel; "
            "use a coarser level or a finer raster")

    obs_class = observation_class or kg.KWG_ONT.RasterSummaryObservation

    by_cell: dict[dgg.CellId, list[float]] = {}
    for i, j, center in raster.pixel_centers():
        cell = dgg.cell_from_point(center, level)
        by_cell.setdefault(cell, []).append(float(raster.values[i, j]))

    dataset = manifest.subgraph()
    prop = kg.ObservableProperty(iri=property_iri,
                                 label=property_iri.value.rsplit(".", 1)[-1],
                                 dataset=dataset.iri)
    features: list[kg.Feature] = []
    observations: list[kg.Observation] = []
    for cell in sorted(by_cell, key=lambda c: c.packed):
        vals = by_cell[cell]
        if raster.kind == "continuous":
            value = float(sum(vals) / len(vals))
        else:
            counts: dict[float, int] = {}
            for v in vals:
                counts[v] = counts.get(v, 0) + 1
            top = max(counts.values())
            value = min(code for code, n in counts.items() if n == top)
        token = dgg.token(cell)
        cell_feature = kg.Feature(
            iri=kg.mint_cell_iri(cell), kind="cell",
            class_iri=kg.KWG_ONT.S2Cell, label=token,
            geometry=dgg.cell_geometry(cell),
        )
        features.append(cell_feature)
        result = (kg.QuantityValue(value, unit) if unit is not None
                  else kg.Literal(repr(value), kg.XSD.double))
        observations.append(kg.Observation(
            iri=kg.mint_observation_iri(manifest.dataset_id, f"s2.{token}",
                                        prop.label),
            class_iri=obs_class,
            feature_of_interest=cell_feature.iri,
            observed_property=prop.iri,
            result=result,
        ))
    return IngestResult(features, observations, [prop], dataset)
