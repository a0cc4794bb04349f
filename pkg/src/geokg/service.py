"""HTTP geo-enrichment service: area briefings, comparison, query, tiles.

A briefing answers "what is here?" for a grid cell or region target: the
features related to it through stored spatial-relation triples, the
observations attached to it and to those related features, and the
provenance (dataset + organization) behind every observed property. The
service only reads a loaded store snapshot; each section of the payload is
reproducible with a documented query (see README) - the endpoint adds no
information of its own.
"""

from __future__ import annotations

import json
from typing import Optional

from fastapi import FastAPI, Query, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import dgg
from . import geometry as geom
from . import kgmodel as kg
from .query import QueryError, UnsupportedQueryFeature, run_query, results_to_json
from .store import TripleStore

_SF_LOCALS = ("sfEquals", "sfIntersects", "sfTouches", "sfWithin",
              "sfContains", "sfOverlaps", "sfCrosses")
_MAX_TILE_CELLS = 20000


class ServiceError(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status
        self.message = message


def _feature_kind(store: TripleStore, iri: kg.Iri) -> str:
    types = {t.o for t in store.match(iri, kg.RDF.type, None)}
    if kg.KWG_ONT.S2Cell in types:
        return "cell"
    if kg.KWG_ONT.Hazard in types:
        return "hazard"
    if kg.KWG_ONT.Region in types:
        return "region"
    return "feature"


def _feature_class(store: TripleStore, iri: kg.Iri) -> Optional[str]:
    kind_classes = {kg.KWG_ONT.Hazard, kg.KWG_ONT.Region, kg.KWG_ONT.Cell}
    for t in store.match(iri, kg.RDF.type, None):
        if t.o not in kind_classes:
            return str(t.o)
    return None


def _label(store: TripleStore, iri: kg.Iri) -> str:
    labels = sorted(str(o) for o in store.objects(iri, kg.RDFS.label))
    return labels[0] if labels else str(iri)


def _geometry_geojson(store: TripleStore, iri: kg.Iri) -> Optional[dict]:
    for gnode in store.objects(iri, kg.GEO.hasGeometry):
        for wkt in store.objects(gnode, kg.GEO.asWKT):
            try:
                return geom.to_geojson(geom.parse_wkt(str(wkt)))
            except geom.GeometryError:
                return None
    return None


def _temporal_scope(store: TripleStore, iri: kg.Iri):
    for node in store.objects(iri, kg.KWG_ONT.hasTemporalScope):
        begin = end = None
        for o in store.objects(node, kg.TIME.inXSDDateTime):
            begin = end = str(o)
        for o in store.objects(node, kg.TIME.hasBeginning):
            begin = str(o)
        for o in store.objects(node, kg.TIME.hasEnd):
            end = str(o)
        if begin and end:
            return (begin, end)
    return None


def _phenomenon_time(store: TripleStore, obs: kg.Iri):
    for node in store.objects(obs, kg.SOSA.phenomenonTime):
        begin = end = None
        for o in store.objects(node, kg.TIME.inXSDDateTime):
            begin = end = str(o)
        for o in store.objects(node, kg.TIME.hasBeginning):
            begin = str(o)
        for o in store.objects(node, kg.TIME.hasEnd):
            end = str(o)
        if begin and end:
            return (begin, end)
    return None


def _window_overlaps(span, window) -> bool:
    if window is None or span is None:
        return True
    return span[0] <= window[1] and window[0] <= span[1]


def _result_of(store: TripleStore, obs: kg.Iri):
    for o in store.objects(obs, kg.SOSA.hasSimpleResult):
        return (str(o), None)
    for node in store.objects(obs, kg.SOSA.hasResult):
        value = unit = None
        for v in store.objects(node, kg.QUDT_UNIT.term("numericValue")):
            value = str(v)
        for u in store.objects(node, kg.QUDT_UNIT.term("unit")):
            unit = str(u)
        return (value, unit)
    return (None, None)


def resolve_target(store: TripleStore, cell: Optional[str],
                   region: Optional[str]) -> dict:
    if (cell is None) == (region is None):
        raise ServiceError(400, "pass exactly one of cell= or region=")
    if cell is not None:
        try:
            cid = dgg.cell_from_token(cell)
        except dgg.DggError as exc:
            raise ServiceError(400, str(exc)) from None
        iri = kg.mint_cell_iri(cid)
        return {"kind": "cell", "iri": str(iri), "token": cell,
                "label": cell,
                "geometry": geom.to_geojson(dgg.cell_geometry(cid)),
                "_iri": iri}
    try:
        iri = kg.Iri(region)
    except kg.KgError as exc:
        raise ServiceError(400, str(exc)) from None
    if not store.match(iri, kg.RDF.type, None):
        raise ServiceError(404, f"unknown region: {region}")
    return {"kind": _feature_kind(store, iri), "iri": region,
            "label": _label(store, iri),
            "geometry": _geometry_geojson(store, iri), "_iri": iri}


def _related_features(store: TripleStore, target: kg.Iri, window) -> list[dict]:
    related: dict[str, dict] = {}
    for local in _SF_LOCALS:
        pred = kg.KWG_ONT.term(local)
        for t in store.match(target, pred, None):
            related.setdefault(str(t.o), {"iri": t.o, "relation": local})
        for t in store.match(None, pred, target):
            inverse = kg._SF_INVERSE[local]
            related.setdefault(str(t.s), {"iri": t.s, "relation": inverse})
    out = []
    for key in sorted(related):
        iri = related[key]["iri"]
        if not isinstance(iri, kg.Iri):
            continue
        scope = _temporal_scope(store, iri)
        if not _window_overlaps(scope, window):
            continue
        out.append({
            "iri": str(iri),
            "kind": _feature_kind(store, iri),
            "class": _feature_class(store, iri),
            "label": _label(store, iri),
            "relation": related[key]["relation"],
            "geometry": _geometry_geojson(store, iri),
        })
    return out


def _observations_for(store: TripleStore, fois: list[kg.Iri], window) -> list[dict]:
    groups: dict[str, dict] = {}
    for foi in fois:
        for t in store.match(foi, kg.SOSA.isFeatureOfInterestOf, None):
            obs = t.o
            span = _phenomenon_time(store, obs)
            if not _window_overlaps(span, window):
                continue
            props = store.objects(obs, kg.SOSA.observedProperty)
            if not props:
                continue
            prop = props[0]
            value, unit = _result_of(store, obs)
            group = groups.setdefault(str(prop), {
                "property": str(prop),
                "property_label": _label(store, prop),
                "dataset": None,
                "items": [],
            })
            for ds in store.objects(prop, kg.KWG_ONT.sourceDataset):
                group["dataset"] = str(ds)
            group["items"].append({
                "observation": str(obs),
                "foi": str(foi),
                "foi_label": _label(store, foi),
                "result": value,
                "unit": unit,
                "time": list(span) if span else None,
            })
    out = []
    for key in sorted(groups):
        group = groups[key]
        group["items"].sort(key=lambda item: (item["foi"], item["observation"]))
        out.append(group)
    return out


def _provenance_for(store: TripleStore, observation_groups: list[dict]) -> list[dict]:
    datasets = {}
    for group in observation_groups:
        prop = kg.Iri(group["property"])
        for ds in store.objects(prop, kg.KWG_ONT.sourceDataset):
            entry = datasets.setdefault(str(ds), {
                "dataset": str(ds),
                "title": _label(store, ds),
                "license": None,
                "organization": None,
                "organization_label": None,
            })
            for lic in store.objects(ds, kg.KWG_ONT.license):
                entry["license"] = str(lic)
            for org in store.objects(ds, kg.KWG_ONT.providedBy):
                entry["organization"] = str(org)
                entry["organization_label"] = _label(store, org)
    return [datasets[k] for k in sorted(datasets)]


def briefing_payload(store: TripleStore, cell: Optional[str] = None,
                     region: Optional[str] = None,
                     window: Optional[tuple[str, str]] = None) -> dict:
    """Area briefing for one target; the machine answer to "what is here".

    Every section is the result of plain pattern matching over the stored
    triples: features via spatial-relation triples touching the target,
    observations via isFeatureOfInterestOf on the target and its related
    features, provenance via the 3-hop property->dataset->organization
    path.
    """
    target = resolve_target(store, cell, region)
    target_iri = target.pop("_iri")
    features = _related_features(store, target_iri, window)
    fois = [target_iri] + [kg.Iri(f["iri"]) for f in features]
    observations = _observations_for(store, fois, window)
    provenance = _provenance_for(store, observations)
    return {
        "target": target,
        "features": features,
        "observations": observations,
        "provenance": provenance,
        "experts": [],
        "comparison": None,
    }


def compare_payload(store: TripleStore, a: dict, b: dict) -> dict:
    """Pair two briefings property-by-property on the targets' own
    observations."""
    briefing = briefing_payload(store, **a)
    other = briefing_payload(store, **b)

    def own_results(payload):
        owned = {}
        for group in payload["observations"]:
            vals = [item["result"] for item in group["items"]
                    if item["foi"] == payload["target"]["iri"]]
            if vals:
                owned[group["property"]] = {
                    "label": group["property_label"],
                    "unit": next((item["unit"] for item in group["items"]
                                  if item["foi"] == payload["target"]["iri"]), None),
                    "values": vals,
                }
        return owned

    mine, theirs = own_results(briefing), own_results(other)
    shared = sorted(set(mine) & set(theirs))
    briefing["comparison"] = {
        "other": other["target"],
        "other_observations": other["observations"],
        "other_provenance": other["provenance"],
        "properties": [
            {
                "property": prop,
                "property_label": mine[prop]["label"],
                "unit": mine[prop]["unit"],
                "a": mine[prop]["values"],
                "b": theirs[prop]["values"],
            }
            for prop in shared
        ],
    }
    return briefing


def _parse_window(start: Optional[str], end: Optional[str]):
    if start is None and end is None:
        return None
    try:
        begin = kg.Instant(start).at if start else "0001-01-01T00:00:00"
        finish = kg.Instant(end).at if end else "9999-12-31T23:59:59"
    except kg.KgError as exc:
        raise ServiceError(400, f"malformed time window: {exc}") from None
    if begin > finish:
        raise ServiceError(400, "time window from= must not be after to=")
    return (begin, finish)


def create_app(store: TripleStore, cors_origins: Optional[list[str]] = None) -> FastAPI:
    app = FastAPI(title="geokg", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=cors_origins or ["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(ServiceError)
    async def _service_error(_req: Request, exc: ServiceError):
        return JSONResponse(status_code=exc.status, content={"error": exc.message})

    @app.get("/health")
    def health():
        return {"status": "ok", "triples": len(store)}

    @app.get("/briefing")
    def briefing(cell: Optional[str] = None, region: Optional[str] = None,
                 from_: Optional[str] = Query(None, alias="from"),
                 to: Optional[str] = None):
        window = _parse_window(from_, to)
        return briefing_payload(store, cell=cell, region=region, window=window)

    @app.get("/compare")
    def compare(a: Optional[str] = None, b: Optional[str] = None):
        if not a or not b:
            raise ServiceError(400, "pass a= and b= (cell tokens or region IRIs)")

        def as_target(value: str) -> dict:
            if dgg._TOKEN_RE.match(value):
                return {"cell": value}
            return {"region": value}

        return compare_payload(store, as_target(a), as_target(b))

    @app.get("/cells")
    def cells(bbox: str, level: int = 9):
        try:
            parts = [float(v) for v in bbox.split(",")]
        except ValueError:
            raise ServiceError(400, "bbox must be minLng,minLat,maxLng,maxLat") from None
        if len(parts) != 4:
            raise ServiceError(400, "bbox must be minLng,minLat,maxLng,maxLat")
        minx, miny, maxx, maxy = parts
        if not 0 <= level <= dgg.MAX_LEVEL:
            raise ServiceError(400, f"level out of range: {level}")
        try:
            rect = geom.box(minx, miny, maxx, maxy)
        except geom.GeometryError as exc:
            raise ServiceError(400, str(exc)) from None
        area_ratio = (maxx - minx) * (maxy - miny) / (360.0 * 180.0)
        if area_ratio * 6 * 4 ** level > _MAX_TILE_CELLS:
            raise ServiceError(400, "bbox x level would produce too many cells; "
                                    "zoom in or lower the level")
        return dgg.cells_to_geojson(dgg.cover_geometry(rect, level))

    @app.get("/datasets")
    def datasets():
        out = []
        for t in store.match(None, kg.RDF.type, kg.KWG_ONT.DatasetSubgraph):
            ds = t.s
            entry = {
                "dataset": str(ds),
                "title": _label(store, ds),
                "license": None,
                "organization": None,
                "organization_label": None,
            }
            for lic in store.objects(ds, kg.KWG_ONT.license):
                entry["license"] = str(lic)
            for org in store.objects(ds, kg.KWG_ONT.providedBy):
                entry["organization"] = str(org)
                entry["organization_label"] = _label(store, org)
            out.append(entry)
        themes = []
        for t in store.match(None, kg.RDF.type, kg.KWG_ONT.ThematicSubgraph):
            themes.append({
                "subgraph": str(t.s),
                "theme": next((str(o) for o in store.objects(t.s, kg.KWG_ONT.theme)), None),
                "datasets": sorted(str(o) for o in
                                   store.objects(t.s, kg.KWG_ONT.includesDataset)),
            })
        out.sort(key=lambda e: e["dataset"])
        themes.sort(key=lambda e: e["subgraph"])
        return {"datasets": out, "thematic": themes}

    @app.post("/query")
    async def query(request: Request):
        body = await request.body()
        text = body.decode("utf-8", errors="replace")
        content_type = request.headers.get("content-type", "")
        if "json" in content_type:
            try:
                text = json.loads(text).get("query", "")
            except (json.JSONDecodeError, AttributeError):
                raise ServiceError(400, "JSON body must be {\"query\": \"...\"}") from None
        if not text.strip():
            raise ServiceError(400, "empty query")
        try:
            header, rows = run_query(text, store)
        except UnsupportedQueryFeature as exc:
            return JSONResponse(status_code=422,
                                content={"error": exc.message, "token": exc.token})
        except QueryError as exc:
            return JSONResponse(status_code=400,
                                content={"error": exc.message,
                                         "line": exc.line, "column": exc.col})
        return results_to_json(header, rows)

    return app
