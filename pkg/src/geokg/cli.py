"""Operator command line: ingest -> relate -> export -> query/serve.

Configuration precedence: flags > GEOKG_* environment variables > built-in
defaults. Exit codes: 0 ok, 1 usage, 2 data error, 3 validation failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import dgg
from . import fixtures
from . import geometry as geom
from . import ingest
from . import kgmodel as kg
from . import validate as val
from .query import QueryError, results_to_json, run_query
from .store import TripleStore, load_ntriples_file, save_ntriples_file

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_VALIDATION = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _env(name: str, default=None):
    return os.environ.get(f"GEOKG_{name.upper()}", default)


def _require_file(path: str, what: str) -> str:
    if not path:
        raise UsageError(f"missing {what}")
    if not os.path.exists(path):
        raise UsageError(f"{what} not found: {path}")
    return path


class UsageError(Exception):
    pass


def _write_graph(triples, out_path: str, fmt: str):
    if fmt == "ttl":
        text = kg.serialize_turtle(triples)
    else:
        text = kg.serialize_ntriples(triples)
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(text)


def cmd_ingest(args) -> int:
    cfg_path = _require_file(args.config, "--config")
    with open(cfg_path, encoding="utf-8") as fh:
        cfg_doc = json.load(fh)
    manifest_path = _require_file(args.manifest, "--manifest")
    with open(manifest_path, encoding="utf-8") as fh:
        manifest = ingest.DatasetManifest.from_json(json.load(fh))
    data_path = _require_file(args.data, "--data")

    if "raster" in cfg_doc:
        raster_cfg = cfg_doc["raster"]
        with open(data_path, encoding="utf-8") as fh:
            raster = ingest.parse_ascii_grid(fh.read())
        result = ingest.summarize_raster(
            raster,
            level=int(raster_cfg.get("level", args.level)),
            property_iri=kg.expand(raster_cfg["property"]),
            unit=kg.expand(raster_cfg["unit"]) if "unit" in raster_cfg else None,
            manifest=manifest,
            observation_class=(kg.expand(raster_cfg["observation_class"])
                               if "observation_class" in raster_cfg else None),
        )
    else:
        cfg = ingest.MappingConfig.from_json(cfg_doc)
        if data_path.endswith(".geojson") or data_path.endswith(".json"):
            with open(data_path, encoding="utf-8") as fh:
                rows = ingest.geojson_feature_rows(json.load(fh))
        else:
            with open(data_path, encoding="utf-8") as fh:
                _, rows = ingest.read_csv(fh.read())
        result = ingest.ingest_table(rows, cfg, manifest)

    triples = kg.sort_triples(result.to_triples())
    _write_graph(triples, args.out, args.format)
    print(f"{len(result.features)} features, {len(result.observations)} observations, "
          f"{len(triples)} triples -> {args.out}")
    return EXIT_OK


def cmd_relate(args) -> int:
    graph = _require_file(args.graph, "--graph")
    store = load_ntriples_file(graph)
    features = ingest.features_from_store(store)
    integration = ingest.integrate_spatial(features, int(args.level))
    triples = kg.sort_triples(integration.to_triples())
    _write_graph(triples, args.out, args.format)
    print(f"{len(integration.cell_features)} cells, "
          f"{len(integration.relation_triples)} relation triples -> {args.out}")
    return EXIT_OK


def cmd_export(args) -> int:
    graph = _require_file(args.graph, "--graph")
    store = load_ntriples_file(graph)
    _write_graph(store.triples(), args.out, args.format)
    print(f"{len(store)} triples -> {args.out}")
    return EXIT_OK


def cmd_load(args) -> int:
    store = TripleStore()
    for path in args.graphs:
        _require_file(path, "graph file")
        with open(path, encoding="utf-8") as fh:
            store.bulk_load(kg.parse_ntriples(fh.read()))
    if args.out:
        save_ntriples_file(store, args.out)
        print(f"{len(store)} triples -> {args.out}")
    else:
        print(f"{len(store)} triples")
    return EXIT_OK


def cmd_query(args) -> int:
    graph = _require_file(args.graph, "--graph")
    store = load_ntriples_file(graph)
    if args.query:
        _require_file(args.query, "--query")
        with open(args.query, encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = sys.stdin.read()
    header, rows = run_query(text, store)
    print(json.dumps(results_to_json(header, rows), indent=2))
    return EXIT_OK


def cmd_validate(args) -> int:
    graph = _require_file(args.graph, "--graph")
    store = load_ntriples_file(graph)
    if args.shapes:
        _require_file(args.shapes, "--shapes")
        with open(args.shapes, encoding="utf-8") as fh:
            shapes = val.load_shapes(fh.read())
    else:
        shapes = val.load_shapes(fixtures.shapes_text())
    violations = val.validate(store, shapes)
    print(val.report_json(violations) if args.json else val.report_text(violations),
          end="")
    return EXIT_VALIDATION if violations else EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    if args.graph and os.path.exists(args.graph):
        store = load_ntriples_file(args.graph)
    elif args.graph:
        raise UsageError(f"--graph not found: {args.graph}")
    else:
        print("no --graph given; serving the bundled demo fixture")
        store = fixtures.build_fixture_store()
    origins = args.cors.split(",") if args.cors else None
    app = create_app(store, cors_origins=origins)
    print(f"{len(store)} triples loaded; listening on {args.host}:{args.port}")
    uvicorn.run(app, host=args.host, port=int(args.port), log_level="warning")
    return EXIT_OK


def cmd_demo(args) -> int:
    store = fixtures.build_fixture_store()
    text = fixtures.demo_query_text()
    print("Louisiana-style fixture loaded "
          f"({len(store)} triples, grid level {fixtures.FIXTURE_LEVEL}).")
    print("Running the bundled vulnerability query:\n")
    print(text)
    header, rows = run_query(text, store)
    rows.sort(key=lambda r: tuple(r[v].ntriples() for v in header if v in r))
    widths = {v: max(len(v), max((len(str(r[v])) for r in rows), default=0))
              for v in header}
    print("  ".join(v.ljust(widths[v]) for v in header))
    for r in rows:
        print("  ".join(str(r[v]).ljust(widths[v]) for v in header))
    print(f"\n{len(rows)} result rows.")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="geokg",
                     description="geospatial knowledge-graph engine")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common_out(p):
        p.add_argument("--out", default=_env("out", "graph.nt"),
                       help="output graph file")
        p.add_argument("--format", choices=("nt", "ttl"),
                       default=_env("format", "nt"), help="output serialization")

    p = sub.add_parser("ingest", help="materialize one dataset per its mapping config")
    p.add_argument("--config", default=_env("config"), help="mapping config JSON")
    p.add_argument("--manifest", default=_env("manifest"), help="dataset manifest JSON")
    p.add_argument("--data", default=_env("data"),
                   help="CSV, GeoJSON FeatureCollection, or ASCII grid")
    p.add_argument("--level", type=int, default=int(_env("level", "9")),
                   help="grid level for raster summarization")
    add_common_out(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("relate", help="precompute grid + feature topology for a graph")
    p.add_argument("--graph", default=_env("graph"), help="input N-Triples graph")
    p.add_argument("--level", type=int, default=int(_env("level", "9")))
    add_common_out(p)
    p.set_defaults(func=cmd_relate)

    p = sub.add_parser("export", help="rewrite a graph as N-Triples or Turtle")
    p.add_argument("--graph", default=_env("graph"))
    add_common_out(p)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("load", help="merge graph files (deduplicated, sorted)")
    p.add_argument("graphs", nargs="+", help="N-Triples files")
    p.add_argument("--out", default=_env("out"))
    p.set_defaults(func=cmd_load)

    p = sub.add_parser("query", help="run a query file (or stdin) against a graph")
    p.add_argument("--graph", default=_env("graph"))
    p.add_argument("--query", help="query file; stdin when omitted")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("validate", help="check a graph against shapes")
    p.add_argument("--graph", default=_env("graph"))
    p.add_argument("--shapes", help="shape file JSON (bundled shapes by default)")
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("serve", help="start the briefing/query HTTP service")
    p.add_argument("--graph", default=_env("graph"),
                   help="N-Triples graph (demo fixture when omitted)")
    p.add_argument("--host", default=_env("host", "127.0.0.1"))
    p.add_argument("--port", type=int, default=int(_env("port", "8000")))
    p.add_argument("--cors", default=_env("cors"),
                   help="comma-separated allowed origins (default *)")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("demo", help="load the bundled fixture and answer its query")
    p.set_defaults(func=cmd_demo)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"geokg: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ingest.IngestError, geom.GeometryError, kg.KgError, dgg.DggError,
            QueryError, val.ShapeError, json.JSONDecodeError) as exc:
        print(f"geokg: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
