import json
from importlib import resources

import pytest

from geokg import cli


FIXTURE = resources.files("geokg") / "data" / "fixture"


def _fixture_path(name):
    return str(FIXTURE / name)


def run(argv):
    return cli.main(argv)


def test_demo_prints_five_rows_and_exits_zero(capsys):
    assert run(["demo"]) == 0
    out = capsys.readouterr().out
    assert "5 result rows." in out
    assert out.count("0.87") == 3
    assert out.count("0.42") == 2


def test_query_on_missing_file_exits_one(capsys):
    assert run(["query", "--graph", "/nonexistent/g.nt",
                "--query", _fixture_path("vulnerability_query.rq")]) == 1


def test_pipeline_is_deterministic(tmp_path, capsys):
    svi = [
        "ingest",
        "--config", _fixture_path("cdc_svi.config.json"),
        "--manifest", _fixture_path("cdc_svi.manifest.json"),
        "--data", _fixture_path("cdc_svi.csv"),
    ]
    states = [
        "ingest",
        "--config", _fixture_path("gadm_states.config.json"),
        "--manifest", _fixture_path("gadm_states.manifest.json"),
        "--data", _fixture_path("gadm_states.csv"),
    ]

    def pipeline(tag):
        svi_nt = tmp_path / f"svi{tag}.nt"
        st_nt = tmp_path / f"st{tag}.nt"
        merged = tmp_path / f"merged{tag}.nt"
        rel = tmp_path / f"rel{tag}.nt"
        full = tmp_path / f"full{tag}.nt"
        assert run(svi + ["--out", str(svi_nt)]) == 0
        assert run(states + ["--out", str(st_nt)]) == 0
        assert run(["load", str(svi_nt), str(st_nt), "--out", str(merged)]) == 0
        assert run(["relate", "--graph", str(merged), "--level", "13",
                    "--out", str(rel)]) == 0
        assert run(["load", str(merged), str(rel), "--out", str(full)]) == 0
        return full.read_bytes()

    assert pipeline("a") == pipeline("b")


def test_query_and_validate_roundtrip(tmp_path, capsys):
    graph = tmp_path / "full.nt"
    for name in ("cdc_svi", "gadm_states"):
        assert run(["ingest",
                    "--config", _fixture_path(f"{name}.config.json"),
                    "--manifest", _fixture_path(f"{name}.manifest.json"),
                    "--data", _fixture_path(f"{name}.csv"),
                    "--out", str(tmp_path / f"{name}.nt")]) == 0
    assert run(["load", str(tmp_path / "cdc_svi.nt"), str(tmp_path / "gadm_states.nt"),
                "--out", str(tmp_path / "merged.nt")]) == 0
    assert run(["relate", "--graph", str(tmp_path / "merged.nt"),
                "--level", "13", "--out", str(tmp_path / "rel.nt")]) == 0
    assert run(["load", str(tmp_path / "merged.nt"), str(tmp_path / "rel.nt"),
                "--out", str(graph)]) == 0
    capsys.readouterr()

    assert run(["query", "--graph", str(graph),
                "--query", _fixture_path("vulnerability_query.rq")]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["results"]["bindings"]) == 5

    assert run(["validate", "--graph", str(graph)]) == 0
    capsys.readouterr()

    # seed a violation: drop one hasSimpleResult line
    lines = graph.read_text().splitlines(keepends=True)
    kept = []
    removed = False
    for ln in lines:
        if not removed and "hasSimpleResult" in ln:
            removed = True
            continue
        kept.append(ln)
    mutated = tmp_path / "mutated.nt"
    mutated.write_text("".join(kept))
    assert run(["validate", "--graph", str(mutated), "--json"]) == 3
    report = json.loads(capsys.readouterr().out)
    assert report["conforms"] is False
    assert len(report["violations"]) == 1


def test_export_turtle(tmp_path, capsys):
    nt = tmp_path / "g.nt"
    assert run(["ingest",
                "--config", _fixture_path("cdc_svi.config.json"),
                "--manifest", _fixture_path("cdc_svi.manifest.json"),
                "--data", _fixture_path("cdc_svi.csv"),
                "--out", str(nt)]) == 0
    ttl = tmp_path / "g.ttl"
    assert run(["export", "--graph", str(nt), "--out", str(ttl),
                "--format", "ttl"]) == 0
    text = ttl.read_text()
    assert text.startswith("@prefix")
    assert "kwg-ont:VulnerabilityObservation" in text


def test_raster_ingest_command(tmp_path, capsys):
    grid = tmp_path / "cover.asc"
    grid.write_text(
        "ncols 4\nnrows 4\nxmin -91.4\nymin 30.0\nxmax -91.0\nymax 30.4\n"
        "kind continuous\n"
        + "\n".join(" ".join("7.0" for _ in range(4)) for _ in range(4)) + "\n")
    cfg = tmp_path / "cover.config.json"
    cfg.write_text(json.dumps({
        "dataset_id": "landcover",
        "raster": {"property": "kwgr:observableProperty.landcover.mean",
                   "level": 7,
                   "observation_class": "kwg-ont:LandCoverObservation"},
    }))
    manifest = tmp_path / "cover.manifest.json"
    manifest.write_text(json.dumps({
        "dataset_id": "landcover", "title": "land cover", "organization": "USDA"}))
    out = tmp_path / "cover.nt"
    assert run(["ingest", "--config", str(cfg), "--manifest", str(manifest),
                "--data", str(grid), "--out", str(out)]) == 0
    text = out.read_text()
    assert "LandCoverObservation" in text
    assert "hasSimpleResult" in text


def test_bad_data_exits_two(tmp_path, capsys):
    bad_csv = tmp_path / "bad.csv"
    bad_csv.write_text("gadm_key,name,wkt,svi_score\nA,Alpha,NOT-WKT,0.5\n")
    code = run(["ingest",
                "--config", _fixture_path("cdc_svi.config.json"),
                "--manifest", _fixture_path("cdc_svi.manifest.json"),
                "--data", str(bad_csv),
                "--out", str(tmp_path / "out.nt")])
    assert code == 2


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as err:
        cli.build_parser().parse_args(["frobnicate"])
    assert err.value.code == 1
