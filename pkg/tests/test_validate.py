import pytest

from geokg import fixtures
from geokg import kgmodel as kg
from geokg import validate as val
from geokg.store import TripleStore


@pytest.fixture(scope="module")
def shapes():
    return val.load_shapes(fixtures.shapes_text())


def _store_without(triples, predicate):
    """Copy of the fixture graph minus the first triple matching predicate."""
    store = TripleStore()
    dropped = None
    out = []
    for t in triples:
        if dropped is None and predicate(t):
            dropped = t
            continue
        out.append(t)
    assert dropped is not None
    store.bulk_load(out)
    return store, dropped


def test_fixture_conforms(fixture_store, shapes):
    assert val.validate(fixture_store, shapes) == []


def test_deleting_simple_result_yields_one_min_count_violation(fixture_triples, shapes):
    store, dropped = _store_without(
        fixture_triples, lambda t: t.p == kg.SOSA.hasSimpleResult)
    violations = val.validate(store, shapes)
    assert len(violations) == 1
    v = violations[0]
    assert v.constraint == "min_count"
    assert v.focus == str(dropped.s)
    assert "hasSimpleResult" in v.message


def test_retyping_numeric_value_yields_one_datatype_violation(fixture_triples, shapes):
    store = TripleStore()
    mutated = 0
    for t in fixture_triples:
        if mutated == 0 and t.p == kg.QUDT_UNIT.term("numericValue"):
            t = kg.Triple(t.s, t.p, kg.Literal(t.o.lexical, kg.XSD.string))
            mutated = 1
        store.insert(t)
    assert mutated == 1
    violations = val.validate(store, shapes)
    assert len(violations) == 1
    assert violations[0].constraint == "datatype"


def test_removing_cell_geometry_yields_one_violation(fixture_triples, shapes):
    store, dropped = _store_without(
        fixture_triples,
        lambda t: t.p == kg.GEO.hasGeometry and "/s2." in t.s.value)
    violations = val.validate(store, shapes)
    assert len(violations) == 1
    assert violations[0].constraint == "min_count"
    assert violations[0].focus == str(dropped.s)


def test_max_count_and_value_class_constraints():
    store = TripleStore()
    obs = kg.Iri("http://example.org/obs")
    store.insert(kg.Triple(obs, kg.RDF.type, kg.KWG_ONT.HealthObservation))
    store.insert(kg.Triple(obs, kg.SOSA.hasFeatureOfInterest, kg.Iri("http://example.org/a")))
    store.insert(kg.Triple(obs, kg.SOSA.hasFeatureOfInterest, kg.Iri("http://example.org/b")))
    store.insert(kg.Triple(obs, kg.SOSA.observedProperty, kg.Iri("http://example.org/p")))
    store.insert(kg.Triple(obs, kg.SOSA.hasResult, kg.Iri("http://example.org/untyped")))
    shapes = val.load_shapes(fixtures.shapes_text())
    violations = val.validate(store, shapes)
    kinds = [(v.constraint, v.shape) for v in violations]
    assert ("max_count", "HealthObservationShape") in kinds
    assert ("value_class", "HealthObservationShape") in kinds


def test_report_is_deterministic(fixture_triples, shapes):
    store, _ = _store_without(fixture_triples,
                              lambda t: t.p == kg.SOSA.hasSimpleResult)
    r1 = val.report_json(val.validate(store, shapes))
    r2 = val.report_json(val.validate(store, shapes))
    assert r1 == r2
    assert val.report_text([]) == "conforms: no violations\n"


def test_min_count_violation_survives_unrelated_removal(fixture_triples, shapes):
    # Monotonicity: dropping a triple of some other focus node never
    # repairs an existing min_count violation.
    store, dropped = _store_without(
        fixture_triples, lambda t: t.p == kg.SOSA.hasSimpleResult)
    before = {(v.focus, v.shape, v.constraint)
              for v in val.validate(store, shapes)}
    store2 = TripleStore()
    removed_label = None
    for t in store.triples():
        if removed_label is None and t.p == kg.RDFS.label \
                and t.s != dropped.s and "/s2." in getattr(t.s, "value", ""):
            removed_label = t
            continue
        store2.insert(t)
    after = {(v.focus, v.shape, v.constraint)
             for v in val.validate(store2, shapes)}
    assert before <= after


def test_shape_loading_errors():
    with pytest.raises(val.ShapeError):
        val.load_shapes('[{"id": "x", "constraints": []}]')
    with pytest.raises(val.ShapeError):
        val.Constraint(path=kg.RDFS.label, min_count=2, max_count=1)
