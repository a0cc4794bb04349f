"""Knowledge-graph model: terms, namespaces, kernel entities, emission.

The graph speaks a fixed namespace table (kwg-ont:/kwgr: plus the W3C/OGC
standards). Entities follow the observation kernel: features (hazards,
regions, grid cells) carry geometry and temporal scope; observations tie a
feature of interest to an observed property and a result; observable
properties link to their source dataset, which links to the providing
organization - provenance is always exactly three hops from an
observation.

IRI minting is deterministic so that re-running a pipeline reproduces the
identical triple set.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import datetime
from typing import Iterable, Optional, Union
from urllib.parse import quote

from . import dgg
from . import geometry as geom

NAMESPACES = {
    "kwg-ont": "http://stko-kwg.geog.ucsb.edu/lod/ontology/",
    "kwgr": "http://stko-kwg.geog.ucsb.edu/lod/resource/",
    "sosa": "http://www.w3.org/ns/sosa/",
    "geo": "http://www.opengis.net/ont/geosparql#",
    "rdf": "http://www.w3.org/1999/02/22-rdf-syntax-ns#",
    "rdfs": "http://www.w3.org/2000/01/rdf-schema#",
    "xsd": "http://www.w3.org/2001/XMLSchema#",
    "time": "http://www.w3.org/2006/time#",
    "qudt-unit": "http://qudt.org/vocab/unit/",
}


class KgError(ValueError):
    """Invalid term, entity, or emission input."""


@dataclass(frozen=True)
class Iri:
    value: str

    def __post_init__(self):
        if not self.value or any(ch in self.value for ch in ' <>"{}|\\^`\n\t'):
            raise KgError(f"invalid IRI: {self.value!r}")

    def ntriples(self) -> str:
        return f"<{self.value}>"

    def curie(self) -> str:
        for prefix, ns in NAMESPACES.items():
            if self.value.startswith(ns):
                return f"{prefix}:{self.value[len(ns):]}"
        return self.ntriples()

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Literal:
    lexical: str
    datatype: Iri

    def ntriples(self) -> str:
        esc = (self.lexical.replace("\\", "\\\\").replace('"', '\\"')
               .replace("\n", "\\n").replace("\r", "\\r").replace("\t", "\\t"))
        if self.datatype == XSD.string:
            return f'"{esc}"'
        return f'"{esc}"^^{self.datatype.ntriples()}'

    def __str__(self):
        return self.lexical


@dataclass(frozen=True)
class BlankNode:
    label: str

    def ntriples(self) -> str:
        return f"_:{self.label}"

    def __str__(self):
        return f"_:{self.label}"


Term = Union[Iri, Literal, BlankNode]


@dataclass(frozen=True)
class Triple:
    s: Union[Iri, BlankNode]
    p: Iri
    o: Term

    def ntriples(self) -> str:
        return f"{self.s.ntriples()} {self.p.ntriples()} {self.o.ntriples()} ."


def expand(curie_or_iri: str) -> Iri:
    """Resolve prefix:local against the namespace table; pass IRIs through."""
    if curie_or_iri.startswith("<") and curie_or_iri.endswith(">"):
        return Iri(curie_or_iri[1:-1])
    if "://" in curie_or_iri:
        return Iri(curie_or_iri)
    if ":" in curie_or_iri:
        prefix, local = curie_or_iri.split(":", 1)
        if prefix in NAMESPACES:
            return Iri(NAMESPACES[prefix] + local)
        raise KgError(f"unknown prefix: {prefix!r}")
    raise KgError(f"not an IRI or known CURIE: {curie_or_iri!r}")


class _Ns:
    def __init__(self, prefix):
        self._base = NAMESPACES[prefix]

    def __getattr__(self, name):
        return Iri(self._base + name)

    def term(self, name):
        return Iri(self._base + name)


class _Xsd(_Ns):
    def __init__(self):
        super().__init__("xsd")
        self.string = Iri(NAMESPACES["xsd"] + "string")
        self.double = Iri(NAMESPACES["xsd"] + "double")
        self.integer = Iri(NAMESPACES["xsd"] + "integer")
        self.decimal = Iri(NAMESPACES["xsd"] + "decimal")
        self.dateTime = Iri(NAMESPACES["xsd"] + "dateTime")
        self.boolean = Iri(NAMESPACES["xsd"] + "boolean")


RDF = _Ns("rdf")
RDFS = _Ns("rdfs")
XSD = _Xsd()
SOSA = _Ns("sosa")
GEO = _Ns("geo")
TIME = _Ns("time")
KWG_ONT = _Ns("kwg-ont")
KWGR = _Ns("kwgr")
QUDT_UNIT = _Ns("qudt-unit")


def string_literal(text: str) -> Literal:
    return Literal(text, XSD.string)


def double_literal(value: float) -> Literal:
    return Literal(repr(float(value)), XSD.double)


def datetime_literal(iso: str) -> Literal:
    return Literal(iso, XSD.dateTime)


# ---------------------------------------------------------------------------
# IRI minting


_MINT_KINDS = {
    "region": "",
    "hazard": "",
    "cell": "s2.",
    "observation": "observation.",
    "property": "observableProperty.",
    "dataset": "dataset.",
    "organization": "organization.",
    "thematic": "thematic.",
    "geometry": "geometry.",
    "time": "time.",
    "quantity": "quantityValue.",
}


def _encode_key(key: str) -> str:
    return quote(key, safe=".-_~")


def mint_iri(kind: str, source_key: str) -> Iri:
    """Deterministic resource IRI under kwgr: for a given kind and key.

    Regions and hazards use the source key verbatim; cells use
    s2.level<L>.<token>; observations use
    observation.<dataset>.<foi-key>.<property-local>. Composite keys are
    pre-joined with '.' by the helpers below.
    """
    if kind not in _MINT_KINDS:
        raise KgError(f"unknown mint kind: {kind!r}")
    if not source_key:
        raise KgError("empty source key")
    return Iri(NAMESPACES["kwgr"] + _MINT_KINDS[kind] + _encode_key(source_key))


def mint_cell_iri(cell: dgg.CellId) -> Iri:
    return mint_iri("cell", f"level{cell.level}.{dgg.token(cell)}")


def mint_observation_iri(dataset_id: str, foi_key: str, property_local: str) -> Iri:
    return mint_iri("observation", f"{dataset_id}.{foi_key}.{property_local}")


def mint_property_iri(dataset_id: str, column: str) -> Iri:
    return mint_iri("property", f"{dataset_id}.{column}")


# ---------------------------------------------------------------------------
# Temporal entities


_DT_RE = re.compile(r"^\d{4}-\d{2}-\d{2}(T\d{2}:\d{2}:\d{2})?")


def _check_datetime(value: str) -> str:
    try:
        datetime.fromisoformat(value)
    except ValueError:
        raise KgError(f"not an ISO dateTime: {value!r}") from None
    if "T" not in value:
        value = value + "T00:00:00"
    return value


@dataclass(frozen=True)
class Instant:
    at: str

    def __post_init__(self):
        object.__setattr__(self, "at", _check_datetime(self.at))

    def overlaps(self, begin: str, end: str) -> bool:
        return begin <= self.at <= end


@dataclass(frozen=True)
class Interval:
    begin: str
    end: str

    def __post_init__(self):
        object.__setattr__(self, "begin", _check_datetime(self.begin))
        object.__setattr__(self, "end", _check_datetime(self.end))
        if self.begin > self.end:
            raise KgError("interval begin must not be after end")

    def overlaps(self, begin: str, end: str) -> bool:
        return self.begin <= end and begin <= self.end


TemporalEntity = Union[Instant, Interval]


# ---------------------------------------------------------------------------
# Kernel entities


KIND_CLASSES = {
    "hazard": KWG_ONT.Hazard,
    "region": KWG_ONT.Region,
    "cell": KWG_ONT.S2Cell,
}


@dataclass(frozen=True)
class Feature:
    iri: Iri
    kind: str  # hazard | region | cell
    class_iri: Iri
    label: str
    geometry: Optional[geom.Geometry] = None
    temporal_scope: Optional[TemporalEntity] = None

    def __post_init__(self):
        if self.kind not in KIND_CLASSES:
            raise KgError(f"unknown feature kind: {self.kind!r}")
        if self.kind == "cell" and self.geometry is None:
            raise KgError("cell features must carry geometry")


@dataclass(frozen=True)
class QuantityValue:
    numeric_value: float
    unit: Iri

    def __post_init__(self):
        v = float(self.numeric_value)
        if v != v or v in (float("inf"), float("-inf")):
            raise KgError("quantity value must be finite")


@dataclass(frozen=True)
class Observation:
    iri: Iri
    class_iri: Iri
    feature_of_interest: Iri
    observed_property: Iri
    result: Union[QuantityValue, Literal]
    phenomenon_time: Optional[TemporalEntity] = None
    result_time: Optional[str] = None
    sensor: Optional[Iri] = None


@dataclass(frozen=True)
class ObservationCollection:
    iri: Iri
    members: tuple[Iri, ...]
    observed_property: Optional[Iri] = None

    def __post_init__(self):
        if not self.members:
            raise KgError("observation collection must have members")


@dataclass(frozen=True)
class ObservableProperty:
    iri: Iri
    label: str
    dataset: Iri


@dataclass(frozen=True)
class DatasetSubgraph:
    iri: Iri
    title: str
    organization: Iri
    organization_label: str
    license: str = ""
    creator: str = ""


@dataclass(frozen=True)
class ThematicSubgraph:
    iri: Iri
    theme: str
    datasets: tuple[Iri, ...]


# ---------------------------------------------------------------------------
# Emission
#
# Per-entity triple counts (the ingest counting formulas build on these):
#   Feature: 1 type + [1 kind-class if distinct] + 1 label
#            + [3 geometry: hasGeometry, node type, asWKT]
#            + [3 instant scope | 4 interval scope]
#   Observation: 1 type + 1 hasFeatureOfInterest + 1 observedProperty
#            + [1 simple result | 4 quantity result]
#            + [3 instant phenomenonTime | 4 interval] + [1 resultTime]
#            + [1 sensor]
#   ObservableProperty: type + label + sourceDataset = 3
#   DatasetSubgraph: type + label + providedBy + org type + org label
#            + [1 license] + [1 creator]
#   ThematicSubgraph: type + theme + 1 per member dataset


def _local_name(iri: Iri) -> str:
    base = NAMESPACES["kwgr"]
    if iri.value.startswith(base):
        return iri.value[len(base):]
    return quote(iri.value, safe="")


def _emit_temporal(subject, pred: Iri, scope: TemporalEntity, node_key: str):
    node = mint_iri("time", node_key)
    out = [Triple(subject, pred, node)]
    if isinstance(scope, Instant):
        out.append(Triple(node, RDF.type, TIME.Instant))
        out.append(Triple(node, TIME.inXSDDateTime, datetime_literal(scope.at)))
    else:
        out.append(Triple(node, RDF.type, TIME.Interval))
        out.append(Triple(node, TIME.hasBeginning, datetime_literal(scope.begin)))
        out.append(Triple(node, TIME.hasEnd, datetime_literal(scope.end)))
    return out


def emit_feature(f: Feature) -> list[Triple]:
    out = [Triple(f.iri, RDF.type, f.class_iri)]
    kind_class = KIND_CLASSES[f.kind]
    if kind_class != f.class_iri:
        out.append(Triple(f.iri, RDF.type, kind_class))
    out.append(Triple(f.iri, RDFS.label, string_literal(f.label)))
    if f.geometry is not None:
        gnode = mint_iri("geometry", _local_name(f.iri))
        out.append(Triple(f.iri, GEO.hasGeometry, gnode))
        out.append(Triple(gnode, RDF.type, GEO.Geometry))
        out.append(Triple(gnode, GEO.asWKT,
                          Literal(geom.serialize_wkt(f.geometry), GEO.wktLiteral)))
    if f.temporal_scope is not None:
        out.extend(_emit_temporal(f.iri, KWG_ONT.hasTemporalScope,
                                  f.temporal_scope, _local_name(f.iri)))
    return out


def emit_observation(o: Observation, known_iris: Optional[set] = None) -> list[Triple]:
    """Observation triples; a simple-result observation with no times is
    exactly 4 triples. known_iris, when given, is used to reject dangling
    feature-of-interest or property references."""
    if known_iris is not None:
        if o.feature_of_interest not in known_iris:
            raise KgError(f"dangling FOI: {o.feature_of_interest}")
        if o.observed_property not in known_iris:
            raise KgError(f"dangling observed property: {o.observed_property}")
    out = [
        Triple(o.iri, RDF.type, o.class_iri),
        Triple(o.iri, SOSA.hasFeatureOfInterest, o.feature_of_interest),
        Triple(o.iri, SOSA.observedProperty, o.observed_property),
    ]
    if isinstance(o.result, QuantityValue):
        qnode = mint_iri("quantity", _local_name(o.iri))
        out.append(Triple(o.iri, SOSA.hasResult, qnode))
        out.append(Triple(qnode, RDF.type, KWG_ONT.QuantityValue))
        out.append(Triple(qnode, QUDT_UNIT.term("numericValue"),
                          double_literal(o.result.numeric_value)))
        out.append(Triple(qnode, QUDT_UNIT.term("unit"), o.result.unit))
    elif isinstance(o.result, Literal):
        out.append(Triple(o.iri, SOSA.hasSimpleResult, o.result))
    else:
        raise KgError("observation result must be a QuantityValue or Literal")
    if o.phenomenon_time is not None:
        out.extend(_emit_temporal(o.iri, SOSA.phenomenonTime, o.phenomenon_time,
                                  _local_name(o.iri)))
    if o.result_time is not None:
        out.append(Triple(o.iri, SOSA.resultTime,
                          datetime_literal(_check_datetime(o.result_time))))
    if o.sensor is not None:
        out.append(Triple(o.iri, SOSA.madeBySensor, o.sensor))
    return out


def emit_foi_link(o: Observation) -> Triple:
    """Feature-side inverse link that makes isFeatureOfInterestOf queries
    answerable without inference; emitted once per observation at assembly
    time (not part of emit_observation's 4-triple core)."""
    return Triple(o.feature_of_interest, SOSA.isFeatureOfInterestOf, o.iri)


def emit_observation_collection(c: ObservationCollection) -> list[Triple]:
    out = [Triple(c.iri, RDF.type, SOSA.ObservationCollection)]
    for member in c.members:
        out.append(Triple(c.iri, SOSA.hasMember, member))
    if c.observed_property is not None:
        out.append(Triple(c.iri, SOSA.observedProperty, c.observed_property))
    return out


def emit_observable_property(p: ObservableProperty) -> list[Triple]:
    return [
        Triple(p.iri, RDF.type, SOSA.ObservableProperty),
        Triple(p.iri, RDFS.label, string_literal(p.label)),
        Triple(p.iri, KWG_ONT.sourceDataset, p.dataset),
    ]


def emit_dataset_subgraph(d: DatasetSubgraph) -> list[Triple]:
    out = [
        Triple(d.iri, RDF.type, KWG_ONT.DatasetSubgraph),
        Triple(d.iri, RDFS.label, string_literal(d.title)),
        Triple(d.iri, KWG_ONT.providedBy, d.organization),
        Triple(d.organization, RDF.type, KWG_ONT.Organization),
        Triple(d.organization, RDFS.label, string_literal(d.organization_label)),
    ]
    if d.license:
        out.append(Triple(d.iri, KWG_ONT.license, string_literal(d.license)))
    if d.creator:
        out.append(Triple(d.iri, KWG_ONT.creator, string_literal(d.creator)))
    return out


def emit_thematic_subgraph(t: ThematicSubgraph) -> list[Triple]:
    out = [
        Triple(t.iri, RDF.type, KWG_ONT.ThematicSubgraph),
        Triple(t.iri, KWG_ONT.theme, string_literal(t.theme)),
    ]
    for ds in t.datasets:
        out.append(Triple(t.iri, KWG_ONT.includesDataset, ds))
    return out


# Spatial relations. Inverse pairs are materialized for query symmetry;
# disjoint pairs are never stored.

_SF_INVERSE = {
    "sfEquals": "sfEquals",
    "sfTouches": "sfTouches",
    "sfOverlaps": "sfOverlaps",
    "sfCrosses": "sfCrosses",
    "sfIntersects": "sfIntersects",
    "sfWithin": "sfContains",
    "sfContains": "sfWithin",
}


def emit_spatial_relation(a: Iri, pred: geom.SpatialPredicate, b: Iri,
                          alias_geo: bool = False) -> list[Triple]:
    name = pred.value
    if name == "sfDisjoint":
        return []
    inverse = _SF_INVERSE[name]
    out = [
        Triple(a, KWG_ONT.term(name), b),
        Triple(b, KWG_ONT.term(inverse), a),
    ]
    if alias_geo:
        out.append(Triple(a, GEO.term(name), b))
        out.append(Triple(b, GEO.term(inverse), a))
    return out


# ---------------------------------------------------------------------------
# Serialization


def _term_sort_key(term: Term) -> str:
    return term.ntriples()


def sort_triples(triples: Iterable[Triple]) -> list[Triple]:
    return sorted(set(triples),
                  key=lambda t: (t.s.ntriples(), t.p.ntriples(), t.o.ntriples()))


def serialize_ntriples(triples: Iterable[Triple]) -> str:
    return "".join(t.ntriples() + "\n" for t in sort_triples(triples))


_NT_LINE = re.compile(
    r'^(?P<s><[^>]*>|_:\S+)\s+(?P<p><[^>]*>)\s+(?P<o>.+?)\s*\.\s*$')
_NT_LITERAL = re.compile(r'^"(?P<lex>(?:[^"\\]|\\.)*)"(?:\^\^(?P<dt><[^>]*>))?$')


_ESCAPES = {"t": "\t", "r": "\r", "n": "\n", '"': '"', "\\": "\\"}


def _unescape(text: str) -> str:
    return re.sub(r"\\(.)", lambda m: _ESCAPES.get(m.group(1), m.group(0)), text)


def _parse_term(text: str) -> Term:
    if text.startswith("<") and text.endswith(">"):
        return Iri(text[1:-1])
    if text.startswith("_:"):
        return BlankNode(text[2:])
    m = _NT_LITERAL.match(text)
    if m:
        dt = Iri(m.group("dt")[1:-1]) if m.group("dt") else XSD.string
        return Literal(_unescape(m.group("lex")), dt)
    raise KgError(f"cannot parse N-Triples term: {text!r}")


def parse_ntriples(text: str) -> list[Triple]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _NT_LINE.match(line)
        if not m:
            raise KgError(f"bad N-Triples line {lineno}: {raw!r}")
        s = _parse_term(m.group("s"))
        p = _parse_term(m.group("p"))
        o = _parse_term(m.group("o"))
        if isinstance(s, Literal) or not isinstance(p, Iri):
            raise KgError(f"bad N-Triples line {lineno}: {raw!r}")
        out.append(Triple(s, p, o))
    return out


def _turtle_term(term: Term) -> str:
    if isinstance(term, Iri):
        return term.curie()
    return term.ntriples()


def serialize_turtle(triples: Iterable[Triple],
                     namespaces: Optional[dict] = None) -> str:
    ns = namespaces or NAMESPACES
    lines = [f"@prefix {p}: <{iri}> ." for p, iri in sorted(ns.items())]
    lines.append("")
    ordered = sort_triples(triples)
    i = 0
    while i < len(ordered):
        subj = ordered[i].s
        group = []
        while i < len(ordered) and ordered[i].s == subj:
            group.append(ordered[i])
            i += 1
        parts = []
        j = 0
        while j < len(group):
            pred = group[j].p
            objs = []
            while j < len(group) and group[j].p == pred:
                objs.append(_turtle_term(group[j].o))
                j += 1
            pname = "a" if pred == RDF.type else _turtle_term(pred)
            parts.append(f"{pname} {', '.join(objs)}")
        lines.append(f"{_turtle_term(subj)} " + " ;\n    ".join(parts) + " .")
    return "\n".join(lines) + "\n"
