"""Shape-based conformance checking (class-targeted cardinality,
datatype and value-class constraints)."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Sequence

from . import kgmodel as kg
from .store import TripleStore


class ShapeError(ValueError):
    pass


@dataclass(frozen=True)
class Constraint:
    path: kg.Iri
    min_count: int = 0
    max_count: Optional[int] = None
    datatype: Optional[kg.Iri] = None
    value_class: Optional[kg.Iri] = None

    def __post_init__(self):
        if self.min_count < 0:
            raise ShapeError("min_count must be >= 0")
        if self.max_count is not None and self.max_count < self.min_count:
            raise ShapeError("max_count must be >= min_count")


@dataclass(frozen=True)
class ShapeSpec:
    id: str
    target_class: kg.Iri
    constraints: tuple[Constraint, ...]


@dataclass(frozen=True)
class Violation:
    focus: str
    shape: str
    constraint: str  # min_count | max_count | datatype | value_class
    message: str

    def as_dict(self) -> dict:
        return {"focus": self.focus, "shape": self.shape,
                "constraint": self.constraint, "message": self.message}


def load_shapes(doc) -> list[ShapeSpec]:
    if isinstance(doc, str):
        doc = json.loads(doc)
    shapes = []
    for entry in doc:
        try:
            constraints = tuple(
                Constraint(
                    path=kg.expand(c["path"]),
                    min_count=c.get("min_count", 0),
                    max_count=c.get("max_count"),
                    datatype=kg.expand(c["datatype"]) if "datatype" in c else None,
                    value_class=kg.expand(c["value_class"]) if "value_class" in c else None,
                )
                for c in entry["constraints"]
            )
            shapes.append(ShapeSpec(
                id=entry["id"],
                target_class=kg.expand(entry["target_class"]),
                constraints=constraints,
            ))
        except KeyError as exc:
            raise ShapeError(f"shape entry is missing {exc}") from None
    return shapes


def validate(store: TripleStore, shapes: Sequence[ShapeSpec]) -> list[Violation]:
    """Check every instance of every targeted class; the report order is
    deterministic (focus, shape, constraint kind, path)."""
    out: list[Violation] = []
    for shape in shapes:
        focuses = sorted(
            {t.s for t in store.match(None, kg.RDF.type, shape.target_class)},
            key=lambda term: term.ntriples(),
        )
        for focus in focuses:
            for c in shape.constraints:
                values = store.objects(focus, c.path)
                n = len(values)
                if n < c.min_count:
                    out.append(Violation(
                        str(focus), shape.id, "min_count",
                        f"{c.path.curie()} has {n} value(s), needs at least {c.min_count}"))
                if c.max_count is not None and n > c.max_count:
                    out.append(Violation(
                        str(focus), shape.id, "max_count",
                        f"{c.path.curie()} has {n} value(s), allows at most {c.max_count}"))
                if c.datatype is not None:
                    for v in sorted(values, key=lambda t: t.ntriples()):
                        if not isinstance(v, kg.Literal) or v.datatype != c.datatype:
                            out.append(Violation(
                                str(focus), shape.id, "datatype",
                                f"{c.path.curie()} value {v.ntriples()} is not {c.datatype.curie()}"))
                if c.value_class is not None:
                    for v in sorted(values, key=lambda t: t.ntriples()):
                        if not isinstance(v, (kg.Iri, kg.BlankNode)) or \
                                not store.has(v, kg.RDF.type, c.value_class):
                            out.append(Violation(
                                str(focus), shape.id, "value_class",
                                f"{c.path.curie()} value {v.ntriples()} is not a {c.value_class.curie()}"))
    kind_order = {"min_count": 0, "max_count": 1, "datatype": 2, "value_class": 3}
    out.sort(key=lambda v: (v.focus, v.shape, kind_order[v.constraint], v.message))
    return out


def report_text(violations: Sequence[Violation]) -> str:
    if not violations:
        return "conforms: no violations\n"
    lines = [f"{len(violations)} violation(s)"]
    for v in violations:
        lines.append(f"  [{v.constraint}] {v.focus} ({v.shape}): {v.message}")
    return "\n".join(lines) + "\n"


def report_json(violations: Sequence[Violation]) -> str:
    return json.dumps(
        {"conforms": not violations,
         "violations": [v.as_dict() for v in violations]},
        indent=2, sort_keys=True) + "\n"
