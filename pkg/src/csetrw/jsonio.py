"""JSON (de)serialization for schemas, instances, rules, cospans, diagrams.

All part ids are 1-based externally; arrays preserve declaration order.
Dumping is canonical so that parse/dump round trips are byte-exact.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Callable

from .errors import ParseError, UnknownReferenceError
from .instance import CSetInstance, make_instance, validate_instance, build_index
from .open_systems import Diagram, StructuredCospan
from .rewrite import KINDS, Rule
from .schema import Generator, SchemaPath, SchemaPresentation
from .transform import Transformation

Resolver = Callable[[str], SchemaPresentation]


def dumps(obj: dict | list) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _require(obj, key: str, kind: str):
    if not isinstance(obj, dict) or key not in obj:
        raise ParseError(f"{kind} document is missing field {key!r}")
    return obj[key]


def path_to_obj(path: SchemaPath) -> dict:
    return {"source": path.source, "components": list(path.components)}


def parse_path(obj) -> SchemaPath:
    return SchemaPath(_require(obj, "source", "path"), tuple(_require(obj, "components", "path")))


def schema_to_obj(schema: SchemaPresentation) -> dict:
    return {
        "objects": list(schema.objects),
        "generators": [{"name": g.name, "dom": g.dom, "cod": g.cod} for g in schema.generators],
        "equations": [[path_to_obj(lhs), path_to_obj(rhs)] for lhs, rhs in schema.equations],
    }


def parse_schema(obj) -> SchemaPresentation:
    objects = _require(obj, "objects", "schema")
    generators = [
        Generator(_require(g, "name", "generator"), _require(g, "dom", "generator"), _require(g, "cod", "generator"))
        for g in _require(obj, "generators", "schema")
    ]
    equations = [
        (parse_path(pair[0]), parse_path(pair[1])) for pair in obj.get("equations", [])
    ]
    return SchemaPresentation(list(objects), generators, equations)


def instance_to_obj(x: CSetInstance, schema_ref: str | None = None) -> dict:
    return {
        "schema": schema_ref if schema_ref is not None else schema_to_obj(x.schema),
        "card": {obj: x.card[obj] for obj in x.schema.objects},
        "columns": {g.name: list(x.column[g.name]) for g in x.schema.generators},
    }


def parse_instance(obj, resolver: Resolver | None = None, *, checked: bool = True) -> CSetInstance:
    ref = _require(obj, "schema", "instance")
    if isinstance(ref, str):
        if resolver is None:
            raise UnknownReferenceError(ref)
        schema = resolver(ref)
    else:
        schema = parse_schema(ref)
    card = {str(k): int(v) for k, v in _require(obj, "card", "instance").items()}
    columns = {str(k): [int(v) for v in col] for k, col in _require(obj, "columns", "instance").items()}
    if checked:
        return make_instance(schema, card, columns)
    full_card = {o: card.get(o, 0) for o in schema.objects}
    full_cols = {g.name: columns.get(g.name, []) for g in schema.generators}
    inst = CSetInstance(schema, full_card, full_cols)
    if not validate_instance(inst):
        inst.index = build_index(inst)
    return inst


def transformation_to_obj(t: Transformation) -> dict:
    return {"comp": {obj: list(t.comp[obj]) for obj in t.dom.schema.objects}}


def parse_transformation(obj, dom: CSetInstance, cod: CSetInstance) -> Transformation:
    comp = {str(k): [int(v) for v in col] for k, col in _require(obj, "comp", "transformation").items()}
    return Transformation(dom, cod, comp)


def rule_to_obj(rule: Rule, schema_ref: str | None = None) -> dict:
    return {
        "kind": rule.kind,
        "L": instance_to_obj(rule.lhs, schema_ref),
        "I": instance_to_obj(rule.interface, schema_ref),
        "R": instance_to_obj(rule.rhs, schema_ref),
        "l": transformation_to_obj(rule.l),
        "r": transformation_to_obj(rule.r),
    }


def parse_rule(obj, resolver: Resolver | None = None) -> Rule:
    kind = _require(obj, "kind", "rule")
    if kind not in KINDS:
        raise ParseError(f"unknown rule kind {kind!r}")
    lhs = parse_instance(_require(obj, "L", "rule"), resolver)
    interface = parse_instance(_require(obj, "I", "rule"), resolver)
    rhs = parse_instance(_require(obj, "R", "rule"), resolver)
    l = parse_transformation(_require(obj, "l", "rule"), interface, lhs)
    r = parse_transformation(_require(obj, "r", "rule"), interface, rhs)
    return Rule(l, r, kind=kind)


def cospan_to_obj(c: StructuredCospan, schema_ref: str | None = None) -> dict:
    return {
        "apex": instance_to_obj(c.apex, schema_ref),
        "feet": [instance_to_obj(c.foot_in, schema_ref), instance_to_obj(c.foot_out, schema_ref)],
        "legs": [transformation_to_obj(c.in_leg), transformation_to_obj(c.out_leg)],
    }


def parse_cospan(obj, resolver: Resolver | None = None) -> StructuredCospan:
    apex = parse_instance(_require(obj, "apex", "cospan"), resolver)
    feet = [parse_instance(f, resolver) for f in _require(obj, "feet", "cospan")]
    legs = _require(obj, "legs", "cospan")
    if len(feet) != 2 or len(legs) != 2:
        raise ParseError("cospan documents carry exactly two feet and two legs")
    return StructuredCospan(
        parse_transformation(legs[0], feet[0], apex),
        parse_transformation(legs[1], feet[1], apex),
    )


def diagram_to_obj(d: Diagram, schema_ref: str | None = None) -> dict:
    return {
        "nodes": [
            {"id": node_id, "instance": instance_to_obj(inst, schema_ref)}
            for node_id, inst in d.nodes
        ],
        "arrows": [
            {"src": src, "tgt": tgt, "map": transformation_to_obj(t)}
            for src, tgt, t in d.arrows
        ],
    }


def parse_diagram(obj, resolver: Resolver | None = None) -> Diagram:
    nodes = [
        (_require(n, "id", "diagram node"), parse_instance(_require(n, "instance", "diagram node"), resolver))
        for n in _require(obj, "nodes", "diagram")
    ]
    labels = dict(nodes)
    arrows = []
    for a in obj.get("arrows", []):
        src = _require(a, "src", "diagram arrow")
        tgt = _require(a, "tgt", "diagram arrow")
        if src not in labels or tgt not in labels:
            raise ParseError(f"diagram arrow references unknown node {src!r} or {tgt!r}")
        arrows.append((src, tgt, parse_transformation(_require(a, "map", "diagram arrow"), labels[src], labels[tgt])))
    return Diagram(nodes, arrows)


def detect_kind(obj) -> str:
    """Classify a parsed JSON document by its top-level fields."""
    if not isinstance(obj, dict):
        raise ParseError("expected a JSON object at the top level")
    if "objects" in obj and "generators" in obj:
        return "schema"
    if "kind" in obj and "L" in obj:
        return "rule"
    if "apex" in obj and "feet" in obj:
        return "cospan"
    if "nodes" in obj:
        return "diagram"
    if "card" in obj:
        return "instance"
    if "comp" in obj:
        return "transformation"
    raise ParseError("document does not match any known format")


class Workspace:
    """Named documents loaded from files; names are file stems."""

    def __init__(self):
        self.schemas: dict[str, SchemaPresentation] = {}
        self.raw: dict[str, tuple[str, object]] = {}

    def resolve(self, name: str) -> SchemaPresentation:
        if name not in self.schemas:
            raise UnknownReferenceError(name)
        return self.schemas[name]

    def load(self, path: str | Path) -> tuple[str, str, object]:
        """Parse one file; returns (name, kind, raw JSON object).

        Schemas are registered immediately so later files can reference
        them by name; other payloads stay raw until interpreted, because
        instance parsing may need schemas from files not yet seen.
        """
        path = Path(path)
        try:
            obj = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: {exc}") from exc
        kind = detect_kind(obj)
        name = path.stem
        if kind == "schema":
            self.schemas[name] = parse_schema(obj)
        self.raw[name] = (kind, obj)
        return name, kind, obj
