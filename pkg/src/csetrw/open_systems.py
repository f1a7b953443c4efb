"""Slice-category rewriting, structured cospans, and diagram colimits.

Slices constrain instances by a typing morphism into a fixed base
instance; structured cospans expose discrete boundaries for gluing open
systems; diagrams of instances are assembled by colimit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .colimits import _UnionFind, coproduct, pushout, pushout_complement, check_pushout_complement
from .errors import (
    CommutativityFailureError,
    ComplementViolationsError,
    FootMismatchError,
    TypingMismatchError,
)
from .instance import CSetInstance, make_instance
from .rewrite import RewriteOutcome, Rule, rewrite_dpo
from .schema import Generator, SchemaPath, SchemaPresentation
from .transform import Transformation, is_natural


# ---------------------------------------------------------------------------
# Slices


@dataclass
class SliceInstance:
    """An instance together with its typing into a fixed base instance."""

    typing: Transformation

    def __post_init__(self):
        if is_natural(self.typing):
            raise TypingMismatchError("slice typing must be natural")

    @property
    def total(self) -> CSetInstance:
        return self.typing.dom

    @property
    def base(self) -> CSetInstance:
        return self.typing.cod


def _element_names(x: CSetInstance) -> tuple[dict, dict]:
    """Names for the objects/generators of the category of elements of x."""
    sep = ""
    plain_objs = {(obj, p): f"{obj}{p}" for obj in x.schema.objects for p in x.parts(obj)}
    plain_gens = {
        (g.name, p): f"{g.name}{p}" for g in x.schema.generators for p in x.parts(g.dom)
    }
    names = list(plain_objs.values()) + list(plain_gens.values())
    if len(set(names)) != len(names):
        sep = "#"
        plain_objs = {k: f"{k[0]}{sep}{k[1]}" for k in plain_objs}
        plain_gens = {k: f"{k[0]}{sep}{k[1]}" for k in plain_gens}
    return plain_objs, plain_gens


def slice_schema(x: CSetInstance) -> SchemaPresentation:
    """Category of elements of x presented as a schema.

    One object per part of x, one generator per (generator, part) pair,
    with the base equations instantiated at every part.
    """
    obj_names, gen_names = _element_names(x)
    objects = [obj_names[(obj, p)] for obj in x.schema.objects for p in x.parts(obj)]
    generators = []
    for g in x.schema.generators:
        for p in x.parts(g.dom):
            generators.append(
                Generator(
                    gen_names[(g.name, p)],
                    obj_names[(g.dom, p)],
                    obj_names[(g.cod, x.apply(g.name, p))],
                )
            )

    def instantiate(path: SchemaPath, part: int) -> SchemaPath:
        comps = []
        cur = part
        for name in path.components:
            comps.append(gen_names[(name, cur)])
            cur = x.apply(name, cur)
        return SchemaPath(obj_names[(path.source, part)], tuple(comps))

    equations = []
    for lhs, rhs in x.schema.equations:
        for part in x.parts(lhs.source):
            equations.append((instantiate(lhs, part), instantiate(rhs, part)))
    return SchemaPresentation(objects, generators, equations)


@dataclass
class MigratedSlice:
    instance: CSetInstance
    schema: SchemaPresentation
    fibers: dict[tuple[str, int], list[int]]


def slice_to_cset(s: SliceInstance) -> MigratedSlice:
    """Migrate a slice to an instance on the category-of-elements schema."""
    base = s.base
    schema = slice_schema(base)
    obj_names, gen_names = _element_names(base)
    fibers: dict[tuple[str, int], list[int]] = {
        (obj, p): [] for obj in base.schema.objects for p in base.parts(obj)
    }
    for obj in base.schema.objects:
        for part in s.total.parts(obj):
            fibers[(obj, s.typing.comp[obj][part - 1])].append(part)
    local = {key: {p: i + 1 for i, p in enumerate(parts)} for key, parts in fibers.items()}
    card = {obj_names[key]: len(parts) for key, parts in fibers.items()}
    columns: dict[str, list[int]] = {}
    for g in base.schema.generators:
        for p in base.parts(g.dom):
            q = base.apply(g.name, p)
            columns[gen_names[(g.name, p)]] = [
                local[(g.cod, q)][s.total.apply(g.name, t)] for t in fibers[(g.dom, p)]
            ]
    return MigratedSlice(make_instance(schema, card, columns), schema, fibers)


def cset_to_slice(inst: CSetInstance, base: CSetInstance) -> SliceInstance:
    """Inverse migration: rebuild the typed instance from element fibers."""
    schema = slice_schema(base)
    if inst.schema != schema:
        raise ValueError("instance does not live on the category of elements of the base")
    obj_names, gen_names = _element_names(base)
    offsets: dict[tuple[str, int], int] = {}
    card: dict[str, int] = {}
    typing: dict[str, list[int]] = {}
    for obj in base.schema.objects:
        total = 0
        typing[obj] = []
        for p in base.parts(obj):
            offsets[(obj, p)] = total
            n = inst.card[obj_names[(obj, p)]]
            typing[obj].extend([p] * n)
            total += n
        card[obj] = total
    columns: dict[str, list[int]] = {}
    for g in base.schema.generators:
        col = [0] * card[g.dom]
        for p in base.parts(g.dom):
            q = base.apply(g.name, p)
            for i, v in enumerate(inst.column[gen_names[(g.name, p)]], start=1):
                col[offsets[(g.dom, p)] + i - 1] = offsets[(g.cod, q)] + v
        columns[g.name] = col
    total_inst = make_instance(base.schema, card, columns)
    return SliceInstance(Transformation(total_inst, base, typing))


def migrate_transformation(
    f: Transformation, dom_mig: MigratedSlice, cod_mig: MigratedSlice,
    dom_slice: SliceInstance, cod_slice: SliceInstance,
) -> Transformation:
    """Transport a typing-preserving map to the migrated representation."""
    if f.compose(cod_slice.typing) != dom_slice.typing:
        raise TypingMismatchError("map does not commute with the slice typings")
    obj_names, _ = _element_names(dom_slice.base)
    cod_local = {
        key: {p: i + 1 for i, p in enumerate(parts)} for key, parts in cod_mig.fibers.items()
    }
    comp: dict[str, list[int]] = {}
    for obj in dom_slice.base.schema.objects:
        for p in dom_slice.base.parts(obj):
            comp[obj_names[(obj, p)]] = [
                cod_local[(obj, p)][f.comp[obj][t - 1]] for t in dom_mig.fibers[(obj, p)]
            ]
    return Transformation(dom_mig.instance, cod_mig.instance, comp)


def slice_rewrite(
    rule: Rule, match: Transformation, typings: dict[str, Transformation]
) -> tuple[SliceInstance, RewriteOutcome]:
    """DPO rewrite performed over a fixed base instance.

    `typings` maps "L", "I", "R", "G" to the typing morphisms. The rule
    and match must commute with them; the result typing is induced by the
    universal property of the result pushout.
    """
    t_l, t_i, t_r, t_g = (typings[k] for k in ("L", "I", "R", "G"))
    base = t_g.cod
    for t in (t_l, t_i, t_r):
        if t.cod != base:
            raise TypingMismatchError("all typings must target the same base instance")
    if rule.l.compose(t_l) != t_i or rule.r.compose(t_r) != t_i:
        raise TypingMismatchError("rule legs do not commute with the typings")
    if match.compose(t_g) != t_l:
        raise TypingMismatchError("match does not commute with the typings")
    outcome = rewrite_dpo(rule, match)
    t_k = outcome.maps["k_to_g"].compose(t_g)
    from .colimits import cocone_induced

    t_result = cocone_induced(
        outcome.maps["r_to_result"], outcome.maps["k_to_result"], t_r, t_k
    )
    return SliceInstance(t_result), outcome


# ---------------------------------------------------------------------------
# Structured cospans


def interface_objects(schema: SchemaPresentation) -> list[str]:
    """Default interface: objects with no outgoing generators."""
    return [obj for obj in schema.objects if not schema.outgoing(obj)]


def is_discrete(x: CSetInstance) -> bool:
    """No parts at any object with outgoing generators."""
    return all(x.card[obj] == 0 for obj in x.schema.objects if x.schema.outgoing(obj))


def discrete_instance(schema: SchemaPresentation, card: dict[str, int]) -> CSetInstance:
    bad = [obj for obj, n in card.items() if n and schema.outgoing(obj)]
    if bad:
        raise ValueError(f"interface objects must have no outgoing generators: {bad}")
    return make_instance(schema, card, {})


@dataclass
class StructuredCospan:
    """An open system: discrete feet included into a common apex."""

    in_leg: Transformation
    out_leg: Transformation

    def __post_init__(self):
        if self.in_leg.cod != self.out_leg.cod:
            raise ValueError("cospan legs must share their apex")
        for leg in (self.in_leg, self.out_leg):
            if not is_discrete(leg.dom):
                raise ValueError("cospan feet must be discrete instances")
            if is_natural(leg):
                raise ValueError("cospan legs must be natural")

    @property
    def apex(self) -> CSetInstance:
        return self.in_leg.cod

    @property
    def foot_in(self) -> CSetInstance:
        return self.in_leg.dom

    @property
    def foot_out(self) -> CSetInstance:
        return self.out_leg.dom


def identity_cospan(foot: CSetInstance) -> StructuredCospan:
    from .transform import identity

    return StructuredCospan(identity(foot), identity(foot))


def compose_cospans(a: StructuredCospan, b: StructuredCospan) -> StructuredCospan:
    """Glue two open systems along their shared foot by pushout."""
    if a.foot_out != b.foot_in:
        raise FootMismatchError("output foot of the first cospan must equal the input foot of the second")
    po = pushout(a.out_leg, b.in_leg)
    return StructuredCospan(a.in_leg.compose(po.leg_b), b.out_leg.compose(po.leg_c))


@dataclass
class CospanMorphism:
    """Apex and foot maps between structured cospans, commuting with the legs."""

    dom: StructuredCospan
    cod: StructuredCospan
    apex_map: Transformation
    in_map: Transformation
    out_map: Transformation

    def __post_init__(self):
        if self.dom.in_leg.compose(self.apex_map) != self.in_map.compose(self.cod.in_leg):
            raise CommutativityFailureError("input foot square does not commute")
        if self.dom.out_leg.compose(self.apex_map) != self.out_map.compose(self.cod.out_leg):
            raise CommutativityFailureError("output foot square does not commute")


@dataclass
class OpenRule:
    l: CospanMorphism
    r: CospanMorphism

    def __post_init__(self):
        if self.l.dom != self.r.dom:
            raise ValueError("open rule legs must share their interface cospan")


@dataclass
class OpenRewriteOutcome:
    result: StructuredCospan
    k: StructuredCospan
    maps: dict[str, dict[str, Transformation]] = field(default_factory=dict)


def open_rewrite(rule: OpenRule, match: CospanMorphism) -> OpenRewriteOutcome:
    """DPO rewriting of structured cospans, foot- and apex-wise.

    Pushout complements run at each level; the feet of the intermediate
    and result cospans are connected to their apexes by induced maps,
    which must exist for the rewrite to be well formed.
    """
    if match.dom != rule.l.cod:
        raise ValueError("match must start at the rule's left-hand cospan")
    levels = {
        "in": (rule.l.in_map, match.in_map, rule.r.in_map),
        "apex": (rule.l.apex_map, match.apex_map, rule.r.apex_map),
        "out": (rule.l.out_map, match.out_map, rule.r.out_map),
    }
    violations = []
    for level, (l_map, m_map, _) in levels.items():
        for v in check_pushout_complement(l_map, m_map):
            violations.append((level, v))
    if violations:
        raise ComplementViolationsError(violations)
    comp = {level: pushout_complement(l_map, m_map) for level, (l_map, m_map, _) in levels.items()}
    g_cospan = match.cod

    def induced_leg(foot_level: str, g_leg: Transformation) -> Transformation:
        _, k_to_g_foot = comp[foot_level]
        _, k_to_g_apex = comp["apex"]
        back = {
            obj: {old: new + 1 for new, old in enumerate(k_to_g_apex.comp[obj])}
            for obj in g_leg.dom.schema.objects
        }
        comp_map: dict[str, list[int]] = {}
        for obj in g_leg.dom.schema.objects:
            col = []
            for part in k_to_g_foot.dom.parts(obj):
                target = g_leg.comp[obj][k_to_g_foot.comp[obj][part - 1] - 1]
                if target not in back[obj]:
                    raise CommutativityFailureError(
                        f"foot part {part} of {obj!r} survives but its apex image is deleted"
                    )
                col.append(back[obj][target])
            comp_map[obj] = col
        leg = Transformation(k_to_g_foot.dom, k_to_g_apex.dom, comp_map)
        if is_natural(leg):
            raise CommutativityFailureError("induced intermediate leg is not natural")
        return leg

    k_cospan = StructuredCospan(
        induced_leg("in", g_cospan.in_leg), induced_leg("out", g_cospan.out_leg)
    )
    pos = {level: pushout(levels[level][2], comp[level][0]) for level in levels}

    def result_leg(foot_level: str, rhs_leg: Transformation, k_leg: Transformation) -> Transformation:
        try:
            return pos[foot_level].universal(
                rhs_leg.compose(pos["apex"].leg_b), k_leg.compose(pos["apex"].leg_c)
            )
        except ValueError as exc:
            raise CommutativityFailureError(str(exc)) from exc

    h_cospan = StructuredCospan(
        result_leg("in", rule.r.cod.in_leg, k_cospan.in_leg),
        result_leg("out", rule.r.cod.out_leg, k_cospan.out_leg),
    )
    maps = {
        level: {
            "i_to_k": comp[level][0],
            "k_to_g": comp[level][1],
            "r_to_result": pos[level].leg_b,
            "k_to_result": pos[level].leg_c,
        }
        for level in levels
    }
    return OpenRewriteOutcome(result=h_cospan, k=k_cospan, maps=maps)


# ---------------------------------------------------------------------------
# Diagrams


@dataclass
class Diagram:
    """A finite shape graph labelled with instances and transformations."""

    nodes: list[tuple[str, CSetInstance]]
    arrows: list[tuple[str, str, Transformation]]

    def __post_init__(self):
        labels = dict(self.nodes)
        if len(labels) != len(self.nodes):
            raise ValueError("diagram node ids must be unique")
        for src, tgt, t in self.arrows:
            if src not in labels or tgt not in labels:
                raise ValueError(f"arrow {src!r} -> {tgt!r} references an unknown node")
            if t.dom != labels[src] or t.cod != labels[tgt]:
                raise ValueError(f"arrow {src!r} -> {tgt!r} label has wrong endpoints")
            if is_natural(t):
                raise ValueError(f"arrow {src!r} -> {tgt!r} label is not natural")


def diagram_colimit(d: Diagram) -> tuple[CSetInstance, dict[str, Transformation]]:
    """Colimit apex plus one cocone leg per node.

    Computed as the coproduct of the node labels coequalized along every
    arrow, with the same union-find quotient used by pushouts.
    """
    if not d.nodes:
        raise ValueError("diagram colimit needs at least one node")
    ids = [node_id for node_id, _ in d.nodes]
    labels = dict(d.nodes)
    schema = d.nodes[0][1].schema
    total, injections = coproduct([inst for _, inst in d.nodes])
    inj = dict(zip(ids, injections))
    uf = {obj: _UnionFind(total.card[obj]) for obj in schema.objects}
    for src, tgt, t in d.arrows:
        for obj in schema.objects:
            for part in labels[src].parts(obj):
                uf[obj].union(
                    inj[src].comp[obj][part - 1] - 1,
                    inj[tgt].comp[obj][t.comp[obj][part - 1] - 1] - 1,
                )
    class_id: dict[str, dict[int, int]] = {}
    card: dict[str, int] = {}
    for obj in schema.objects:
        roots = sorted({uf[obj].find(i) for i in range(total.card[obj])})
        class_id[obj] = {root: i + 1 for i, root in enumerate(roots)}
        card[obj] = len(roots)

    def cls(obj: str, part: int) -> int:
        return class_id[obj][uf[obj].find(part - 1)]

    columns = {
        gen.name: [0] * card[gen.dom] for gen in schema.generators
    }
    for gen in schema.generators:
        for part in total.parts(gen.dom):
            columns[gen.name][cls(gen.dom, part) - 1] = cls(gen.cod, total.apply(gen.name, part))
    apex = make_instance(schema, card, columns)
    legs = {
        node_id: Transformation(
            labels[node_id],
            apex,
            {
                obj: [cls(obj, inj[node_id].comp[obj][p - 1]) for p in labels[node_id].parts(obj)]
                for obj in schema.objects
            },
        )
        for node_id in ids
    }
    return apex, legs
