"""Componentwise (co)limits of C-set instances.

Everything here reduces to finite-set constructions applied one object at
a time: pushouts quotient a disjoint union with union-find, pullbacks
enumerate agreeing pairs, and the partial map classifier decorates parts
with subfunctors of representables. Columns always descend to the
constructed instances because the inputs are natural.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ComplementViolationsError, NotMonicError
from .instance import CSetInstance, delete_parts, make_instance
from .schema import PathUniverse, SchemaPath
from .search import homomorphisms
from .transform import Transformation, identity


@dataclass
class Span:
    left: Transformation
    right: Transformation

    def __post_init__(self):
        if self.left.dom != self.right.dom:
            raise ValueError("span legs must share their domain")


@dataclass
class Cospan:
    left: Transformation
    right: Transformation

    def __post_init__(self):
        if self.left.cod != self.right.cod:
            raise ValueError("cospan legs must share their codomain")


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        # canonical representative: smallest slot
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra


@dataclass
class PushoutResult:
    apex: CSetInstance
    leg_b: Transformation
    leg_c: Transformation
    f: Transformation
    g: Transformation

    @property
    def cospan(self) -> Cospan:
        return Cospan(self.leg_b, self.leg_c)

    def universal(self, u: Transformation, v: Transformation) -> Transformation:
        """Mediating map out of the apex for a commuting cocone (u, v)."""
        if u.cod != v.cod:
            raise ValueError("cocone legs must share their codomain")
        if self.f.compose(u) != self.g.compose(v):
            raise ValueError("cocone does not commute with the defining span")
        return cocone_induced(self.leg_b, self.leg_c, u, v)


def cocone_induced(
    leg_b: Transformation, leg_c: Transformation, u: Transformation, v: Transformation
) -> Transformation:
    """The map out of a jointly-surjective cospan determined by (u, v)."""
    apex = leg_b.cod
    comp: dict[str, list[int]] = {}
    for obj in apex.schema.objects:
        col = [0] * apex.card[obj]
        for part, target in zip(leg_b.comp[obj], u.comp[obj]):
            col[part - 1] = target
        for part, target in zip(leg_c.comp[obj], v.comp[obj]):
            if col[part - 1] and col[part - 1] != target:
                raise ValueError(f"cocone legs disagree on part {part} of {obj!r}")
            col[part - 1] = target
        if 0 in col:
            raise ValueError(f"legs do not jointly cover object {obj!r}")
        comp[obj] = col
    return Transformation(apex, u.cod, comp)


def pushout(f: Transformation, g: Transformation) -> PushoutResult:
    """Pushout of B <-f- A -g-> C, componentwise over each object.

    The apex quotients B + C by f(a) ~ g(a); class representatives are the
    smallest members (B parts first), and apex parts are numbered densely
    in representative order.
    """
    if f.dom != g.dom:
        raise ValueError("pushout requires a shared domain")
    a, b, c = f.dom, f.cod, g.cod
    schema = a.schema
    uf: dict[str, _UnionFind] = {}
    for obj in schema.objects:
        uf[obj] = _UnionFind(b.card[obj] + c.card[obj])
        for part in a.parts(obj):
            uf[obj].union(f.comp[obj][part - 1] - 1, b.card[obj] + g.comp[obj][part - 1] - 1)
    class_id: dict[str, dict[int, int]] = {}
    card: dict[str, int] = {}
    for obj in schema.objects:
        roots = sorted({uf[obj].find(i) for i in range(b.card[obj] + c.card[obj])})
        class_id[obj] = {root: i + 1 for i, root in enumerate(roots)}
        card[obj] = len(roots)

    def slot_class(obj: str, slot: int) -> int:
        return class_id[obj][uf[obj].find(slot)]

    columns: dict[str, list[int]] = {}
    for gen in schema.generators:
        col = [0] * card[gen.dom]
        for part in b.parts(gen.dom):
            col[slot_class(gen.dom, part - 1) - 1] = slot_class(gen.cod, b.apply(gen.name, part) - 1)
        for part in c.parts(gen.dom):
            col[slot_class(gen.dom, b.card[gen.dom] + part - 1) - 1] = slot_class(
                gen.cod, b.card[gen.cod] + c.apply(gen.name, part) - 1
            )
        columns[gen.name] = col
    apex = make_instance(schema, card, columns)
    leg_b = Transformation(
        b, apex, {obj: [slot_class(obj, i) for i in range(b.card[obj])] for obj in schema.objects}
    )
    leg_c = Transformation(
        c,
        apex,
        {
            obj: [slot_class(obj, b.card[obj] + i) for i in range(c.card[obj])]
            for obj in schema.objects
        },
    )
    return PushoutResult(apex, leg_b, leg_c, f, g)


def coproduct(instances: list[CSetInstance]) -> tuple[CSetInstance, list[Transformation]]:
    """Disjoint union with injections; parts stack in argument order."""
    if not instances:
        raise ValueError("coproduct of no instances needs an explicit schema")
    schema = instances[0].schema
    card = {obj: sum(x.card[obj] for x in instances) for obj in schema.objects}
    columns: dict[str, list[int]] = {g.name: [] for g in schema.generators}
    offsets: list[dict[str, int]] = []
    running = {obj: 0 for obj in schema.objects}
    for x in instances:
        if x.schema != schema:
            raise ValueError("coproduct requires a shared schema")
        offsets.append(dict(running))
        for gen in schema.generators:
            shift = running[gen.cod]
            columns[gen.name].extend(v + shift for v in x.column[gen.name])
        for obj in schema.objects:
            running[obj] += x.card[obj]
    apex = make_instance(schema, card, columns)
    injections = [
        Transformation(
            x,
            apex,
            {obj: [offsets[i][obj] + p for p in x.parts(obj)] for obj in schema.objects},
        )
        for i, x in enumerate(instances)
    ]
    return apex, injections


@dataclass
class PullbackResult:
    apex: CSetInstance
    p1: Transformation
    p2: Transformation
    f: Transformation
    g: Transformation

    @property
    def span(self) -> Span:
        return Span(self.p1, self.p2)

    def universal(self, u: Transformation, v: Transformation) -> Transformation:
        """Mediating map into the apex for a commuting cone (u, v)."""
        if u.dom != v.dom:
            raise ValueError("cone legs must share their domain")
        if u.compose(self.f) != v.compose(self.g):
            raise ValueError("cone does not commute with the defining cospan")
        lookup = {
            obj: {
                (self.p1.comp[obj][i], self.p2.comp[obj][i]): i + 1
                for i in range(self.apex.card[obj])
            }
            for obj in self.apex.schema.objects
        }
        comp = {
            obj: [
                lookup[obj][(u.comp[obj][i], v.comp[obj][i])] for i in range(u.dom.card[obj])
            ]
            for obj in self.apex.schema.objects
        }
        return Transformation(u.dom, self.apex, comp)


def pullback(f: Transformation, g: Transformation) -> PullbackResult:
    """Pullback of B -f-> D <-g- C: agreeing pairs, ordered lexicographically."""
    if f.cod != g.cod:
        raise ValueError("pullback requires a shared codomain")
    b, c = f.dom, g.dom
    schema = b.schema
    pairs: dict[str, list[tuple[int, int]]] = {}
    pair_id: dict[str, dict[tuple[int, int], int]] = {}
    for obj in schema.objects:
        pairs[obj] = [
            (pb, pc)
            for pb in b.parts(obj)
            for pc in c.parts(obj)
            if f.comp[obj][pb - 1] == g.comp[obj][pc - 1]
        ]
        pair_id[obj] = {pair: i + 1 for i, pair in enumerate(pairs[obj])}
    card = {obj: len(pairs[obj]) for obj in schema.objects}
    columns = {
        gen.name: [
            pair_id[gen.cod][(b.apply(gen.name, pb), c.apply(gen.name, pc))]
            for pb, pc in pairs[gen.dom]
        ]
        for gen in schema.generators
    }
    apex = make_instance(schema, card, columns)
    p1 = Transformation(apex, b, {obj: [pb for pb, _ in pairs[obj]] for obj in schema.objects})
    p2 = Transformation(apex, c, {obj: [pc for _, pc in pairs[obj]] for obj in schema.objects})
    return PullbackResult(apex, p1, p2, f, g)


@dataclass(frozen=True)
class IdentificationViolation:
    object: str
    part_a: int
    part_b: int

    def __str__(self):
        return (
            f"parts {self.part_a} and {self.part_b} of {self.object!r} are merged "
            f"but not both preserved"
        )


@dataclass(frozen=True)
class DanglingViolation:
    generator: str
    part: int

    def __str__(self):
        return f"surviving part {self.part} references a deleted part via {self.generator!r}"


def check_pushout_complement(f: Transformation, g: Transformation) -> list:
    """Identification and dangling conditions for A -f-> B -g-> C.

    Identification: parts of B merged by g must come from f's image.
    Dangling: a part of C whose image under some column is slated for
    deletion must itself be slated for deletion.
    """
    if f.cod != g.dom:
        raise ValueError("check requires composable transformations")
    if not f.is_monic():
        raise NotMonicError("pushout complements need a monic first leg")
    schema = f.dom.schema
    b, c = f.cod, g.cod
    out: list = []
    preserved = {obj: f.image(obj) for obj in schema.objects}
    deleted = {
        obj: {g.comp[obj][p - 1] for p in b.parts(obj) if p not in preserved[obj]}
        for obj in schema.objects
    }
    for obj in schema.objects:
        seen: dict[int, int] = {}
        for part in b.parts(obj):
            image = g.comp[obj][part - 1]
            if image in seen:
                first = seen[image]
                if not (first in preserved[obj] and part in preserved[obj]):
                    out.append(IdentificationViolation(obj, first, part))
            else:
                seen[image] = part
    for gen in schema.generators:
        for part in c.parts(gen.dom):
            if c.apply(gen.name, part) in deleted[gen.cod] and part not in deleted[gen.dom]:
                out.append(DanglingViolation(gen.name, part))
    return out


def pushout_complement(
    f: Transformation, g: Transformation
) -> tuple[Transformation, Transformation]:
    """Unique D with A -> D -> C completing the square as a pushout.

    D is C minus the non-preserved image of B, compacted densely; the
    returned maps are A -> D and the (monic) inclusion D -> C.
    """
    violations = check_pushout_complement(f, g)
    if violations:
        raise ComplementViolationsError(violations)
    schema = f.dom.schema
    b, c = f.cod, g.cod
    preserved = {obj: f.image(obj) for obj in schema.objects}
    deleted = {
        obj: {g.comp[obj][p - 1] for p in b.parts(obj) if p not in preserved[obj]}
        for obj in schema.objects
    }
    d, renumber = delete_parts(c, deleted)
    a_to_d = Transformation(
        f.dom,
        d,
        {
            obj: [
                renumber[obj][g.comp[obj][f.comp[obj][part - 1] - 1] - 1]
                for part in f.dom.parts(obj)
            ]
            for obj in schema.objects
        },
    )
    d_to_c: dict[str, list[int]] = {}
    for obj in schema.objects:
        col = [0] * d.card[obj]
        for old, new in enumerate(renumber[obj], start=1):
            if new is not None:
                col[new - 1] = old
        d_to_c[obj] = col
    return a_to_d, Transformation(d, c, d_to_c)


class Classifier:
    """Partial map classifier T(X) for an instance on an acyclic schema.

    A part of T(X) at object c is a pair (S, h): S is a subfunctor of the
    representable at c (elements are equation-classes of paths out of c)
    and h maps S naturally into X. The unit sends x to the full
    representable evaluated at x; parts outside the unit's image encode
    the ways a partial map can be undefined.
    """

    def __init__(self, x: CSetInstance):
        self.x = x
        schema = x.schema
        self.schema = schema
        self.universe = PathUniverse(schema)
        self._classes: dict[str, dict[str, list[list[SchemaPath]]]] = {}
        self._class_idx: dict[str, dict[str, dict[SchemaPath, int]]] = {}
        for c in schema.objects:
            self._classes[c] = {d: self.universe.classes_between(c, d) for d in schema.objects}
            self._class_idx[c] = {
                d: {members[0]: i for i, members in enumerate(cls)}
                for d, cls in self._classes[c].items()
            }
        # element records per object: (S, h) with S = {obj: tuple of class ids}
        # and h = {obj: tuple of X-parts aligned with S[obj]}
        self.elements: dict[str, list[tuple[dict, dict]]] = {}
        self._index: dict[str, dict[tuple, int]] = {}
        for c in schema.objects:
            records = []
            for sub in self._subfunctors(c):
                sub_inst, locs = self._subfunctor_instance(c, sub)
                for h in homomorphisms(sub_inst, x):
                    hvals = {
                        d: tuple(h.comp[d][loc - 1] for loc in locs[d]) for d in schema.objects
                    }
                    records.append((sub, hvals))
            self.elements[c] = records
            self._index[c] = {self._key(s, h): i + 1 for i, (s, h) in enumerate(records)}
        card = {c: len(self.elements[c]) for c in schema.objects}
        columns = {
            gen.name: [
                self._push_along(gen.dom, gen.name, record)
                for record in self.elements[gen.dom]
            ]
            for gen in schema.generators
        }
        self.instance = make_instance(schema, card, columns)
        self.eta = Transformation(
            x,
            self.instance,
            {
                c: [self._index[c][self._eta_key(c, part)] for part in x.parts(c)]
                for c in schema.objects
            },
        )

    def __iter__(self):
        """Unpack as (instance, eta)."""
        return iter((self.instance, self.eta))

    def _rep_path(self, c: str, d: str, k: int) -> SchemaPath:
        return self._classes[c][d][k][0]

    def _act(self, c: str, d: str, k: int, gen_name: str) -> tuple[str, int]:
        """Postcompose class k of c->d with a generator out of d."""
        gen = self.schema.generator(gen_name)
        path = self._rep_path(c, d, k)
        extended = SchemaPath(c, path.components + (gen_name,))
        return gen.cod, self._class_idx[c][gen.cod][self.universe.canonical(extended)]

    def _subfunctors(self, c: str):
        """Subsets of the representable at c closed under the column action.

        Objects are processed sinks-first so every forced element is
        already decided when a subset is proposed.
        """
        order = self._topo_order()
        rev = [d for d in reversed(order)]
        chosen: dict[str, tuple[int, ...]] = {}
        results: list[dict[str, tuple[int, ...]]] = []

        def fill(i: int) -> None:
            if i == len(rev):
                results.append(dict(chosen))
                return
            d = rev[i]
            n = len(self._classes[c][d])
            for mask in range(1 << n):
                subset = tuple(k for k in range(n) if mask >> k & 1)
                ok = True
                for k in subset:
                    for gen in self.schema.outgoing(d):
                        d2, k2 = self._act(c, d, k, gen.name)
                        if k2 not in chosen[d2]:
                            ok = False
                            break
                    if not ok:
                        break
                if ok:
                    chosen[d] = subset
                    fill(i + 1)
            chosen.pop(d, None)

        fill(0)
        results.sort(key=lambda sub: tuple(sub[d] for d in self.schema.objects))
        return results

    def _topo_order(self) -> list[str]:
        seen: dict[str, bool] = {}
        order: list[str] = []

        def visit(obj: str) -> None:
            if obj in seen:
                return
            seen[obj] = True
            for gen in self.schema.outgoing(obj):
                visit(gen.cod)
            order.append(obj)

        for obj in self.schema.objects:
            visit(obj)
        return list(reversed(order))

    def _subfunctor_instance(self, c: str, sub: dict[str, tuple[int, ...]]):
        local = {d: {k: i + 1 for i, k in enumerate(sub[d])} for d in self.schema.objects}
        card = {d: len(sub[d]) for d in self.schema.objects}
        columns = {}
        for gen in self.schema.generators:
            col = [0] * card[gen.dom]
            for k in sub[gen.dom]:
                d2, k2 = self._act(c, gen.dom, k, gen.name)
                col[local[gen.dom][k] - 1] = local[d2][k2]
            columns[gen.name] = col
        inst = make_instance(self.schema, card, columns)
        locs = {d: [local[d][k] for k in sub[d]] for d in self.schema.objects}
        return inst, locs

    @staticmethod
    def _key(sub: dict, hvals: dict) -> tuple:
        return tuple((d, tuple(sub[d]), tuple(hvals[d])) for d in sorted(sub))

    def _eta_key(self, c: str, part: int) -> tuple:
        sub = {d: tuple(range(len(self._classes[c][d]))) for d in self.schema.objects}
        hvals = {
            d: tuple(
                self.x.apply_path(self._rep_path(c, d, k), part) for k in sub[d]
            )
            for d in self.schema.objects
        }
        return self._key(sub, hvals)

    def _push_along(self, c: str, gen_name: str, record: tuple[dict, dict]) -> int:
        """Image of a T-part under the column for a generator c -> c'."""
        gen = self.schema.generator(gen_name)
        c2 = gen.cod
        sub, hvals = record
        pos = {d: {k: i for i, k in enumerate(sub[d])} for d in self.schema.objects}
        new_sub: dict[str, tuple[int, ...]] = {}
        new_h: dict[str, tuple[int, ...]] = {}
        for d in self.schema.objects:
            picked = []
            vals = []
            for k2 in range(len(self._classes[c2][d])):
                path = self._rep_path(c2, d, k2)
                pre = self.universe.canonical(SchemaPath(c, (gen_name,) + path.components))
                k = self._class_idx[c][d][pre]
                if k in pos[d]:
                    picked.append(k2)
                    vals.append(hvals[d][pos[d][k]])
            new_sub[d] = tuple(picked)
            new_h[d] = tuple(vals)
        return self._index[c2][self._key(new_sub, new_h)]

    def classify_partial(self, sub: Transformation, f: Transformation) -> Transformation:
        """Total map A -> T(X) classifying the partial map (sub: A' -> A, f: A' -> X)."""
        if not sub.is_monic():
            raise NotMonicError("the domain of a partial map must include monically")
        if sub.dom != f.dom:
            raise ValueError("partial map legs must share their domain")
        a = sub.cod
        inverse = {
            d: {sub.comp[d][i]: i + 1 for i in range(sub.dom.card[d])}
            for d in self.schema.objects
        }
        comp: dict[str, list[int]] = {}
        for c in self.schema.objects:
            col = []
            for part in a.parts(c):
                sel: dict[str, tuple[int, ...]] = {}
                hvals: dict[str, tuple[int, ...]] = {}
                for d in self.schema.objects:
                    picked = []
                    vals = []
                    for k in range(len(self._classes[c][d])):
                        value = a.apply_path(self._rep_path(c, d, k), part)
                        if value in inverse[d]:
                            picked.append(k)
                            vals.append(f.comp[d][inverse[d][value] - 1])
                    sel[d] = tuple(picked)
                    hvals[d] = tuple(vals)
                col.append(self._index[c][self._key(sel, hvals)])
            comp[c] = col
        return Transformation(a, self.instance, comp)


def partial_map_classifier(x: CSetInstance) -> Classifier:
    """Classifier with `.instance` T(X) and unit `.eta`: X -> T(X)."""
    return Classifier(x)


def classifier_map(tdom: Classifier, tcod: Classifier, f: Transformation) -> Transformation:
    """Functorial action T(f): T(X) -> T(Y) postcomposing decorations with f."""
    comp: dict[str, list[int]] = {}
    for c in tdom.schema.objects:
        col = []
        for sub, hvals in tdom.elements[c]:
            pushed = {d: tuple(f.comp[d][v - 1] for v in hvals[d]) for d in tdom.schema.objects}
            col.append(tcod._index[c][Classifier._key(sub, pushed)])
        comp[c] = col
    return Transformation(tdom.instance, tcod.instance, comp)


def final_pullback_complement(
    l: Transformation, match: Transformation
) -> tuple[Transformation, Transformation]:
    """Final pullback complement of I -l-> L -match-> G (match monic).

    Constructed by pulling back the classifying map of the match against
    T(l); every other pullback complement factors uniquely through it.
    Returns (I -> K, K -> G).
    """
    if not match.is_monic():
        raise NotMonicError("final pullback complements require a monic match")
    t_l = Classifier(match.dom)
    t_i = Classifier(l.dom)
    chi = t_l.classify_partial(match, identity(match.dom))
    pushed = classifier_map(t_i, t_l, l)
    pb = pullback(chi, pushed)
    k = pb.universal(l.compose(match), t_i.eta)
    return k, pb.p1
