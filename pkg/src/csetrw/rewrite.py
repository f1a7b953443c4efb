"""DPO, SPO and SqPO rewriting of C-set instances.

A rule is a span L <-l- I -r-> R. DPO deletes exactly what the rule
names and refuses otherwise; SPO cascades deletions through the columns;
SqPO additionally copies context when l identifies parts.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .colimits import (
    check_pushout_complement,
    final_pullback_complement,
    pushout,
    pushout_complement,
)
from .errors import MatchNotNaturalError, NotMonicError
from .instance import CSetInstance, restrict
from .search import SearchOptions, homomorphisms
from .transform import Transformation, is_natural

DPO = "dpo"
SPO = "spo"
SQPO = "sqpo"
KINDS = (DPO, SPO, SQPO)


@dataclass
class Rule:
    l: Transformation
    r: Transformation
    kind: str = DPO

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown rewrite kind {self.kind!r}")
        if self.l.dom != self.r.dom:
            raise ValueError("rule legs must share their interface instance")

    @property
    def lhs(self) -> CSetInstance:
        return self.l.cod

    @property
    def interface(self) -> CSetInstance:
        return self.l.dom

    @property
    def rhs(self) -> CSetInstance:
        return self.r.cod


@dataclass
class RewriteOutcome:
    result: CSetInstance
    k: CSetInstance
    maps: dict[str, Transformation] = field(default_factory=dict)


def _check_match(rule: Rule, match: Transformation) -> None:
    if match.dom != rule.lhs:
        raise ValueError("match must start at the rule's left-hand side")
    violations = is_natural(match)
    if violations:
        raise MatchNotNaturalError(f"match is not natural: {violations}")
    if is_natural(rule.l) or is_natural(rule.r):
        raise ValueError("rule legs must be natural transformations")


def rewrite_dpo(rule: Rule, match: Transformation) -> RewriteOutcome:
    """Double pushout step; refuses with the Eq-level violations otherwise."""
    _check_match(rule, match)
    if not rule.l.is_monic():
        raise NotMonicError("DPO requires a monic left rule leg")
    i_to_k, k_to_g = pushout_complement(rule.l, match)
    po = pushout(rule.r, i_to_k)
    return RewriteOutcome(
        result=po.apex,
        k=i_to_k.cod,
        maps={
            "match": match,
            "i_to_k": i_to_k,
            "k_to_g": k_to_g,
            "r_to_result": po.leg_b,
            "k_to_result": po.leg_c,
        },
    )


def deletion_closure(g: CSetInstance, core: dict[str, set[int]]) -> dict[str, set[int]]:
    """Parts whose survival would leave some column dangling.

    Starts from the explicitly deleted core and walks preimages until a
    fixpoint: whenever a part is deleted, so is everything that maps onto
    it through any column.
    """
    deleted = {obj: set(core.get(obj, ())) for obj in g.schema.objects}
    work = [(obj, part) for obj, parts in deleted.items() for part in parts]
    while work:
        obj, part = work.pop()
        for gen in g.schema.generators:
            if gen.cod != obj:
                continue
            for pre in g.index[gen.name][part - 1] if g.index else g.parts(gen.dom):
                if g.apply(gen.name, pre) == part and pre not in deleted[gen.dom]:
                    deleted[gen.dom].add(pre)
                    work.append((gen.dom, pre))
    return deleted


def rewrite_spo(rule: Rule, match: Transformation) -> RewriteOutcome:
    """Single pushout step in the category of partial maps.

    Deletion always wins: parts of G referencing a deleted part die with
    it, and an interface part dies when the match or the right leg
    identifies it with anything dead, taking its image on both sides
    along. The surviving interface is then glued to the surviving piece
    of R by an ordinary pushout, so the step agrees with DPO whenever
    DPO's preconditions hold. The result legs are partial: `r_kept` and
    `k_to_g` name the domains of definition.
    """
    _check_match(rule, match)
    if not rule.l.is_monic():
        raise NotMonicError("SPO requires a monic left rule leg")
    g = match.cod
    schema = g.schema
    interface = rule.interface
    kept_interface = {obj: rule.l.image(obj) for obj in schema.objects}
    core = {
        obj: {
            match.comp[obj][p - 1]
            for p in rule.lhs.parts(obj)
            if p not in kept_interface[obj]
        }
        for obj in schema.objects
    }

    def host_image(obj: str, i: int) -> int:
        return match.comp[obj][rule.l.comp[obj][i - 1] - 1]

    dead_i: dict[str, set[int]] = {obj: set() for obj in schema.objects}
    while True:
        seeds = {
            obj: core[obj] | {host_image(obj, i) for i in dead_i[obj]}
            for obj in schema.objects
        }
        dead_g = deletion_closure(g, seeds)
        new_dead = {
            obj: {i for i in interface.parts(obj) if host_image(obj, i) in dead_g[obj]}
            for obj in schema.objects
        }
        while True:  # deadness spreads through identifications made by r
            grew = False
            for obj in schema.objects:
                dead_values = {rule.r.comp[obj][i - 1] for i in new_dead[obj]}
                for i in interface.parts(obj):
                    if i not in new_dead[obj] and rule.r.comp[obj][i - 1] in dead_values:
                        new_dead[obj].add(i)
                        grew = True
            if not grew:
                break
        if new_dead == dead_i:
            break
        dead_i = new_dead

    kept_g = {obj: set(g.parts(obj)) - dead_g[obj] for obj in schema.objects}
    k, k_to_g = restrict(g, kept_g)
    back = {
        obj: {old: new + 1 for new, old in enumerate(k_to_g.comp[obj])}
        for obj in schema.objects
    }
    dead_r = deletion_closure(
        rule.rhs, {obj: {rule.r.comp[obj][i - 1] for i in dead_i[obj]} for obj in schema.objects}
    )
    kept_r = {obj: set(rule.rhs.parts(obj)) - dead_r[obj] for obj in schema.objects}
    r_bar, r_kept = restrict(rule.rhs, kept_r)
    back_r = {
        obj: {old: new + 1 for new, old in enumerate(r_kept.comp[obj])}
        for obj in schema.objects
    }
    surviving = {
        obj: set(interface.parts(obj)) - dead_i[obj] for obj in schema.objects
    }
    j, j_to_i = restrict(interface, surviving)
    j_to_r = Transformation(
        j,
        r_bar,
        {
            obj: [back_r[obj][rule.r.comp[obj][i - 1]] for i in j_to_i.comp[obj]]
            for obj in schema.objects
        },
    )
    j_to_k = Transformation(
        j,
        k,
        {
            obj: [back[obj][host_image(obj, i)] for i in j_to_i.comp[obj]]
            for obj in schema.objects
        },
    )
    po = pushout(j_to_r, j_to_k)
    return RewriteOutcome(
        result=po.apex,
        k=k,
        maps={
            "match": match,
            "interface_to_i": j_to_i,
            "interface_to_k": j_to_k,
            "k_to_g": k_to_g,
            "r_kept": r_kept,
            "r_to_result": po.leg_b,
            "k_to_result": po.leg_c,
        },
    )


def rewrite_sqpo(rule: Rule, match: Transformation) -> RewriteOutcome:
    """Sesqui-pushout step: final pullback complement, then pushout.

    Supports deletion and creation in unknown context; non-monic left
    legs copy the context of identified parts. The match must be monic
    and the schema acyclic (the classifier is finite only then).
    """
    _check_match(rule, match)
    if not match.is_monic():
        raise NotMonicError("SqPO requires a monic match")
    i_to_k, k_to_g = final_pullback_complement(rule.l, match)
    po = pushout(rule.r, i_to_k)
    return RewriteOutcome(
        result=po.apex,
        k=i_to_k.cod,
        maps={
            "match": match,
            "i_to_k": i_to_k,
            "k_to_g": k_to_g,
            "r_to_result": po.leg_b,
            "k_to_result": po.leg_c,
        },
    )


_ENGINES = {DPO: rewrite_dpo, SPO: rewrite_spo, SQPO: rewrite_sqpo}


def rewrite(rule: Rule, match: Transformation) -> RewriteOutcome:
    """Apply the rule at an explicit match using its declared semantics."""
    return _ENGINES[rule.kind](rule, match)


def find_and_rewrite(
    rule: Rule, g: CSetInstance, opts: SearchOptions | None = None
) -> list[RewriteOutcome]:
    """Enumerate matches, filter the applicable ones, rewrite each.

    Every outcome is computed from the original instance; inapplicable
    DPO matches (identification or dangling failures) are skipped rather
    than reported.
    """
    opts = opts or SearchOptions()
    if rule.kind == SQPO:
        opts = SearchOptions(monic=True, initial=opts.initial, limit=opts.limit, mrv=opts.mrv)
    outcomes = []
    for match in homomorphisms(rule.lhs, g, opts):
        if rule.kind == DPO and check_pushout_complement(rule.l, match):
            continue
        outcomes.append(rewrite(rule, match))
    return outcomes
