from __future__ import annotations

import random

import pytest

from csetrw.colimits import check_pushout_complement
from csetrw.errors import ComplementViolationsError, MatchNotNaturalError, NotMonicError
from csetrw.instance import (
    check_discrete_opfibration,
    elements,
    empty_instance,
    make_instance,
    validate_instance,
)
from csetrw.instance import MissingEdge, MultipleEdges
from csetrw.mesh import flip_rule, gen_mesh, quad_pattern_flipped
from csetrw.rewrite import DPO, SPO, SQPO, Rule, find_and_rewrite, rewrite_dpo, rewrite_spo, rewrite_sqpo
from csetrw.search import SearchOptions, homomorphisms, is_isomorphic
from csetrw.transform import Transformation, identity, is_natural

from oracles import (
    brute_homs,
    random_acyclic_schema,
    random_closed_parts,
    random_instance,
    subinstance,
    typed_graph_minus,
)


def vertex_delete_rule(graph, kind):
    lhs = make_instance(graph, {"V": 1}, {})
    interface = empty_instance(graph)
    return Rule(
        Transformation(interface, lhs, {}),
        Transformation(interface, empty_instance(graph), {}),
        kind=kind,
    )


def test_dpo_identity_rule(small_graph):
    rule = Rule(identity(small_graph), identity(small_graph), kind=DPO)
    out = rewrite_dpo(rule, identity(small_graph))
    assert is_isomorphic(out.result, small_graph) is not None
    for t in out.maps.values():
        assert is_natural(t) == []


def test_dpo_refuses_dangling_match(graph, small_graph):
    rule = vertex_delete_rule(graph, DPO)
    match = Transformation(rule.lhs, small_graph, {"V": [2]})
    with pytest.raises(ComplementViolationsError) as err:
        rewrite_dpo(rule, match)
    assert err.value.violations


def test_dpo_rejects_unnatural_match(graph, small_graph):
    rule = Rule(identity(small_graph), identity(small_graph), kind=DPO)
    bad = Transformation(small_graph, small_graph, {"V": [1, 1, 1], "E": [1, 2, 3]})
    with pytest.raises(MatchNotNaturalError):
        rewrite_dpo(rule, bad)


def test_dpo_edge_flip(two_triangles):
    rule = flip_rule()
    matches = homomorphisms(rule.lhs, two_triangles, SearchOptions(monic=True))
    assert len(matches) == 2
    out = rewrite_dpo(rule, matches[0])
    assert out.k.card == {"V": 4, "E": 4, "T": 0}
    assert is_isomorphic(out.result, quad_pattern_flipped()) is not None
    assert validate_instance(out.result) == []


def test_dpo_flip_reversibility(two_triangles):
    rule = flip_rule()
    reverse = Rule(rule.r, rule.l, kind=DPO)
    match = homomorphisms(rule.lhs, two_triangles, SearchOptions(monic=True))[0]
    out = rewrite_dpo(rule, match)
    # the rewritten-in right-hand side is the match for the reverse rule
    back = rewrite_dpo(reverse, out.maps["r_to_result"])
    assert is_isomorphic(back.result, two_triangles) is not None


def test_spo_deletes_in_unknown_context(graph):
    g = make_instance(graph, {"V": 3, "E": 2}, {"src": [1, 2], "tgt": [2, 3]})
    rule = vertex_delete_rule(graph, SPO)
    out = rewrite_spo(rule, Transformation(rule.lhs, g, {"V": [2]}))
    assert out.result.card == {"V": 2, "E": 0}
    assert validate_instance(out.result) == []


def test_spo_cascades_through_triangles(d2, triangle):
    # deleting one boundary edge also deletes the triangle above it
    lhs = make_instance(d2, {"V": 2, "E": 1}, {"src": [1], "tgt": [2]})
    interface = make_instance(d2, {"V": 2}, {})
    rule = Rule(
        Transformation(interface, lhs, {"V": [1, 2]}),
        Transformation(interface, make_instance(d2, {"V": 2}, {}), {"V": [1, 2]}),
        kind=SPO,
    )
    match = Transformation(lhs, triangle, {"V": [1, 2], "E": [2]})
    out = rewrite_spo(rule, match)
    assert out.result.card == {"V": 3, "E": 2, "T": 0}


def test_spo_identity_rule(small_graph):
    rule = Rule(identity(small_graph), identity(small_graph), kind=SPO)
    out = rewrite_spo(rule, identity(small_graph))
    assert is_isomorphic(out.result, small_graph) is not None


def test_spo_deletion_wins_over_preservation(graph):
    # the match collapses a preserved vertex onto a deleted one; the
    # partial-map pushout removes it rather than resurrecting a copy
    g = make_instance(graph, {"V": 3, "E": 2}, {"src": [1, 2], "tgt": [2, 3]})
    lhs = make_instance(graph, {"V": 2}, {})
    interface = make_instance(graph, {"V": 1}, {})
    rule = Rule(
        Transformation(interface, lhs, {"V": [1]}),
        Transformation(interface, make_instance(graph, {"V": 1}, {}), {"V": [1]}),
        kind=SPO,
    )
    match = Transformation(lhs, g, {"V": [2, 2]})
    out = rewrite_spo(rule, match)
    assert out.result.card == {"V": 2, "E": 0}
    # the right-hand side's surviving piece is empty
    assert out.maps["r_kept"].dom.card == {"V": 0, "E": 0}


def test_spo_deadness_spreads_through_r_identifications(graph):
    # r merges a deleted interface vertex with a live one; both must go
    g = make_instance(graph, {"V": 2}, {})
    lhs = make_instance(graph, {"V": 3}, {})
    interface = make_instance(graph, {"V": 2}, {})
    rhs = make_instance(graph, {"V": 1}, {})
    rule = Rule(
        Transformation(interface, lhs, {"V": [1, 2]}),
        Transformation(interface, rhs, {"V": [1, 1]}),
        kind=SPO,
    )
    # vertex 3 of L is deleted and the match collapses it onto vertex 2's image
    match = Transformation(lhs, g, {"V": [1, 2, 2]})
    out = rewrite_spo(rule, match)
    assert out.result.card == {"V": 0, "E": 0}


def test_spo_agrees_with_dpo_when_applicable(two_triangles):
    rule = flip_rule()
    spo_rule = Rule(rule.l, rule.r, kind=SPO)
    for match in homomorphisms(rule.lhs, two_triangles, SearchOptions(monic=True)):
        assert check_pushout_complement(rule.l, match) == []
        a = rewrite_dpo(rule, match)
        b = rewrite_spo(spo_rule, match)
        assert is_isomorphic(a.result, b.result) is not None


def test_sqpo_requires_monic_match(graph):
    single = make_instance(graph, {"V": 1}, {})
    double = make_instance(graph, {"V": 2}, {})
    rule = Rule(identity(double), identity(double), kind=SQPO)
    collapse = Transformation(double, single, {"V": [1, 1]})
    with pytest.raises(NotMonicError):
        rewrite_sqpo(rule, collapse)


def test_sqpo_copies_context_of_duplicated_vertex(d2, triangle):
    # copy a corner of the triangle; its incident edges and the face follow
    lhs = make_instance(d2, {"V": 1}, {})
    interface = make_instance(d2, {"V": 2}, {})
    collapse = Transformation(interface, lhs, {"V": [1, 1]})
    rule = Rule(collapse, identity(interface), kind=SQPO)
    out = rewrite_sqpo(rule, Transformation(lhs, triangle, {"V": [1]}))
    assert out.result.card == {"V": 4, "E": 5, "T": 2}
    assert validate_instance(out.result) == []


def test_find_and_rewrite_counts(two_triangles):
    rule = flip_rule()
    outcomes = find_and_rewrite(rule, two_triangles, SearchOptions(monic=True))
    assert len(outcomes) == 2
    for out in outcomes:
        assert is_isomorphic(out.result, quad_pattern_flipped()) is not None


def test_find_and_rewrite_unmatched_is_empty(graph, d2):
    mesh = gen_mesh(1, 1)
    unmatched = make_instance(d2, {"V": 1, "E": 1}, {"src": [1], "tgt": [1]})
    rule = Rule(identity(unmatched), identity(unmatched), kind=DPO)
    assert find_and_rewrite(rule, mesh) == []


def test_find_and_rewrite_identity_rule(small_graph):
    rule = Rule(identity(small_graph), identity(small_graph), kind=DPO)
    outcomes = find_and_rewrite(rule, small_graph)
    assert len(outcomes) == len(homomorphisms(small_graph, small_graph))
    # the identity rule deletes nothing, so every outcome keeps the instance
    for out in outcomes:
        assert is_isomorphic(out.result, small_graph) is not None


def test_find_and_rewrite_skips_inapplicable_dpo(graph, small_graph):
    rule = vertex_delete_rule(graph, DPO)
    outcomes = find_and_rewrite(rule, small_graph)
    # only vertex 3 has no outgoing edge... but it has incoming ones; nothing applies
    assert outcomes == []


def test_mesh_flip_count_matches_quad_matches():
    mesh = gen_mesh(2, 2)
    rule = flip_rule()
    monic = homomorphisms(rule.lhs, mesh, SearchOptions(monic=True))
    outcomes = find_and_rewrite(rule, mesh, SearchOptions(monic=True))
    assert len(outcomes) == len(monic) == 8
    for out in outcomes:
        assert validate_instance(out.result) == []


def _random_rule_and_match(rng, monic_r=False):
    """A DPO-applicable (rule, match, host) triple on a random schema."""
    schema = random_acyclic_schema(rng)
    g = random_instance(rng, schema, max_parts=3)
    l_parts = random_closed_parts(rng, g, keep_probability=0.4)
    lhs = subinstance(g, l_parts)
    match = Transformation(lhs, g, {o: sorted(l_parts[o]) for o in schema.objects})
    i_parts = random_closed_parts(rng, lhs, keep_probability=0.6)
    interface = subinstance(lhs, i_parts)
    l = Transformation(interface, lhs, {o: sorted(i_parts[o]) for o in schema.objects})
    r_target = random_instance(rng, schema, max_parts=2)
    rs = brute_homs(interface, r_target)
    if rs and rng.random() < 0.5:
        r = rng.choice(rs)
    else:
        r = identity(interface)
    return Rule(l, r, kind=DPO), match, g


def test_engine_agreement_randomized():
    rng = random.Random(41)
    done = 0
    while done < 12:
        rule, match, g = _random_rule_and_match(rng)
        if check_pushout_complement(rule.l, match):
            continue
        dpo = rewrite_dpo(rule, match)
        spo = rewrite_spo(Rule(rule.l, rule.r, kind=SPO), match)
        sqpo = rewrite_sqpo(Rule(rule.l, rule.r, kind=SQPO), match)
        assert is_isomorphic(dpo.result, spo.result) is not None
        assert is_isomorphic(dpo.result, sqpo.result) is not None
        assert validate_instance(dpo.result) == []
        done += 1


def test_dangling_equivalence_randomized():
    # Eq-3 violations are empty iff the typed graph of C-(B-A) still has
    # exactly one outgoing edge per generator at every vertex
    rng = random.Random(43)
    done = 0
    while done < 40:
        schema = random_acyclic_schema(rng)
        c = random_instance(rng, schema, max_parts=3)
        b_parts = random_closed_parts(rng, c, keep_probability=0.6)
        b = subinstance(c, b_parts)
        g = Transformation(b, c, {o: sorted(b_parts[o]) for o in schema.objects})
        a_parts = random_closed_parts(rng, b, keep_probability=0.5)
        a = subinstance(b, a_parts)
        f = Transformation(a, b, {o: sorted(a_parts[o]) for o in schema.objects})
        dangling = [
            v for v in check_pushout_complement(f, g) if hasattr(v, "generator")
        ]
        offsets = {}
        total = 0
        for obj in schema.objects:
            offsets[obj] = total
            total += c.card[obj]
        removed = {
            offsets[obj] + g.comp[obj][p - 1]
            for obj in schema.objects
            for p in b.parts(obj)
            if p not in f.image(obj)
        }
        result = check_discrete_opfibration(typed_graph_minus(elements(c), removed))
        structural = [
            v for v in (result if isinstance(result, list) else [])
            if isinstance(v, (MissingEdge, MultipleEdges))
        ]
        assert (not dangling) == (not structural)
        done += 1
