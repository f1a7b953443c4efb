from __future__ import annotations

import random

from csetrw.instance import empty_instance, make_instance
from csetrw.search import SearchOptions, homomorphisms, is_isomorphic
from csetrw.transform import Transformation, identity, is_natural

from oracles import brute_homs, random_acyclic_schema, random_instance


def test_is_natural_identity(small_graph):
    assert is_natural(identity(small_graph)) == []


def test_is_natural_detects_mismatch(small_graph):
    t = Transformation(small_graph, small_graph, {"V": [1, 2, 3], "E": [2, 1, 1]})
    violations = is_natural(t)
    assert violations
    # edge 1 keeps endpoints 1,2 but its image edge 2 runs 2 -> 3
    assert any(v.part == 1 for v in violations)


def test_is_natural_vacuous_from_empty(graph, small_graph):
    t = Transformation(empty_instance(graph), small_graph, {})
    assert is_natural(t) == []


def test_single_vertex_matches(graph, small_graph):
    x = make_instance(graph, {"V": 1}, {})
    assert len(homomorphisms(x, small_graph)) == 3


def test_single_edge_matches(graph, small_graph):
    x = make_instance(graph, {"V": 2, "E": 1}, {"src": [1], "tgt": [2]})
    found = homomorphisms(x, small_graph)
    assert len(found) == 3
    for t in found:
        assert is_natural(t) == []


def test_terminal_graph_absorbs(graph, small_graph):
    loop = make_instance(graph, {"V": 1, "E": 1}, {"src": [1], "tgt": [1]})
    assert len(homomorphisms(small_graph, loop)) == 1


def test_self_homs_match_brute_force(small_graph):
    assert homomorphisms(small_graph, small_graph) == brute_homs(small_graph, small_graph)


def test_monic_results_are_injective(small_graph):
    for t in homomorphisms(small_graph, small_graph, SearchOptions(monic=True)):
        for obj in ("V", "E"):
            assert len(set(t.comp[obj])) == len(t.comp[obj])
    assert homomorphisms(small_graph, small_graph, SearchOptions(monic=True)) == brute_homs(
        small_graph, small_graph, monic=True
    )


def test_limit_truncates(small_graph):
    x = make_instance(small_graph.schema, {"V": 1}, {})
    assert len(homomorphisms(x, small_graph, SearchOptions(limit=1))) == 1


def test_initial_assignment_pins_search(small_graph):
    x = make_instance(small_graph.schema, {"V": 1}, {})
    found = homomorphisms(x, small_graph, SearchOptions(initial={"V": {1: 2}}))
    assert len(found) == 1 and found[0].comp["V"] == [2]
    # inconsistent pin: no results rather than an error
    impossible = homomorphisms(small_graph, small_graph, SearchOptions(initial={"E": {1: 2}, "V": {1: 1}}))
    assert all(t.comp["E"][0] == 2 and t.comp["V"][0] == 1 for t in impossible)


def test_determinism_and_order(small_graph):
    a = homomorphisms(small_graph, small_graph)
    b = homomorphisms(small_graph, small_graph)
    assert a == b
    keys = [tuple(tuple(t.comp[o]) for o in small_graph.schema.objects) for t in a]
    assert keys == sorted(keys)


def test_mrv_agrees_with_static(small_graph):
    static = homomorphisms(small_graph, small_graph)
    mrv = homomorphisms(small_graph, small_graph, SearchOptions(mrv=True))
    assert static == mrv


def test_completeness_randomized():
    rng = random.Random(23)
    for _ in range(40):
        schema = random_acyclic_schema(rng)
        x = random_instance(rng, schema, max_parts=2)
        y = random_instance(rng, schema, max_parts=3)
        assert homomorphisms(x, y) == brute_homs(x, y)
        assert homomorphisms(x, y, SearchOptions(monic=True)) == brute_homs(x, y, monic=True)


def test_iso_permuted_copy(small_graph):
    perm = make_instance(
        small_graph.schema, {"V": 3, "E": 3}, {"src": [2, 2, 1], "tgt": [3, 3, 2]}
    )
    t = is_isomorphic(small_graph, perm)
    assert t is not None
    assert is_natural(t) == []
    for obj in ("V", "E"):
        assert sorted(t.comp[obj]) == list(small_graph.parts(obj))


def test_iso_rejects_structural_difference(small_graph):
    other = make_instance(
        small_graph.schema, {"V": 3, "E": 3}, {"src": [1, 2, 2], "tgt": [2, 3, 2]}
    )
    assert is_isomorphic(small_graph, other) is None
    assert brute_homs(small_graph, other, monic=True) == []


def test_iso_short_circuits_on_cardinality(graph):
    a = make_instance(graph, {"V": 1}, {})
    b = make_instance(graph, {"V": 2}, {})
    assert is_isomorphic(a, b) is None
