from __future__ import annotations

import pytest

from csetrw.instance import make_instance
from csetrw.mesh import gen_mesh
from csetrw.schema import delta2_schema, graph_schema


@pytest.fixture(scope="session")
def graph():
    return graph_schema()


@pytest.fixture(scope="session")
def d2():
    return delta2_schema()


@pytest.fixture()
def small_graph(graph):
    """Three vertices, three edges: 1 -> 2 and a parallel pair 2 -> 3."""
    return make_instance(graph, {"V": 3, "E": 3}, {"src": [1, 2, 2], "tgt": [2, 3, 3]})


@pytest.fixture()
def two_triangles():
    """The unit mesh cell: two triangles sharing a diagonal edge."""
    return gen_mesh(1, 1)


@pytest.fixture()
def triangle(d2):
    """A single filled triangle spanning vertices 1 -> 2 -> 3."""
    return make_instance(
        d2,
        {"V": 3, "E": 3, "T": 1},
        {"src": [1, 1, 2], "tgt": [3, 2, 3], "d0": [1], "d1": [2], "d2": [3]},
    )
