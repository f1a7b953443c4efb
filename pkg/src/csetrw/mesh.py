"""Triangulated grid meshes and the quadrilateral edge-flip rule.

A rows x cols grid is triangulated cell by cell: each cell gets a
diagonal from its top-left to its bottom-right corner and the two
triangles sharing it. All edges point right, down, or down-right, so
every triangle t spans a -> b -> c with d1(t): a -> b, d2(t): b -> c and
d0(t): a -> c.
"""

from __future__ import annotations

from .instance import CSetInstance, make_instance
from .rewrite import DPO, Rule
from .schema import delta2_schema
from .transform import Transformation

DELTA2 = delta2_schema()


def gen_mesh(rows: int, cols: int) -> CSetInstance:
    """Semi-simplicial grid with 2*rows*cols triangles."""
    if rows < 1 or cols < 1:
        raise ValueError("mesh needs at least one row and one column")

    def vid(r: int, c: int) -> int:
        return r * (cols + 1) + c + 1

    nh = (rows + 1) * cols
    nv = rows * (cols + 1)

    def hid(r: int, c: int) -> int:
        return r * cols + c + 1

    def wid(r: int, c: int) -> int:
        return nh + r * (cols + 1) + c + 1

    def did(r: int, c: int) -> int:
        return nh + nv + r * cols + c + 1

    src: list[int] = []
    tgt: list[int] = []
    for r in range(rows + 1):
        for c in range(cols):
            src.append(vid(r, c))
            tgt.append(vid(r, c + 1))
    for r in range(rows):
        for c in range(cols + 1):
            src.append(vid(r, c))
            tgt.append(vid(r + 1, c))
    for r in range(rows):
        for c in range(cols):
            src.append(vid(r, c))
            tgt.append(vid(r + 1, c + 1))
    d0: list[int] = []
    d1: list[int] = []
    d2: list[int] = []
    for r in range(rows):
        for c in range(cols):
            # lower triangle: corner -> right corner -> opposite corner
            d0.append(did(r, c))
            d1.append(hid(r, c))
            d2.append(wid(r, c + 1))
            # upper triangle: corner -> lower corner -> opposite corner
            d0.append(did(r, c))
            d1.append(wid(r, c))
            d2.append(hid(r + 1, c))
    return make_instance(
        DELTA2,
        {"V": (rows + 1) * (cols + 1), "E": nh + nv + rows * cols, "T": 2 * rows * cols},
        {"src": src, "tgt": tgt, "d0": d0, "d1": d1, "d2": d2},
    )


def quad_pattern() -> CSetInstance:
    """A single quadrilateral cell: four boundary edges, diagonal, two triangles."""
    return make_instance(
        DELTA2,
        {"V": 4, "E": 5, "T": 2},
        {
            "src": [1, 2, 1, 3, 1],
            "tgt": [2, 4, 3, 4, 4],
            "d0": [5, 5],
            "d1": [1, 3],
            "d2": [2, 4],
        },
    )


def quad_boundary() -> CSetInstance:
    """The four corners and boundary edges of a cell, no diagonal or triangles."""
    return make_instance(
        DELTA2,
        {"V": 4, "E": 4},
        {"src": [1, 2, 1, 3], "tgt": [2, 4, 3, 4]},
    )


def quad_pattern_flipped() -> CSetInstance:
    """The cell retriangulated along the other diagonal."""
    return make_instance(
        DELTA2,
        {"V": 4, "E": 5, "T": 2},
        {
            "src": [1, 2, 1, 3, 2],
            "tgt": [2, 4, 3, 4, 3],
            "d0": [3, 2],
            "d1": [1, 5],
            "d2": [5, 4],
        },
    )


def flip_rule(kind: str = DPO) -> Rule:
    """Replace a cell's diagonal and triangles with the flipped ones."""
    lhs = quad_pattern()
    interface = quad_boundary()
    rhs = quad_pattern_flipped()
    embed = {"V": [1, 2, 3, 4], "E": [1, 2, 3, 4], "T": []}
    return Rule(
        l=Transformation(interface, lhs, embed),
        r=Transformation(interface, rhs, embed),
        kind=kind,
    )
