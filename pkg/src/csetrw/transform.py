"""Natural transformations between instances on a shared schema."""

from __future__ import annotations

from dataclasses import dataclass

from .instance import CSetInstance


@dataclass
class Transformation:
    """Per-object part maps dom -> cod; natural when every square commutes."""

    dom: CSetInstance
    cod: CSetInstance
    comp: dict[str, list[int]]

    def __post_init__(self):
        self.comp = {o: [int(v) for v in self.comp.get(o, [])] for o in self.dom.schema.objects}

    def apply(self, obj: str, part: int) -> int:
        return self.comp[obj][part - 1]

    def compose(self, other: Transformation) -> Transformation:
        """Diagrammatic composite: self then other."""
        if other.dom != self.cod:
            raise ValueError("composition endpoints do not match")
        comp = {
            obj: [other.comp[obj][v - 1] for v in self.comp[obj]]
            for obj in self.dom.schema.objects
        }
        return Transformation(self.dom, other.cod, comp)

    def is_monic(self) -> bool:
        return all(len(set(col)) == len(col) for col in self.comp.values())

    def image(self, obj: str) -> set[int]:
        return set(self.comp[obj])

    def __eq__(self, other):
        if not isinstance(other, Transformation):
            return NotImplemented
        return self.dom == other.dom and self.cod == other.cod and self.comp == other.comp

    def __repr__(self):
        return f"Transformation({self.dom!r} -> {self.cod!r})"


def identity(x: CSetInstance) -> Transformation:
    return Transformation(x, x, {obj: list(x.parts(obj)) for obj in x.schema.objects})


@dataclass(frozen=True)
class NaturalityViolation:
    generator: str
    part: int
    expected: int
    actual: int

    def __str__(self):
        return (
            f"square for {self.generator!r} fails at part {self.part}: "
            f"expected {self.expected}, got {self.actual}"
        )


def is_natural(t: Transformation) -> list[NaturalityViolation]:
    """Naturality violations; empty iff the transformation is a homomorphism.

    Also reports range errors (component entries outside the codomain) as
    violations of the corresponding identity assignment.
    """
    out: list[NaturalityViolation] = []
    if t.dom.schema != t.cod.schema:
        raise ValueError("domain and codomain instances live on different schemas")
    for obj in t.dom.schema.objects:
        col = t.comp[obj]
        if len(col) != t.dom.card[obj]:
            raise ValueError(f"component for {obj!r} has wrong length")
        for part, v in enumerate(col, start=1):
            if not 1 <= v <= t.cod.card[obj]:
                raise ValueError(f"component for {obj!r} sends {part} outside 1..{t.cod.card[obj]}")
    for gen in t.dom.schema.generators:
        for part in t.dom.parts(gen.dom):
            expected = t.comp[gen.cod][t.dom.apply(gen.name, part) - 1]
            actual = t.cod.apply(gen.name, t.comp[gen.dom][part - 1])
            if expected != actual:
                out.append(NaturalityViolation(gen.name, part, expected, actual))
    return out
