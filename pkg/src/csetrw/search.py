"""Backtracking search for homomorphisms, monomorphisms and isomorphisms.

The search treats parts of the pattern as variables and parts of the host
as domain values. Assigning a part immediately forces the images of all
its column successors, so a single branching decision fixes whole orbits
and conflicts surface as early as possible.
"""

from __future__ import annotations

from dataclasses import dataclass

from .instance import CSetInstance
from .transform import Transformation


@dataclass
class SearchOptions:
    monic: bool = False
    initial: dict[str, dict[int, int]] | None = None
    limit: int | None = None
    mrv: bool = False


class _Search:
    def __init__(self, x: CSetInstance, y: CSetInstance, opts: SearchOptions):
        self.x = x
        self.y = y
        self.opts = opts
        self.assign = {obj: [0] * x.card[obj] for obj in x.schema.objects}
        self.used = {obj: [False] * y.card[obj] for obj in x.schema.objects}
        self.trail: list[tuple[str, int]] = []
        self.variables = [(obj, p) for obj in x.schema.objects for p in x.parts(obj)]
        self.results: list[Transformation] = []

    def _set(self, obj: str, part: int, value: int) -> bool:
        """Assign part -> value and propagate along all outgoing columns."""
        current = self.assign[obj][part - 1]
        if current:
            return current == value
        if not 1 <= value <= self.y.card[obj]:
            return False
        if self.opts.monic:
            if self.used[obj][value - 1]:
                return False
            self.used[obj][value - 1] = True
        self.assign[obj][part - 1] = value
        self.trail.append((obj, part))
        for gen in self.x.schema.outgoing(obj):
            forced = self.y.column[gen.name][value - 1]
            if not self._set(gen.cod, self.x.column[gen.name][part - 1], forced):
                return False
        return True

    def _undo(self, mark: int) -> None:
        while len(self.trail) > mark:
            obj, part = self.trail.pop()
            value = self.assign[obj][part - 1]
            self.assign[obj][part - 1] = 0
            if self.opts.monic:
                self.used[obj][value - 1] = False

    def _candidates(self, obj: str, part: int) -> int:
        """Cheap feasible-value count used by the MRV heuristic."""
        count = 0
        for value in range(1, self.y.card[obj] + 1):
            if self.opts.monic and self.used[obj][value - 1]:
                continue
            ok = True
            for gen in self.x.schema.outgoing(obj):
                target = self.assign[gen.cod][self.x.column[gen.name][part - 1] - 1]
                if target and self.y.column[gen.name][value - 1] != target:
                    ok = False
                    break
            if ok:
                count += 1
        return count

    def _next_variable(self):
        free = [(obj, p) for obj, p in self.variables if not self.assign[obj][p - 1]]
        if not free:
            return None
        if not self.opts.mrv:
            return free[0]
        best, best_key = free[0], None
        for i, var in enumerate(free):
            key = (self._candidates(*var), i)
            if best_key is None or key < best_key:
                best, best_key = var, key
        return best

    def _values(self, obj: str, part: int):
        """Candidate host parts, narrowed through the preimage indices.

        Every outgoing column whose forced target is already assigned
        restricts the value to an indexed preimage list; intersecting
        those keeps ascending order, so enumeration stays deterministic.
        """
        if self.y.index is None:
            return range(1, self.y.card[obj] + 1)
        narrowed: list[int] | None = None
        for gen in self.x.schema.outgoing(obj):
            target = self.assign[gen.cod][self.x.column[gen.name][part - 1] - 1]
            if not target:
                continue
            preimages = self.y.index[gen.name][target - 1]
            if narrowed is None:
                narrowed = preimages
            else:
                keep = set(preimages)
                narrowed = [v for v in narrowed if v in keep]
            if not narrowed:
                return []
        if narrowed is None:
            return range(1, self.y.card[obj] + 1)
        return narrowed

    def run(self) -> list[Transformation]:
        if self.opts.initial:
            mark = len(self.trail)
            for obj, pins in self.opts.initial.items():
                for part, value in pins.items():
                    if not self._set(obj, part, value):
                        self._undo(mark)
                        return []
        self._branch()
        self.results.sort(key=lambda t: tuple(tuple(t.comp[o]) for o in self.x.schema.objects))
        return self.results

    def _branch(self) -> bool:
        """Depth-first enumeration; returns False once the limit is hit."""
        var = self._next_variable()
        if var is None:
            comp = {obj: list(col) for obj, col in self.assign.items()}
            self.results.append(Transformation(self.x, self.y, comp))
            return self.opts.limit is None or len(self.results) < self.opts.limit
        obj, part = var
        for value in self._values(obj, part):
            mark = len(self.trail)
            if self._set(obj, part, value):
                if not self._branch():
                    self._undo(mark)
                    return False
            self._undo(mark)
        return True


def homomorphisms(
    x: CSetInstance, y: CSetInstance, opts: SearchOptions | None = None
) -> list[Transformation]:
    """All natural transformations x -> y extending opts.initial.

    Results come in a fixed order: components flattened by object
    declaration then part id, compared lexicographically. With
    opts.monic only injective-per-object maps are returned; opts.limit
    truncates the search.
    """
    if x.schema != y.schema:
        raise ValueError("homomorphism search requires a shared schema")
    return _Search(x, y, opts or SearchOptions()).run()


def is_isomorphic(x: CSetInstance, y: CSetInstance) -> Transformation | None:
    """An isomorphism x -> y if one exists.

    Cardinality equality per object is checked first; a monomorphism
    between instances of equal finite cardinalities is automatically an
    isomorphism, so the search can stop at the first monic hit.
    """
    if x.schema != y.schema:
        raise ValueError("isomorphism check requires a shared schema")
    if any(x.card[obj] != y.card[obj] for obj in x.schema.objects):
        return None
    found = homomorphisms(x, y, SearchOptions(monic=True, limit=1))
    return found[0] if found else None
