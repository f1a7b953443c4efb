"""Exception types shared across the library."""

from __future__ import annotations


class CyclicSchemaError(Exception):
    """Raised by operations that need a finite path set (acyclic schema)."""


class EndpointMismatchError(ValueError):
    """Two paths were compared that do not share source and target."""


class InvalidInstanceError(Exception):
    """Instance data violates its schema; carries the violation list."""

    def __init__(self, violations):
        super().__init__(f"invalid instance: {violations}")
        self.violations = list(violations)


class PartOutOfRangeError(IndexError):
    """A part id fell outside 1..card for its object."""


class NotMonicError(ValueError):
    """A morphism required to be monic is not."""


class MatchNotNaturalError(ValueError):
    """A supplied match fails the naturality condition."""


class ComplementViolationsError(Exception):
    """Pushout complement preconditions failed; carries the violations."""

    def __init__(self, violations):
        super().__init__(f"pushout complement refused: {violations}")
        self.violations = list(violations)


class FootMismatchError(ValueError):
    """Cospan composition attempted over two different feet."""


class TypingMismatchError(ValueError):
    """Rule or match maps do not commute with the slice typings."""


class CommutativityFailureError(Exception):
    """An induced morphism required by an open rewrite does not exist."""


class UnknownReferenceError(KeyError):
    """A document referenced a name that is not loaded."""


class ParseError(ValueError):
    """A JSON document does not match the expected shape."""
