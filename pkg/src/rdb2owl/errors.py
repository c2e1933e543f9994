"""Exception types shared across the rdb2owl pipeline."""

from __future__ import annotations


class Rdb2OwlError(Exception):
    """Base class for every error raised by this package."""


class SchemaError(Rdb2OwlError):
    """A relational schema violates a structural invariant."""


class UnresolvedReference(SchemaError):
    """A table or column name does not resolve within the schema."""


class UnsupportedTriggerBody(Rdb2OwlError):
    """A trigger body is not a single unconditional INSERT statement."""


class HierarchyCycle(Rdb2OwlError):
    """Subclass (IS_A) relations form a cycle."""


class NameCollision(Rdb2OwlError):
    """Two distinct sources map onto the same unique name."""


class InvalidIri(Rdb2OwlError):
    """A name or base cannot be turned into a legal IRI."""


class UnknownClass(Rdb2OwlError):
    """A class name does not resolve in the ontology model."""


class UnknownProperty(Rdb2OwlError):
    """A property name does not resolve, or its domain does not match."""


class UnknownIndividual(Rdb2OwlError):
    """An individual id does not exist in the instance store."""


class CardinalityViolation(Rdb2OwlError):
    """Property values break a min/max cardinality constraint."""


class ScenarioError(Rdb2OwlError):
    """A scenario script line could not be executed."""

    def __init__(self, line_no: int, message: str) -> None:
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no
        self.message = message
