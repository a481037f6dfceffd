"""Domain model for binary ER schemas with regular entity types.

An entity carries one key attribute, one mandatory simple attribute (the
first declared attribute) and any number of secondary simple attributes.
Relationships are binary, between two distinct entities, with a (min, max)
structural constraint on each side.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field, replace
from typing import Union

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class Unbounded(enum.Enum):
    """Marker for an unbounded maximum, written ``N``."""

    N = "N"

    def __repr__(self) -> str:
        return "N"

    __str__ = __repr__


UNBOUNDED = Unbounded.N

Bound = Union[int, Unbounded]


def is_identifier(text: object) -> bool:
    return isinstance(text, str) and IDENT_RE.match(text) is not None


@dataclass(frozen=True)
class MinMaxPair:
    min: int
    max: Bound

    def __str__(self) -> str:
        return f"({self.min},{self.max})"

    @property
    def unbounded(self) -> bool:
        return self.max is UNBOUNDED

    def max_exceeds_one(self) -> bool:
        return self.max is UNBOUNDED or self.max > 1


@dataclass(frozen=True)
class EntityType:
    name: str
    key_attr: str
    mandatory_attr: str
    secondary_attrs: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "secondary_attrs", tuple(self.secondary_attrs))

    @property
    def attributes(self) -> tuple[str, ...]:
        """Key, mandatory and secondary attribute names in declaration order."""
        return (self.key_attr, self.mandatory_attr, *self.secondary_attrs)


@dataclass(frozen=True)
class RelationshipType:
    name: str
    left_entity: str
    right_entity: str
    left_constraint: MinMaxPair
    right_constraint: MinMaxPair
    attrs: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "attrs", tuple(self.attrs))


@dataclass(frozen=True)
class ERModel:
    entities: tuple[EntityType, ...] = ()
    relationships: tuple[RelationshipType, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "entities", tuple(self.entities))
        object.__setattr__(self, "relationships", tuple(self.relationships))

    def entity(self, name: str) -> EntityType:
        for e in self.entities:
            if e.name == name:
                return e
        raise KeyError(name)


class Participation(enum.Enum):
    TOTAL = "total"
    PARTIAL = "partial"


class Direction(enum.Enum):
    LEFT_TO_RIGHT = "left_to_right"
    RIGHT_TO_LEFT = "right_to_left"

    def flipped(self) -> Direction:
        if self is Direction.LEFT_TO_RIGHT:
            return Direction.RIGHT_TO_LEFT
        return Direction.LEFT_TO_RIGHT


class RatioKind(enum.Enum):
    ONE_TO_ONE = "one-to-one"
    ONE_TO_MANY = "one-to-many"
    MANY_TO_MANY = "many-to-many"


@dataclass(frozen=True)
class CardinalityRatio:
    kind: RatioKind
    direction: Direction | None = None

    def __post_init__(self) -> None:
        if (self.kind is RatioKind.ONE_TO_MANY) != (self.direction is not None):
            raise ValueError("direction is required for one-to-many and only for it")

    def swapped(self) -> CardinalityRatio:
        if self.direction is None:
            return self
        return CardinalityRatio(self.kind, self.direction.flipped())


ONE_TO_ONE = CardinalityRatio(RatioKind.ONE_TO_ONE)
MANY_TO_MANY = CardinalityRatio(RatioKind.MANY_TO_MANY)
ONE_TO_MANY_LR = CardinalityRatio(RatioKind.ONE_TO_MANY, Direction.LEFT_TO_RIGHT)
ONE_TO_MANY_RL = CardinalityRatio(RatioKind.ONE_TO_MANY, Direction.RIGHT_TO_LEFT)


@dataclass(frozen=True)
class Violation:
    """A single well-formedness problem.

    ``code`` is stable and machine readable, ``element`` names the offending
    entity, relationship or attribute.
    """

    code: str
    element: str
    message: str = field(default="", compare=False)

    def __str__(self) -> str:
        return f"{self.code} [{self.element}]: {self.message}"


class InvalidModelError(ValueError):
    """Raised when an operation that requires a valid model receives an invalid one."""

    def __init__(self, violations: list[Violation]):
        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations)
        super().__init__(f"model is not valid: {lines}")


# Violation codes.
INVALID_IDENTIFIER = "InvalidIdentifier"
DUPLICATE_ATTRIBUTE_NAME = "DuplicateAttributeName"
DUPLICATE_ENTITY_NAME = "DuplicateEntityName"
DUPLICATE_RELATIONSHIP_NAME = "DuplicateRelationshipName"
RELATION_NAME_CLASH = "RelationNameClash"
UNKNOWN_ENTITY = "UnknownEntity"
RECURSIVE_RELATIONSHIP = "RecursiveRelationship"
NEGATIVE_MIN = "NegativeMin"
MAX_BELOW_ONE = "MaxBelowOne"
MIN_EXCEEDS_MAX = "MinExceedsMax"
INVALID_BOUND = "InvalidBound"
NO_ENTITIES = "NoEntities"


def _pair_violations(pair: object, where: str) -> list[Violation]:
    if not isinstance(pair, MinMaxPair):
        return [Violation(INVALID_BOUND, where, f"expected a MinMaxPair, got {pair!r}")]
    lo, hi = pair.min, pair.max
    if not _is_int(lo) or not (hi is UNBOUNDED or _is_int(hi)):
        return [Violation(INVALID_BOUND, where, f"bounds must be integers or N, got {pair}")]
    out = []
    if lo < 0:
        out.append(Violation(NEGATIVE_MIN, where, f"min {lo} is negative"))
    if hi is not UNBOUNDED:
        if hi < 1:
            out.append(Violation(MAX_BELOW_ONE, where, f"max {hi} is below 1"))
        if lo > hi:
            out.append(Violation(MIN_EXCEEDS_MAX, where, f"min {lo} exceeds max {hi}"))
    return out


def _is_int(v: object) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _name_violations(names: list[object], owner: str) -> list[Violation]:
    out = []
    seen: set[object] = set()
    for n in names:
        if not is_identifier(n):
            out.append(Violation(INVALID_IDENTIFIER, f"{owner}.{n}", f"{n!r} is not an identifier"))
        elif n in seen:
            out.append(Violation(DUPLICATE_ATTRIBUTE_NAME, f"{owner}.{n}",
                                 f"attribute {n!r} declared more than once in {owner}"))
        seen.add(n)
    return out


def validate_model(model: ERModel) -> list[Violation]:
    """Collect every well-formedness violation in ``model``.

    Returns an empty list iff the model is valid. Nothing is raised for a
    malformed model; all problems are reported at once.
    """
    out: list[Violation] = []
    if not model.entities:
        out.append(Violation(NO_ENTITIES, "<model>", "at least one entity type is required"))

    entity_names: set[str] = set()
    for e in model.entities:
        if not is_identifier(e.name):
            out.append(Violation(INVALID_IDENTIFIER, str(e.name), f"{e.name!r} is not an identifier"))
        if e.name in entity_names:
            out.append(Violation(DUPLICATE_ENTITY_NAME, e.name, f"entity {e.name!r} declared more than once"))
        entity_names.add(e.name)
        out.extend(_name_violations(list(e.attributes), e.name))

    rel_names: set[str] = set()
    for r in model.relationships:
        if not is_identifier(r.name):
            out.append(Violation(INVALID_IDENTIFIER, str(r.name), f"{r.name!r} is not an identifier"))
        if r.name in rel_names:
            out.append(Violation(DUPLICATE_RELATIONSHIP_NAME, r.name,
                                 f"relationship {r.name!r} declared more than once"))
        elif r.name in entity_names:
            # both become relations of the same name in the relational schema
            out.append(Violation(RELATION_NAME_CLASH, r.name,
                                 f"relationship {r.name!r} has the same name as an entity"))
        rel_names.add(r.name)
        for side, target in (("left", r.left_entity), ("right", r.right_entity)):
            if target not in entity_names:
                out.append(Violation(UNKNOWN_ENTITY, r.name,
                                     f"{side} endpoint {target!r} is not a declared entity"))
        if r.left_entity == r.right_entity:
            out.append(Violation(RECURSIVE_RELATIONSHIP, r.name,
                                 f"both endpoints are {r.left_entity!r}; recursive relationships are not supported"))
        out.extend(_pair_violations(r.left_constraint, f"{r.name}.left"))
        out.extend(_pair_violations(r.right_constraint, f"{r.name}.right"))
        out.extend(_name_violations(list(r.attrs), r.name))
    return out


def require_valid(model: ERModel) -> None:
    violations = validate_model(model)
    if violations:
        raise InvalidModelError(violations)


def classify_participation(pair: MinMaxPair) -> Participation:
    return Participation.PARTIAL if pair.min == 0 else Participation.TOTAL


def classify_cardinality(left: MinMaxPair, right: MinMaxPair) -> CardinalityRatio:
    """Cardinality ratio from the two maxima; an unbounded max counts as many."""
    left_many = left.max_exceeds_one()
    right_many = right.max_exceeds_one()
    if left_many and right_many:
        return MANY_TO_MANY
    if left_many:
        return ONE_TO_MANY_LR
    if right_many:
        return ONE_TO_MANY_RL
    return ONE_TO_ONE


def canonicalize(model: ERModel) -> ERModel:
    # Attribute order is semantic (the first attribute is the mandatory one),
    # so only the top-level declarations are sorted.
    return replace(
        model,
        entities=tuple(sorted(model.entities, key=lambda e: e.name)),
        relationships=tuple(sorted(model.relationships, key=lambda r: r.name)),
    )


def models_equal(a: ERModel, b: ERModel) -> bool:
    return canonicalize(a) == canonicalize(b)
