"""Partitioning of an ER model into ER-construct-units.

Four unit kinds exist:

* ``b(e)``  regular entity base: the entity, its key and its mandatory attribute
* ``c(e)``  the entity's secondary simple attributes (omitted when there are none)
* ``b(r)``  binary relationship base: the relationship and both min-max pairs
* ``p(r)``  the relationship's optional attributes (omitted when there are none)

Every construct of a valid model is claimed by exactly one unit, which
``verify_partition`` checks by multiset comparison.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Hashable, Iterable, Union

from .model import (
    EntityType,
    ERModel,
    MinMaxPair,
    RelationshipType,
    Violation,
    canonicalize,
    require_valid,
)

# Kind discriminators, shared with the JSON encoding.
REGULAR_ENTITY_BASE = "regular_entity_base"
SECONDARY_SIMPLE_ATTRS = "secondary_simple_attrs"
BINARY_RELATIONSHIP_BASE = "binary_relationship_base"
OPTIONAL_RELATIONSHIP_ATTRS = "optional_relationship_attrs"

OVERLAPPING_UNITS = "OverlappingUnits"
UNCOVERED_CONSTRUCT = "UncoveredConstruct"
FOREIGN_CONSTRUCT = "ForeignConstruct"
EMPTY_UNIT = "EmptyUnit"


@dataclass(frozen=True)
class RegularEntityBase:
    entity: str
    key: str
    mandatory: str

    kind = REGULAR_ENTITY_BASE

    @property
    def owner(self) -> str:
        return self.entity


@dataclass(frozen=True)
class SecondarySimpleAttrs:
    entity: str
    attrs: tuple[str, ...]

    kind = SECONDARY_SIMPLE_ATTRS

    def __post_init__(self) -> None:
        object.__setattr__(self, "attrs", tuple(self.attrs))

    @property
    def owner(self) -> str:
        return self.entity


@dataclass(frozen=True)
class BinaryRelationshipBase:
    relationship: str
    left: str
    right: str
    left_constraint: MinMaxPair
    right_constraint: MinMaxPair

    kind = BINARY_RELATIONSHIP_BASE

    @property
    def owner(self) -> str:
        return self.relationship


@dataclass(frozen=True)
class OptionalRelationshipAttrs:
    # left/right only feed the label; the relationship name identifies the unit
    relationship: str
    left: str
    right: str
    attrs: tuple[str, ...]

    kind = OPTIONAL_RELATIONSHIP_ATTRS

    def __post_init__(self) -> None:
        object.__setattr__(self, "attrs", tuple(self.attrs))

    @property
    def owner(self) -> str:
        return self.relationship


ERConstructUnit = Union[
    RegularEntityBase, SecondarySimpleAttrs, BinaryRelationshipBase, OptionalRelationshipAttrs
]


@dataclass(frozen=True)
class Partition:
    units: tuple[ERConstructUnit, ...]
    source_model: ERModel

    def __post_init__(self) -> None:
        object.__setattr__(self, "units", tuple(self.units))

    def labels(self) -> list[str]:
        return [unit_label(u) for u in self.units]


def unit_label(unit: ERConstructUnit) -> str:
    if isinstance(unit, RegularEntityBase):
        return f"b({unit.entity})"
    if isinstance(unit, SecondarySimpleAttrs):
        return f"c({unit.entity})"
    if isinstance(unit, BinaryRelationshipBase):
        return f"b({unit.relationship}({unit.left},{unit.right}))"
    if isinstance(unit, OptionalRelationshipAttrs):
        return f"p({unit.relationship}({unit.left},{unit.right}))"
    raise TypeError(f"not an ER-construct-unit: {unit!r}")


def entity_units(e: EntityType) -> list[ERConstructUnit]:
    units: list[ERConstructUnit] = [RegularEntityBase(e.name, e.key_attr, e.mandatory_attr)]
    if e.secondary_attrs:
        units.append(SecondarySimpleAttrs(e.name, e.secondary_attrs))
    return units


def relationship_units(r: RelationshipType) -> list[ERConstructUnit]:
    units: list[ERConstructUnit] = [
        BinaryRelationshipBase(r.name, r.left_entity, r.right_entity,
                               r.left_constraint, r.right_constraint)
    ]
    if r.attrs:
        units.append(OptionalRelationshipAttrs(r.name, r.left_entity, r.right_entity, r.attrs))
    return units


def partition_model(model: ERModel) -> Partition:
    """Split a valid model into its ER-construct-units in canonical order.

    Raises :class:`InvalidModelError` if the model does not validate.
    """
    require_valid(model)
    canon = canonicalize(model)
    units: list[ERConstructUnit] = []
    for e in canon.entities:
        units.extend(entity_units(e))
    for r in canon.relationships:
        units.extend(relationship_units(r))
    return Partition(tuple(units), model)


# Construct identities. Attribute constructs carry their role and position so
# that a unit claiming the right names in the wrong slots is still caught.

def model_constructs(model: ERModel) -> list[Hashable]:
    out: list[Hashable] = []
    for e in model.entities:
        out.append(("entity", e.name))
        out.append(("key", e.name, e.key_attr))
        out.append(("mandatory", e.name, e.mandatory_attr))
        for t, a in enumerate(e.secondary_attrs, start=2):
            out.append(("secondary", e.name, t, a))
    for r in model.relationships:
        out.append(("relationship", r.name, r.left_entity, r.right_entity))
        out.append(("minmax", r.name, "left", r.left_constraint))
        out.append(("minmax", r.name, "right", r.right_constraint))
        for t, a in enumerate(r.attrs, start=1):
            out.append(("rel_attr", r.name, t, a))
    return out


def unit_constructs(unit: ERConstructUnit) -> list[Hashable]:
    if isinstance(unit, RegularEntityBase):
        return [("entity", unit.entity),
                ("key", unit.entity, unit.key),
                ("mandatory", unit.entity, unit.mandatory)]
    if isinstance(unit, SecondarySimpleAttrs):
        return [("secondary", unit.entity, t, a) for t, a in enumerate(unit.attrs, start=2)]
    if isinstance(unit, BinaryRelationshipBase):
        return [("relationship", unit.relationship, unit.left, unit.right),
                ("minmax", unit.relationship, "left", unit.left_constraint),
                ("minmax", unit.relationship, "right", unit.right_constraint)]
    if isinstance(unit, OptionalRelationshipAttrs):
        return [("rel_attr", unit.relationship, t, a) for t, a in enumerate(unit.attrs, start=1)]
    raise TypeError(f"not an ER-construct-unit: {unit!r}")


def _describe(construct: Hashable) -> str:
    return "/".join(str(part) for part in construct)  # type: ignore[union-attr]


def verify_partition(partition: Partition) -> list[Violation]:
    """Check disjointness and coverage of ``partition`` against its source model."""
    out: list[Violation] = []
    expected = Counter(model_constructs(partition.source_model))
    claimed: Counter[Hashable] = Counter()
    claimants: dict[Hashable, list[str]] = {}
    for unit in partition.units:
        label = unit_label(unit)
        if isinstance(unit, (SecondarySimpleAttrs, OptionalRelationshipAttrs)) and not unit.attrs:
            out.append(Violation(EMPTY_UNIT, label, "attribute units must not be empty"))
        for c in unit_constructs(unit):
            claimed[c] += 1
            claimants.setdefault(c, []).append(label)

    for c, n in claimed.items():
        if n > 1:
            out.append(Violation(OVERLAPPING_UNITS, _describe(c),
                                 f"claimed by {n} units: {', '.join(claimants[c])}"))
        if c not in expected:
            out.append(Violation(FOREIGN_CONSTRUCT, _describe(c),
                                 f"claimed by {', '.join(claimants[c])} but absent from the model"))
    for c in expected:
        if claimed[c] == 0:
            out.append(Violation(UNCOVERED_CONSTRUCT, _describe(c), "not claimed by any unit"))
    return out


def model_from_units(units: Iterable[ERConstructUnit]) -> ERModel:
    """Reassemble a model from a complete set of units.

    Entities and relationships come out in the order their base units appear.
    Raises ``ValueError`` if a unit is repeated or an attribute unit has no
    matching base unit.
    """
    entity_bases: dict[str, RegularEntityBase] = {}
    rel_bases: dict[str, BinaryRelationshipBase] = {}
    secondaries: dict[str, SecondarySimpleAttrs] = {}
    rel_attrs: dict[str, OptionalRelationshipAttrs] = {}
    for u in units:
        table: dict
        if isinstance(u, RegularEntityBase):
            table = entity_bases
        elif isinstance(u, SecondarySimpleAttrs):
            table = secondaries
        elif isinstance(u, BinaryRelationshipBase):
            table = rel_bases
        elif isinstance(u, OptionalRelationshipAttrs):
            table = rel_attrs
        else:
            raise TypeError(f"not an ER-construct-unit: {u!r}")
        if u.owner in table:
            raise ValueError(f"unit {unit_label(u)} appears more than once")
        table[u.owner] = u

    for name in secondaries:
        if name not in entity_bases:
            raise ValueError(f"c({name}) has no matching b({name})")
    for name in rel_attrs:
        if name not in rel_bases:
            raise ValueError(f"p({name}) has no matching relationship base unit")

    entities = [
        EntityType(b.entity, b.key, b.mandatory,
                   secondaries[b.entity].attrs if b.entity in secondaries else ())
        for b in entity_bases.values()
    ]
    relationships = [
        RelationshipType(b.relationship, b.left, b.right, b.left_constraint, b.right_constraint,
                         rel_attrs[b.relationship].attrs if b.relationship in rel_attrs else ())
        for b in rel_bases.values()
    ]
    return ERModel(tuple(entities), tuple(relationships))
