"""Annotated relational schema, forward/reverse transformation and the
unit-mapping check.

Each ER-construct-unit becomes exactly one relation-schema-unit:

    b(e) -> BaseRelation              e(key NOT NULL PK, mandatory NOT NULL)
    c(e) -> SecondaryColumns          nullable columns added to relation e
    b(r) -> RelationshipRelation      r(fk_<left>, fk_<right>), composite PK,
                                      min-max pairs kept as annotations
    p(r) -> RelationshipAttrColumns   nullable columns added to relation r

Every relationship gets its own relation whatever its cardinality ratio, so
the unit mapping stays one-to-one without any case analysis. Maxima other
than 1 and N have no structural SQL equivalent and ride along as annotations;
the reverse direction reads the annotations, never the structure.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Union

from .model import UNBOUNDED, MinMaxPair, ERModel, validate_model
from .notation import (
    DocumentError,
    dump_json,
    get_field,
    load_json,
    pair_from_json,
    pair_to_json,
)
from .partition import (
    BinaryRelationshipBase,
    ERConstructUnit,
    OptionalRelationshipAttrs,
    Partition,
    RegularEntityBase,
    SecondarySimpleAttrs,
    model_from_units,
    unit_label,
    verify_partition,
)

FK_PREFIX = "fk_"

BASE_RELATION = "base_relation"
SECONDARY_COLUMNS = "secondary_columns"
RELATIONSHIP_RELATION = "relationship_relation"
RELATIONSHIP_ATTR_COLUMNS = "relationship_attr_columns"


class TransformError(ValueError):
    """Forward transformation precondition failed."""


class ReservedNameError(TransformError):
    """A relationship attribute collides with a generated foreign-key column."""


class MalformedSchema(ValueError):
    pass


@dataclass(frozen=True)
class Column:
    name: str
    not_null: bool = False


@dataclass(frozen=True)
class BaseRelation:
    relation: str
    pk_column: Column
    mandatory_column: Column

    kind = BASE_RELATION


@dataclass(frozen=True)
class SecondaryColumns:
    relation: str
    columns: tuple[Column, ...]

    kind = SECONDARY_COLUMNS

    def __post_init__(self) -> None:
        object.__setattr__(self, "columns", tuple(self.columns))


@dataclass(frozen=True)
class RelationshipRelation:
    relation: str
    left_fk: Column
    right_fk: Column
    left_target: str
    right_target: str
    left_annotation: MinMaxPair
    right_annotation: MinMaxPair
    unique_left_fk: bool
    unique_right_fk: bool

    kind = RELATIONSHIP_RELATION


@dataclass(frozen=True)
class RelationshipAttrColumns:
    relation: str
    columns: tuple[Column, ...]

    kind = RELATIONSHIP_ATTR_COLUMNS

    def __post_init__(self) -> None:
        object.__setattr__(self, "columns", tuple(self.columns))


RdsUnit = Union[BaseRelation, SecondaryColumns, RelationshipRelation, RelationshipAttrColumns]


def rds_unit_id(unit: RdsUnit) -> str:
    """Identity of a relation-schema-unit, e.g. ``base_relation:Vehicle``."""
    return f"{unit.kind}:{unit.relation}"


@dataclass(frozen=True)
class RelationalSchema:
    units: tuple[RdsUnit, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "units", tuple(self.units))


@dataclass(frozen=True)
class UnitMapping:
    """Pairs of (ER-construct-unit label, relation-schema-unit id)."""

    pairs: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "pairs", tuple(tuple(p) for p in self.pairs))


def fk_column_name(entity: str) -> str:
    return FK_PREFIX + entity


def unique_flag(pair: MinMaxPair) -> bool:
    return pair.max == 1


# -- forward -----------------------------------------------------------------

def transform_unit(unit: ERConstructUnit) -> RdsUnit:
    if isinstance(unit, RegularEntityBase):
        return BaseRelation(unit.entity, Column(unit.key, True), Column(unit.mandatory, True))
    if isinstance(unit, SecondarySimpleAttrs):
        return SecondaryColumns(unit.entity, tuple(Column(a) for a in unit.attrs))
    if isinstance(unit, BinaryRelationshipBase):
        return RelationshipRelation(
            relation=unit.relationship,
            left_fk=Column(fk_column_name(unit.left), True),
            right_fk=Column(fk_column_name(unit.right), True),
            left_target=unit.left,
            right_target=unit.right,
            left_annotation=unit.left_constraint,
            right_annotation=unit.right_constraint,
            unique_left_fk=unique_flag(unit.left_constraint),
            unique_right_fk=unique_flag(unit.right_constraint),
        )
    if isinstance(unit, OptionalRelationshipAttrs):
        fks = {fk_column_name(unit.left), fk_column_name(unit.right)}
        clash = [a for a in unit.attrs if a in fks]
        if clash:
            raise ReservedNameError(
                f"relationship {unit.relationship!r}: attribute {clash[0]!r} collides with a "
                f"generated foreign-key column")
        return RelationshipAttrColumns(unit.relationship, tuple(Column(a) for a in unit.attrs))
    raise TypeError(f"not an ER-construct-unit: {unit!r}")


def forward_transform(partition: Partition) -> tuple[RelationalSchema, UnitMapping]:
    """Map every ER-construct-unit to one relation-schema-unit.

    Raises :class:`TransformError` if the partition does not verify and
    :class:`ReservedNameError` on a foreign-key column name collision.
    """
    problems = verify_partition(partition)
    if problems:
        raise TransformError("partition does not verify: " + "; ".join(map(str, problems)))
    units = []
    pairs = []
    for u in partition.units:
        rds = transform_unit(u)
        units.append(rds)
        pairs.append((unit_label(u), rds_unit_id(rds)))
    return RelationalSchema(tuple(units)), UnitMapping(tuple(pairs))


# -- reverse -----------------------------------------------------------------

def check_schema(schema: RelationalSchema) -> list[str]:
    """Problems with the schema's structural invariants, as messages."""
    out = []
    if not schema.units:
        out.append("schema has no units")
    relations: dict[str, str] = {}
    for u in schema.units:
        if isinstance(u, (BaseRelation, RelationshipRelation)):
            if u.relation in relations:
                out.append(f"relation {u.relation!r} defined more than once")
            relations[u.relation] = u.kind
    if BASE_RELATION not in relations.values():
        out.append("schema has no base relation")

    extensions = Counter()
    for u in schema.units:
        if isinstance(u, BaseRelation):
            if not (u.pk_column.not_null and u.mandatory_column.not_null):
                out.append(f"{u.relation}: key and mandatory columns must be NOT NULL")
            if u.pk_column.name == u.mandatory_column.name:
                out.append(f"{u.relation}: key and mandatory column share a name")
        elif isinstance(u, (SecondaryColumns, RelationshipAttrColumns)):
            owner_kind = BASE_RELATION if isinstance(u, SecondaryColumns) else RELATIONSHIP_RELATION
            if relations.get(u.relation) != owner_kind:
                out.append(f"{u.kind} names {u.relation!r}, which is not a {owner_kind}")
            if not u.columns:
                out.append(f"{rds_unit_id(u)}: empty column list")
            extensions[rds_unit_id(u)] += 1
        elif isinstance(u, RelationshipRelation):
            for side, target, fk in (("left", u.left_target, u.left_fk),
                                     ("right", u.right_target, u.right_fk)):
                if relations.get(target) != BASE_RELATION:
                    out.append(f"{u.relation}: {side} foreign key targets unknown relation {target!r}")
                if fk.name != fk_column_name(target):
                    out.append(f"{u.relation}: {side} foreign key column {fk.name!r} "
                               f"should be {fk_column_name(target)!r}")
            if u.unique_left_fk != unique_flag(u.left_annotation):
                out.append(f"{u.relation}: left uniqueness flag disagrees with annotation")
            if u.unique_right_fk != unique_flag(u.right_annotation):
                out.append(f"{u.relation}: right uniqueness flag disagrees with annotation")
        else:
            out.append(f"not a relation-schema-unit: {u!r}")
    for uid, n in extensions.items():
        if n > 1:
            out.append(f"{uid} appears {n} times")
    return out


def reverse_unit(unit: RdsUnit) -> ERConstructUnit:
    if isinstance(unit, BaseRelation):
        return RegularEntityBase(unit.relation, unit.pk_column.name, unit.mandatory_column.name)
    if isinstance(unit, SecondaryColumns):
        return SecondarySimpleAttrs(unit.relation, tuple(c.name for c in unit.columns))
    if isinstance(unit, RelationshipRelation):
        return BinaryRelationshipBase(unit.relation, unit.left_target, unit.right_target,
                                      unit.left_annotation, unit.right_annotation)
    if isinstance(unit, RelationshipAttrColumns):
        # endpoints are filled in from the owning relationship relation
        return OptionalRelationshipAttrs(unit.relation, "", "", tuple(c.name for c in unit.columns))
    raise MalformedSchema(f"not a relation-schema-unit: {unit!r}")


def reverse_transform(schema: RelationalSchema) -> ERModel:
    """Rebuild the ER model by inverting each forward rule unit by unit.

    Raises :class:`MalformedSchema` on a broken schema or when the rebuilt
    model does not validate.
    """
    problems = check_schema(schema)
    if problems:
        raise MalformedSchema("; ".join(problems))
    units = [reverse_unit(u) for u in schema.units]
    model = model_from_units(units)
    violations = validate_model(model)
    if violations:
        raise MalformedSchema("; ".join(map(str, violations)))
    return model


# -- mapping check -----------------------------------------------------------

@dataclass
class ClauseResult:
    passed: bool
    counterexamples: list[str] = field(default_factory=list)


@dataclass
class BijectionReport:
    totality: ClauseResult
    injectivity: ClauseResult
    surjectivity: ClauseResult
    cardinality: ClauseResult
    # pairs naming a source or target that does not exist at all
    dangling: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (self.totality.passed and self.injectivity.passed and self.surjectivity.passed
                and self.cardinality.passed and not self.dangling)

    def clauses(self) -> dict[str, ClauseResult]:
        return {"totality": self.totality, "injectivity": self.injectivity,
                "surjectivity": self.surjectivity, "cardinality": self.cardinality}

    def summary(self) -> str:
        lines = []
        for name, c in self.clauses().items():
            status = "pass" if c.passed else "FAIL"
            extra = f" ({', '.join(c.counterexamples)})" if c.counterexamples else ""
            lines.append(f"{name}: {status}{extra}")
        if self.dangling:
            lines.append(f"dangling: {', '.join(self.dangling)}")
        return "\n".join(lines)


def check_bijection(partition: Partition, schema: RelationalSchema,
                    mapping: UnitMapping) -> BijectionReport:
    """Check that ``mapping`` is a one-to-one, onto map from units to schema units."""
    labels = [unit_label(u) for u in partition.units]
    targets = [rds_unit_id(u) for u in schema.units]
    label_set, target_set = set(labels), set(targets)

    source_counts = Counter(src for src, _ in mapping.pairs)
    target_counts = Counter(dst for _, dst in mapping.pairs)

    not_total = [f"{lb} unmapped" for lb in labels if source_counts[lb] == 0]
    not_total += [f"{lb} mapped {source_counts[lb]} times" for lb in labels if source_counts[lb] > 1]

    collisions = []
    for dst, n in target_counts.items():
        if n > 1:
            srcs = [src for src, d in mapping.pairs if d == dst]
            collisions.append(f"{dst} <- {', '.join(srcs)}")

    orphans = [f"{t} not hit" for t in targets if target_counts[t] == 0]

    cardinality = []
    if len(labels) != len(targets):
        cardinality.append(f"{len(labels)} ER-construct-units vs {len(targets)} relation-schema-units")

    dangling = [f"unknown source {src}" for src, _ in mapping.pairs if src not in label_set]
    dangling += [f"unknown target {dst}" for _, dst in mapping.pairs if dst not in target_set]

    return BijectionReport(
        totality=ClauseResult(not not_total and not _dupes(labels), not_total + _dupes(labels)),
        injectivity=ClauseResult(not collisions, collisions),
        surjectivity=ClauseResult(not orphans and not _dupes(targets), orphans + _dupes(targets)),
        cardinality=ClauseResult(not cardinality, cardinality),
        dangling=dangling,
    )


def _dupes(items: list[str]) -> list[str]:
    return [f"{k} listed {n} times" for k, n in Counter(items).items() if n > 1]


# -- JSON --------------------------------------------------------------------

def _col(c: Column) -> dict[str, Any]:
    return {"name": c.name, "not_null": c.not_null}


def _col_from(obj: Any, where: str) -> Column:
    return Column(get_field(obj, "name", str, where), _bool(obj, "not_null", where))


def _bool(obj: Any, key: str, where: str) -> bool:
    if not isinstance(obj, dict) or not isinstance(obj.get(key), bool):
        raise DocumentError(f"{where}.{key}: expected a boolean")
    return obj[key]


def rds_unit_to_doc(u: RdsUnit) -> dict[str, Any]:
    head = {"kind": u.kind, "relation": u.relation}
    if isinstance(u, BaseRelation):
        return {**head, "pk_column": _col(u.pk_column), "mandatory_column": _col(u.mandatory_column)}
    if isinstance(u, RelationshipRelation):
        return {**head,
                "left_fk": _col(u.left_fk), "right_fk": _col(u.right_fk),
                "left_target": u.left_target, "right_target": u.right_target,
                "left_annotation": pair_to_json(u.left_annotation),
                "right_annotation": pair_to_json(u.right_annotation),
                "unique_left_fk": u.unique_left_fk, "unique_right_fk": u.unique_right_fk}
    return {**head, "columns": [_col(c) for c in u.columns]}


def rds_unit_from_doc(obj: Any, where: str) -> RdsUnit:
    kind = get_field(obj, "kind", str, where)
    rel = get_field(obj, "relation", str, where)
    if kind == BASE_RELATION:
        return BaseRelation(rel, _col_from(get_field(obj, "pk_column", dict, where), where + ".pk_column"),
                            _col_from(get_field(obj, "mandatory_column", dict, where),
                                      where + ".mandatory_column"))
    if kind == RELATIONSHIP_RELATION:
        return RelationshipRelation(
            relation=rel,
            left_fk=_col_from(get_field(obj, "left_fk", dict, where), where + ".left_fk"),
            right_fk=_col_from(get_field(obj, "right_fk", dict, where), where + ".right_fk"),
            left_target=get_field(obj, "left_target", str, where),
            right_target=get_field(obj, "right_target", str, where),
            left_annotation=pair_from_json(get_field(obj, "left_annotation", dict, where),
                                           where + ".left_annotation"),
            right_annotation=pair_from_json(get_field(obj, "right_annotation", dict, where),
                                            where + ".right_annotation"),
            unique_left_fk=_bool(obj, "unique_left_fk", where),
            unique_right_fk=_bool(obj, "unique_right_fk", where),
        )
    if kind in (SECONDARY_COLUMNS, RELATIONSHIP_ATTR_COLUMNS):
        cols = tuple(_col_from(c, f"{where}.columns[{i}]")
                     for i, c in enumerate(get_field(obj, "columns", list, where)))
        cls = SecondaryColumns if kind == SECONDARY_COLUMNS else RelationshipAttrColumns
        return cls(rel, cols)
    raise DocumentError(f"{where}.kind: unknown unit kind {kind!r}")


def schema_to_json(schema: RelationalSchema, mapping: UnitMapping) -> str:
    return dump_json({
        "units": [rds_unit_to_doc(u) for u in schema.units],
        "mapping": [{"source": s, "target": t} for s, t in mapping.pairs],
    })


def schema_from_json(text: str) -> tuple[RelationalSchema, UnitMapping]:
    """Decode a schema document.

    Raises :class:`DocumentError` on malformed JSON or a schema that breaks
    its structural invariants (including an empty unit list).
    """
    doc = load_json(text)
    units = tuple(rds_unit_from_doc(u, f"units[{i}]")
                  for i, u in enumerate(get_field(doc, "units", list, "schema")))
    pairs = tuple((get_field(p, "source", str, f"mapping[{i}]"),
                   get_field(p, "target", str, f"mapping[{i}]"))
                  for i, p in enumerate(get_field(doc, "mapping", list, "schema")))
    schema = RelationalSchema(units)
    problems = check_schema(schema)
    if problems:
        raise DocumentError("; ".join(problems))
    return schema, UnitMapping(pairs)


# -- DDL ---------------------------------------------------------------------

SQL_TYPE = "VARCHAR(255)"


def _bound_text(b: Any) -> str:
    return "N" if b is UNBOUNDED else str(b)


def emit_ddl(schema: RelationalSchema) -> str:
    """Portable CREATE TABLE statements; export only, never read back.

    Base relations come first, then relationship relations, each group in
    name order. Min-max annotations follow each relationship table as
    ``-- @minmax side=<left|right> min=<int> max=<int|N>`` comment lines.
    """
    bases = {u.relation: u for u in schema.units if isinstance(u, BaseRelation)}
    rels = {u.relation: u for u in schema.units if isinstance(u, RelationshipRelation)}
    extra: dict[str, list[Column]] = {}
    for u in schema.units:
        if isinstance(u, (SecondaryColumns, RelationshipAttrColumns)):
            extra.setdefault(u.relation, []).extend(u.columns)

    def col_def(c: Column) -> str:
        return f"    {c.name} {SQL_TYPE}" + (" NOT NULL" if c.not_null else "")

    statements = []
    for name in sorted(bases):
        b = bases[name]
        lines = [f"    {b.pk_column.name} {SQL_TYPE} NOT NULL PRIMARY KEY",
                 col_def(b.mandatory_column)]
        lines += [col_def(c) for c in extra.get(name, [])]
        statements.append(f"CREATE TABLE {name} (\n" + ",\n".join(lines) + "\n);")

    for name in sorted(rels):
        r = rels[name]
        lines = [col_def(r.left_fk), col_def(r.right_fk)]
        lines += [col_def(c) for c in extra.get(name, [])]
        lines.append(f"    PRIMARY KEY ({r.left_fk.name}, {r.right_fk.name})")
        for fk, target in ((r.left_fk, r.left_target), (r.right_fk, r.right_target)):
            pk = bases[target].pk_column.name if target in bases else fk.name
            lines.append(f"    FOREIGN KEY ({fk.name}) REFERENCES {target} ({pk})")
        if r.unique_left_fk:
            lines.append(f"    UNIQUE ({r.left_fk.name})")
        if r.unique_right_fk:
            lines.append(f"    UNIQUE ({r.right_fk.name})")
        stmt = f"CREATE TABLE {name} (\n" + ",\n".join(lines) + "\n);"
        for side, p in (("left", r.left_annotation), ("right", r.right_annotation)):
            stmt += f"\n-- @minmax side={side} min={p.min} max={_bound_text(p.max)}"
        statements.append(stmt)
    return "\n\n".join(statements) + "\n"
