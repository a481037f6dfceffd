"""Text DSL and JSON encodings for ER models and partitions.

DSL grammar::

    model       ::= (entity_decl | rel_decl)*
    entity_decl ::= "entity" IDENT "{" "key" IDENT attr_decl attr_decl* "}"
    attr_decl   ::= "attr" IDENT
    rel_decl    ::= "relationship" IDENT "between" IDENT "(" bound "," bound ")"
                    "and" IDENT "(" bound "," bound ")" ("{" attr_decl* "}")?
    bound       ::= INTEGER | "N"        (N only as a maximum)

``#`` starts a comment running to end of line. Keywords are not reserved:
every position in the grammar is determined by the preceding token, so an
entity may be called ``entity``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Any, Iterator

from .model import (
    UNBOUNDED,
    Bound,
    EntityType,
    ERModel,
    MinMaxPair,
    RelationshipType,
)
from .partition import (
    BINARY_RELATIONSHIP_BASE,
    OPTIONAL_RELATIONSHIP_ATTRS,
    REGULAR_ENTITY_BASE,
    SECONDARY_SIMPLE_ATTRS,
    BinaryRelationshipBase,
    ERConstructUnit,
    OptionalRelationshipAttrs,
    Partition,
    RegularEntityBase,
    SecondarySimpleAttrs,
    model_from_units,
    unit_label,
)


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    length: int = 0

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


class NotationError(ValueError):
    """Base class for malformed DSL or JSON input."""


class ParseError(NotationError):
    def __init__(self, span: SourceSpan, expected: str, found: str):
        self.span = span
        self.expected = expected
        self.found = found
        super().__init__(f"{span}: expected {expected}, found {found}")


class DocumentError(NotationError):
    """A JSON document that is syntactically or structurally malformed."""


# -- lexer -------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<int>[0-9]+)
  | (?P<punct>[{}(),])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # ident | int | punct | eof
    text: str
    span: SourceSpan


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError(SourceSpan(line, col, 1), "a token", repr(source[pos]))
        kind = m.lastgroup
        text = m.group()
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, text, SourceSpan(line, col, len(text))))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            line_start = m.start() + text.rindex("\n") + 1
        pos = m.end()
    if tokens:
        # An error at end of input points at the last character of the last token.
        last = tokens[-1].span
        eof = SourceSpan(last.line, last.column + last.length - 1, 0)
    else:
        eof = SourceSpan(1, 1, 0)
    tokens.append(Token("eof", "", eof))
    return tokens


# -- parser ------------------------------------------------------------------

class _Parser:
    def __init__(self, source: str):
        self.tokens = tokenize(source)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def fail(self, expected: str) -> ParseError:
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        return ParseError(t.span, expected, found)

    def at(self, text: str) -> bool:
        return self.tok.kind in ("ident", "punct") and self.tok.text == text

    def expect(self, text: str) -> None:
        if not self.at(text):
            raise self.fail(repr(text))
        self.i += 1

    def ident(self, what: str = "identifier") -> str:
        if self.tok.kind != "ident":
            raise self.fail(what)
        text = self.tok.text
        self.i += 1
        return text

    def min_bound(self) -> int:
        if self.tok.kind != "int":
            raise self.fail("integer minimum")
        value = int(self.tok.text)
        self.i += 1
        return value

    def max_bound(self) -> Bound:
        if self.tok.kind == "int":
            value: Bound = int(self.tok.text)
        elif self.at("N"):
            value = UNBOUNDED
        else:
            raise self.fail("integer or 'N' maximum")
        self.i += 1
        return value

    def pair(self) -> MinMaxPair:
        self.expect("(")
        lo = self.min_bound()
        self.expect(",")
        hi = self.max_bound()
        self.expect(")")
        return MinMaxPair(lo, hi)

    def attrs(self) -> list[str]:
        out = []
        while self.at("attr"):
            self.i += 1
            out.append(self.ident("attribute name"))
        return out

    def entity(self) -> EntityType:
        self.expect("entity")
        name = self.ident("entity name")
        self.expect("{")
        self.expect("key")
        key = self.ident("key attribute name")
        if not self.at("attr"):
            raise self.fail("'attr' (an entity needs a mandatory attribute)")
        attrs = self.attrs()
        self.expect("}")
        return EntityType(name, key, attrs[0], tuple(attrs[1:]))

    def relationship(self) -> RelationshipType:
        self.expect("relationship")
        name = self.ident("relationship name")
        self.expect("between")
        left = self.ident("entity name")
        left_pair = self.pair()
        self.expect("and")
        right = self.ident("entity name")
        right_pair = self.pair()
        attrs: list[str] = []
        if self.at("{"):
            self.i += 1
            attrs = self.attrs()
            self.expect("}")
        return RelationshipType(name, left, right, left_pair, right_pair, tuple(attrs))

    def model(self) -> ERModel:
        entities, rels = [], []
        while self.tok.kind != "eof":
            if self.at("entity"):
                entities.append(self.entity())
            elif self.at("relationship"):
                rels.append(self.relationship())
            else:
                raise self.fail("'entity' or 'relationship'")
        return ERModel(tuple(entities), tuple(rels))


def parse_model(source: str) -> ERModel:
    """Parse DSL text into a model, keeping declaration order.

    Only syntax is checked here; run :func:`validate_model` on the result.
    Raises :class:`ParseError` at the first syntax error.
    """
    return _Parser(source).model()


# -- printer -----------------------------------------------------------------

def _print_pair(p: MinMaxPair) -> str:
    return f"({p.min}, {p.max})"


def _print_entity(e: EntityType) -> Iterator[str]:
    yield f"entity {e.name} {{"
    yield f"    key {e.key_attr}"
    for a in (e.mandatory_attr, *e.secondary_attrs):
        yield f"    attr {a}"
    yield "}"


def _print_relationship(r: RelationshipType) -> Iterator[str]:
    head = (f"relationship {r.name} between {r.left_entity} {_print_pair(r.left_constraint)}"
            f" and {r.right_entity} {_print_pair(r.right_constraint)}")
    if not r.attrs:
        yield head
        return
    yield head + " {"
    for a in r.attrs:
        yield f"    attr {a}"
    yield "}"


def print_model(model: ERModel) -> str:
    blocks = [list(_print_entity(e)) for e in model.entities]
    blocks += [list(_print_relationship(r)) for r in model.relationships]
    return "\n\n".join("\n".join(b) for b in blocks) + "\n"


# -- JSON: shared helpers ----------------------------------------------------

def dump_json(doc: Any) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def load_json(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON at {exc.lineno}:{exc.colno}: {exc.msg}") from None


def get_field(obj: Any, key: str, kind: type | tuple[type, ...], where: str) -> Any:
    if not isinstance(obj, dict):
        raise DocumentError(f"{where}: expected an object")
    if key not in obj:
        raise DocumentError(f"{where}: missing key {key!r}")
    value = obj[key]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise DocumentError(f"{where}.{key}: unexpected value {value!r}")
    return value


def name_list(obj: Any, key: str, where: str) -> tuple[str, ...]:
    values = get_field(obj, key, list, where)
    for v in values:
        if not isinstance(v, str):
            raise DocumentError(f"{where}.{key}: expected strings, got {v!r}")
    return tuple(values)


def pair_to_json(p: MinMaxPair) -> dict[str, Any]:
    return {"min": p.min, "max": "N" if p.max is UNBOUNDED else p.max}


def pair_from_json(obj: Any, where: str) -> MinMaxPair:
    lo = get_field(obj, "min", int, where)
    hi = get_field(obj, "max", (int, str), where)
    if isinstance(hi, str):
        if hi != "N":
            raise DocumentError(f"{where}.max: expected an integer or \"N\", got {hi!r}")
        hi = UNBOUNDED
    return MinMaxPair(lo, hi)


# -- JSON: models ------------------------------------------------------------

def model_to_doc(model: ERModel) -> dict[str, Any]:
    return {
        "entities": [
            {"name": e.name, "key": e.key_attr, "mandatory": e.mandatory_attr,
             "secondary": list(e.secondary_attrs)}
            for e in model.entities
        ],
        "relationships": [
            {"name": r.name, "left": r.left_entity, "right": r.right_entity,
             "left_minmax": pair_to_json(r.left_constraint),
             "right_minmax": pair_to_json(r.right_constraint),
             "attrs": list(r.attrs)}
            for r in model.relationships
        ],
    }


def model_from_doc(doc: Any) -> ERModel:
    entities = []
    for i, e in enumerate(get_field(doc, "entities", list, "model")):
        where = f"entities[{i}]"
        entities.append(EntityType(
            get_field(e, "name", str, where), get_field(e, "key", str, where),
            get_field(e, "mandatory", str, where), name_list(e, "secondary", where)))
    rels = []
    for i, r in enumerate(get_field(doc, "relationships", list, "model")):
        where = f"relationships[{i}]"
        rels.append(RelationshipType(
            get_field(r, "name", str, where), get_field(r, "left", str, where),
            get_field(r, "right", str, where),
            pair_from_json(get_field(r, "left_minmax", dict, where), where + ".left_minmax"),
            pair_from_json(get_field(r, "right_minmax", dict, where), where + ".right_minmax"),
            name_list(r, "attrs", where)))
    return ERModel(tuple(entities), tuple(rels))


def model_to_json(model: ERModel) -> str:
    return dump_json(model_to_doc(model))


def model_from_json(text: str) -> ERModel:
    """Decode a model document. Raises :class:`DocumentError` when malformed."""
    return model_from_doc(load_json(text))


# -- JSON: partitions --------------------------------------------------------

def unit_to_doc(unit: ERConstructUnit) -> dict[str, Any]:
    head = {"kind": unit.kind, "label": unit_label(unit)}
    if isinstance(unit, RegularEntityBase):
        return {**head, "entity": unit.entity, "key": unit.key, "mandatory": unit.mandatory}
    if isinstance(unit, SecondarySimpleAttrs):
        return {**head, "entity": unit.entity, "attrs": list(unit.attrs)}
    if isinstance(unit, BinaryRelationshipBase):
        return {**head, "relationship": unit.relationship, "left": unit.left, "right": unit.right,
                "left_minmax": pair_to_json(unit.left_constraint),
                "right_minmax": pair_to_json(unit.right_constraint)}
    return {**head, "relationship": unit.relationship, "left": unit.left, "right": unit.right,
            "attrs": list(unit.attrs)}


def unit_from_doc(obj: Any, where: str) -> ERConstructUnit:
    kind = get_field(obj, "kind", str, where)
    if kind == REGULAR_ENTITY_BASE:
        unit: ERConstructUnit = RegularEntityBase(
            get_field(obj, "entity", str, where), get_field(obj, "key", str, where),
            get_field(obj, "mandatory", str, where))
    elif kind == SECONDARY_SIMPLE_ATTRS:
        unit = SecondarySimpleAttrs(get_field(obj, "entity", str, where), name_list(obj, "attrs", where))
    elif kind == BINARY_RELATIONSHIP_BASE:
        unit = BinaryRelationshipBase(
            get_field(obj, "relationship", str, where), get_field(obj, "left", str, where),
            get_field(obj, "right", str, where),
            pair_from_json(get_field(obj, "left_minmax", dict, where), where + ".left_minmax"),
            pair_from_json(get_field(obj, "right_minmax", dict, where), where + ".right_minmax"))
    elif kind == OPTIONAL_RELATIONSHIP_ATTRS:
        unit = OptionalRelationshipAttrs(
            get_field(obj, "relationship", str, where), get_field(obj, "left", str, where),
            get_field(obj, "right", str, where), name_list(obj, "attrs", where))
    else:
        raise DocumentError(f"{where}.kind: unknown unit kind {kind!r}")
    label = obj.get("label")
    if label is not None and label != unit_label(unit):
        raise DocumentError(f"{where}.label: {label!r} does not match {unit_label(unit)!r}")
    return unit


def partition_to_json(partition: Partition) -> str:
    return dump_json({"units": [unit_to_doc(u) for u in partition.units]})


def partition_from_json(text: str) -> Partition:
    """Decode a partition document; the source model is rebuilt from the units."""
    doc = load_json(text)
    units = tuple(unit_from_doc(u, f"units[{i}]")
                  for i, u in enumerate(get_field(doc, "units", list, "partition")))
    try:
        model = model_from_units(units)
    except ValueError as exc:
        raise DocumentError(str(exc)) from None
    return Partition(units, model)
