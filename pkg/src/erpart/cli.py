"""Command line interface.

Exit codes: 0 success, 1 validation failure, 2 parse error,
3 round-trip or bijection failure, 4 usage error.
"""

from __future__ import annotations

import argparse
import difflib
import sys
from pathlib import Path

from . import model as er
from . import notation, partition as part, rds
from .harness import GenConfig, generate_model, run_property_suite

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_PARSE = 2
EXIT_ROUNDTRIP = 3
EXIT_USAGE = 4


class _Exit(Exception):
    def __init__(self, code: int, message: str = ""):
        self.code = code
        self.message = message


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        raise _Exit(EXIT_USAGE, f"{self.prog}: error: {message}")


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _Exit(EXIT_USAGE, f"cannot read {path}: {exc.strerror}") from None


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise _Exit(EXIT_USAGE, f"cannot write {path}: {exc.strerror}") from None


def _load_model(path: str, *, check: bool = True) -> er.ERModel:
    try:
        m = notation.parse_model(_read(path))
    except notation.ParseError as exc:
        raise _Exit(EXIT_PARSE, f"{path}:{exc}") from None
    if check:
        violations = er.validate_model(m)
        if violations:
            raise _Exit(EXIT_INVALID, "\n".join(str(v) for v in violations))
    return m


def _transform(m: er.ERModel):
    p = part.partition_model(m)
    try:
        schema, mapping = rds.forward_transform(p)
    except rds.TransformError as exc:
        raise _Exit(EXIT_INVALID, str(exc)) from None
    return p, schema, mapping


def cmd_validate(args: argparse.Namespace) -> int:
    m = _load_model(args.file, check=False)
    violations = er.validate_model(m)
    for v in violations:
        print(v)
    if violations:
        return EXIT_INVALID
    print(f"ok: {len(m.entities)} entities, {len(m.relationships)} relationships")
    return EXIT_OK


def cmd_partition(args: argparse.Namespace) -> int:
    p = part.partition_model(_load_model(args.file))
    if args.json:
        _write(args.json, notation.partition_to_json(p))
    else:
        for label in p.labels():
            print(label)
    return EXIT_OK


def describe_relationship(r: er.RelationshipType) -> str:
    left_p = er.classify_participation(r.left_constraint).value
    right_p = er.classify_participation(r.right_constraint).value
    ratio = er.classify_cardinality(r.left_constraint, r.right_constraint)
    text = ratio.kind.value
    if ratio.direction is er.Direction.LEFT_TO_RIGHT:
        text += f" {r.left_entity}->{r.right_entity}"
    elif ratio.direction is er.Direction.RIGHT_TO_LEFT:
        text += f" {r.right_entity}->{r.left_entity}"
    return f"{r.name}: {r.left_entity} {left_p}, {r.right_entity} {right_p}, {text}"


def cmd_classify(args: argparse.Namespace) -> int:
    m = _load_model(args.file)
    for r in er.canonicalize(m).relationships:
        print(describe_relationship(r))
    return EXIT_OK


def cmd_transform(args: argparse.Namespace) -> int:
    _, schema, mapping = _transform(_load_model(args.file))
    _write(args.out, rds.schema_to_json(schema, mapping))
    if args.ddl:
        _write(args.ddl, rds.emit_ddl(schema))
    return EXIT_OK


def cmd_reverse(args: argparse.Namespace) -> int:
    try:
        schema, _ = rds.schema_from_json(_read(args.schema))
        m = rds.reverse_transform(schema)
    except notation.DocumentError as exc:
        raise _Exit(EXIT_PARSE, f"{args.schema}: {exc}") from None
    except rds.MalformedSchema as exc:
        raise _Exit(EXIT_INVALID, f"{args.schema}: {exc}") from None
    _write(args.out, notation.print_model(m))
    return EXIT_OK


def cmd_roundtrip(args: argparse.Namespace) -> int:
    m = _load_model(args.file)
    p, schema, mapping = _transform(m)
    schema, mapping = rds.schema_from_json(rds.schema_to_json(schema, mapping))
    back = rds.reverse_transform(schema)
    report = rds.check_bijection(p, schema, mapping)
    if not report.passed:
        print(report.summary(), file=sys.stderr)
        return EXIT_ROUNDTRIP
    if not er.models_equal(back, m):
        before = notation.model_to_json(er.canonicalize(m)).splitlines(keepends=True)
        after = notation.model_to_json(er.canonicalize(back)).splitlines(keepends=True)
        sys.stdout.writelines(difflib.unified_diff(before, after, "original", "round-tripped"))
        return EXIT_ROUNDTRIP
    print(f"ok: {len(p.units)} units round-tripped")
    return EXIT_OK


def cmd_gen(args: argparse.Namespace) -> int:
    try:
        cfg = GenConfig(seed=args.seed, max_entities=args.entities, max_relationships=args.rels)
    except ValueError as exc:
        raise _Exit(EXIT_USAGE, str(exc)) from None
    sys.stdout.write(notation.print_model(generate_model(cfg)))
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    try:
        cfg = GenConfig(seed=args.seed)
        report = run_property_suite(cfg, args.iterations, jobs=args.jobs)
    except ValueError as exc:
        raise _Exit(EXIT_USAGE, str(exc)) from None
    for f in report.failures:
        print(f"seed {f.seed}: {f.prop}: {f.detail}", file=sys.stderr)
    print(f"{report.iterations} iterations, {len(report.failures)} failures")
    return EXIT_OK if report.ok else EXIT_ROUNDTRIP


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="erpart", description="ER model partitioning and transformation")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    p = sub.add_parser("validate", help="report well-formedness violations")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("partition", help="list ER-construct-units")
    p.add_argument("file")
    p.add_argument("--json", metavar="OUT", help="write the partition as JSON instead")
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("classify", help="participation and cardinality ratio per relationship")
    p.add_argument("file")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("transform", help="write the relational schema")
    p.add_argument("file")
    p.add_argument("--out", required=True, help="schema JSON output")
    p.add_argument("--ddl", help="also write SQL DDL here")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("reverse", help="rebuild the model from a schema JSON document")
    p.add_argument("schema")
    p.add_argument("--out", required=True, help="model DSL output")
    p.set_defaults(func=cmd_reverse)

    p = sub.add_parser("roundtrip", help="forward then reverse; exit 3 on any difference")
    p.add_argument("file")
    p.set_defaults(func=cmd_roundtrip)

    p = sub.add_parser("gen", help="print a random model")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--entities", type=int, default=GenConfig.max_entities, help="maximum entities")
    p.add_argument("--rels", type=int, default=GenConfig.max_relationships,
                   help="maximum relationships")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("check", help="run the property suite")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--iterations", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_check)
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except _Exit as exc:
        if exc.message:
            print(exc.message, file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
