"""Seeded random model generator and the property battery run by ``check``."""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, NamedTuple

from . import model as er
from . import notation, partition as part, rds
from .model import UNBOUNDED, EntityType, ERModel, MinMaxPair, RelationshipType

SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class GenConfig:
    """Generator bounds. Defaults are desk-scale: instant, but every
    cardinality class shows up over a few hundred models."""

    seed: int = 0
    max_entities: int = 6
    max_secondary_attrs: int = 4
    max_relationships: int = 5
    max_rel_attrs: int = 3
    max_bound: int = 9
    unbounded_probability: float = 0.3

    def __post_init__(self) -> None:
        if not 0 <= self.seed <= SEED_MASK:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.max_entities < 1:
            raise ValueError("max_entities must be at least 1")
        if min(self.max_secondary_attrs, self.max_relationships, self.max_rel_attrs) < 0:
            raise ValueError("attribute and relationship maxima must be non-negative")
        if self.max_bound < 1:
            raise ValueError("max_bound must be at least 1")
        if not 0.0 <= self.unbounded_probability <= 1.0:
            raise ValueError("unbounded_probability must lie in [0, 1]")


def _pair(rng: random.Random, cfg: GenConfig) -> MinMaxPair:
    if rng.random() < cfg.unbounded_probability:
        return MinMaxPair(rng.randint(0, cfg.max_bound), UNBOUNDED)
    hi = rng.randint(1, cfg.max_bound)
    return MinMaxPair(rng.randint(0, hi), hi)


def generate_model(config: GenConfig) -> ERModel:
    """Random valid model; the same config always gives the same model.

    Uses :class:`random.Random` (Mersenne Twister) seeded with ``config.seed``.
    Names are ``Entity<i>``, ``Rel<i>`` and ``a<i>`` (attribute numbering runs
    across the whole model).
    """
    rng = random.Random(config.seed)
    counter = 0

    def attr() -> str:
        nonlocal counter
        counter += 1
        return f"a{counter}"

    entities = []
    for i in range(1, rng.randint(1, config.max_entities) + 1):
        key, mandatory = attr(), attr()
        secondary = tuple(attr() for _ in range(rng.randint(0, config.max_secondary_attrs)))
        entities.append(EntityType(f"Entity{i}", key, mandatory, secondary))

    rels = []
    if len(entities) >= 2:
        for v in range(1, rng.randint(0, config.max_relationships) + 1):
            left, right = rng.sample(entities, 2)
            attrs = tuple(attr() for _ in range(rng.randint(0, config.max_rel_attrs)))
            rels.append(RelationshipType(f"Rel{v}", left.name, right.name,
                                         _pair(rng, config), _pair(rng, config), attrs))
    return ERModel(tuple(entities), tuple(rels))


def iteration_seed(base: int, i: int) -> int:
    return (base + i) & SEED_MASK


def expected_unit_count(model: ERModel) -> int:
    """E + R + E2 + R2, counted directly from the model."""
    entities = len(model.entities)
    rels = len(model.relationships)
    with_secondary = sum(1 for e in model.entities if e.secondary_attrs)
    with_attrs = sum(1 for r in model.relationships if r.attrs)
    return entities + rels + with_secondary + with_attrs


# Each property takes a generated model and returns None on success or a
# short description of what went wrong.

def _prop_valid(m: ERModel) -> str | None:
    v = er.validate_model(m)
    return "; ".join(map(str, v)) if v else None


def _prop_canonical(m: ERModel) -> str | None:
    c = er.canonicalize(m)
    if er.canonicalize(c) != c:
        return "canonicalize is not idempotent"
    if {e.name for e in c.entities} != {e.name for e in m.entities}:
        return "canonicalize changed the entity name set"
    if {r.name for r in c.relationships} != {r.name for r in m.relationships}:
        return "canonicalize changed the relationship name set"
    swapped = replace(m, entities=m.entities[::-1], relationships=m.relationships[::-1])
    if not er.models_equal(m, swapped):
        return "models_equal depends on declaration order"
    return None


def _prop_classification(m: ERModel) -> str | None:
    for r in m.relationships:
        lc, rc = r.left_constraint, r.right_constraint
        if (er.classify_participation(lc) is er.Participation.PARTIAL) != (lc.min == 0):
            return f"{r.name}: participation disagrees with min"
        if er.classify_cardinality(rc, lc) != er.classify_cardinality(lc, rc).swapped():
            return f"{r.name}: cardinality not symmetric under side swap"
    return None


def _prop_partition(m: ERModel) -> str | None:
    p = part.partition_model(m)
    v = part.verify_partition(p)
    if v:
        return "; ".join(map(str, v))
    if p != part.partition_model(m) or p.units != part.partition_model(er.canonicalize(m)).units:
        return "partition_model is not deterministic"
    return None


def _prop_unit_count(m: ERModel) -> str | None:
    got = len(part.partition_model(m).units)
    want = expected_unit_count(m)
    return None if got == want else f"{got} units, expected {want}"


def _prop_dsl(m: ERModel) -> str | None:
    text = notation.print_model(m)
    if text != notation.print_model(m):
        return "print_model is not stable"
    back = notation.parse_model(text)
    return None if er.models_equal(back, m) else "print/parse changed the model"


def _prop_json(m: ERModel) -> str | None:
    back = notation.model_from_json(notation.model_to_json(m))
    if not er.models_equal(back, m):
        return "JSON encode/decode changed the model"
    p = part.partition_model(m)
    if notation.partition_from_json(notation.partition_to_json(p)).units != p.units:
        return "partition JSON round trip changed the units"
    return None


def _prop_round_trip(m: ERModel) -> str | None:
    schema, mapping = rds.forward_transform(part.partition_model(m))
    schema, mapping = rds.schema_from_json(rds.schema_to_json(schema, mapping))
    back = rds.reverse_transform(schema)
    return None if er.models_equal(back, m) else "reverse(forward(m)) differs from m"


def _prop_schema_laws(m: ERModel) -> str | None:
    schema, _ = rds.forward_transform(part.partition_model(m))
    source = {r.name: r for r in m.relationships}
    for u in schema.units:
        if isinstance(u, rds.RelationshipRelation):
            r = source[u.relation]
            if (u.left_annotation, u.right_annotation) != (r.left_constraint, r.right_constraint):
                return f"{u.relation}: annotations differ from the model"
            if u.unique_left_fk != (r.left_constraint.max == 1) or \
                    u.unique_right_fk != (r.right_constraint.max == 1):
                return f"{u.relation}: uniqueness flags break the max = 1 law"
    kinds = {u.relation: u.kind for u in schema.units if u.kind == rds.RELATIONSHIP_RELATION}
    if set(kinds) != set(source):
        return "some relationship did not become a relationship relation"
    if rds.emit_ddl(schema) != rds.emit_ddl(schema):
        return "emit_ddl is not byte-stable"
    return None


def _prop_bijection(m: ERModel) -> str | None:
    p = part.partition_model(m)
    schema, mapping = rds.forward_transform(p)
    report = rds.check_bijection(p, schema, mapping)
    return None if report.passed else report.summary().replace("\n", "; ")


PROPERTIES: dict[str, Callable[[ERModel], str | None]] = {
    "generator_valid": _prop_valid,
    "canonical_form": _prop_canonical,
    "classification": _prop_classification,
    "verify_partition": _prop_partition,
    "unit_count": _prop_unit_count,
    "dsl_round_trip": _prop_dsl,
    "json_round_trip": _prop_json,
    "forward_reverse_round_trip": _prop_round_trip,
    "schema_laws": _prop_schema_laws,
    "bijection": _prop_bijection,
}


class Failure(NamedTuple):
    seed: int
    prop: str
    model_json: str
    detail: str = ""


@dataclass
class CheckReport:
    iterations: int
    failures: list[Failure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def check_seed(config: GenConfig) -> list[Failure]:
    m = generate_model(config)
    failures = []
    for name, prop in PROPERTIES.items():
        try:
            problem = prop(m)
        except Exception as exc:  # noqa: BLE001 - any crash is a failed property
            problem = f"{type(exc).__name__}: {exc}"
        if problem is not None:
            failures.append(Failure(config.seed, name, notation.model_to_json(m), problem))
    return failures


def run_property_suite(config: GenConfig, iterations: int, jobs: int = 1) -> CheckReport:
    """Run every property on ``iterations`` models with seeds derived from
    ``config.seed``. Failures are collected, never raised."""
    if iterations < 1:
        raise ValueError("iterations must be at least 1")
    configs = [replace(config, seed=iteration_seed(config.seed, i)) for i in range(iterations)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(check_seed, configs, chunksize=32))
    else:
        results = [check_seed(c) for c in configs]
    return CheckReport(iterations, [f for r in results for f in r])
