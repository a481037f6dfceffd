"""Partition ER models into construct units and map them one-to-one onto an
annotated relational schema."""

from .model import (
    UNBOUNDED,
    CardinalityRatio,
    Direction,
    EntityType,
    ERModel,
    InvalidModelError,
    MinMaxPair,
    Participation,
    RatioKind,
    RelationshipType,
    Violation,
    canonicalize,
    classify_cardinality,
    classify_participation,
    models_equal,
    validate_model,
)
from .notation import (
    DocumentError,
    ParseError,
    SourceSpan,
    model_from_json,
    model_to_json,
    parse_model,
    partition_from_json,
    partition_to_json,
    print_model,
)
from .partition import (
    BinaryRelationshipBase,
    OptionalRelationshipAttrs,
    Partition,
    RegularEntityBase,
    SecondarySimpleAttrs,
    partition_model,
    unit_label,
    verify_partition,
)
from .rds import (
    MalformedSchema,
    RelationalSchema,
    UnitMapping,
    check_bijection,
    emit_ddl,
    forward_transform,
    reverse_transform,
    schema_from_json,
    schema_to_json,
)
from .harness import GenConfig, generate_model, run_property_suite

__version__ = "0.1.0"
