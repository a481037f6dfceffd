"""Exit criteria. Each test records one PASS/FAIL line, printed in the
terminal summary under "acceptance criteria"."""

import time
from collections import defaultdict

import pytest

from conftest import ACCEPTANCE_LINES
from erpart import (
    EntityType,
    ERModel,
    MinMaxPair,
    Participation,
    RelationshipType,
    SecondarySimpleAttrs,
    check_bijection,
    emit_ddl,
    forward_transform,
    model_from_json,
    model_to_json,
    models_equal,
    parse_model,
    partition_model,
    print_model,
    reverse_transform,
    verify_partition,
)
from erpart.harness import GenConfig, generate_model
from erpart.model import MANY_TO_MANY, ONE_TO_MANY_LR, ONE_TO_ONE, classify_cardinality, classify_participation
from erpart.partition import model_constructs

CORPUS_SIZE = 1000
FORMAT_CORPUS_SIZE = 200


def record(number, title, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}" + (f" ({detail})" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def corpus():
    """1,000 seeded models at default desk-scale bounds."""
    return [generate_model(GenConfig(seed=s)) for s in range(CORPUS_SIZE)]


def test_1_employee_golden():
    start = time.perf_counter()
    m = parse_model("entity Employee { key Emp_No attr Name attr Address attr Gender }")
    p = partition_model(m)
    elapsed = time.perf_counter() - start
    c_units = [u for u in p.units if isinstance(u, SecondarySimpleAttrs)]
    ok = (set(p.labels()) == {"b(Employee)", "c(Employee)"} and len(p.units) == 2
          and len(c_units) == 1 and c_units[0].attrs == ("Address", "Gender") and elapsed < 1.0)
    record(1, "Employee partitions into {b(Employee), c(Employee)}", ok, f"{elapsed * 1000:.1f} ms")


def test_2_six_unit_golden():
    start = time.perf_counter()
    m = ERModel(
        (EntityType("Vehicle", "VehicleNo", "Make", ("Color",)),
         EntityType("Project", "ProjectNo", "Title", ("Budget",))),
        (RelationshipType("AssignedTo", "Vehicle", "Project", MinMaxPair(0, 3), MinMaxPair(1, 1),
                          ("AssignedDate", "Period")),),
    )
    labels = partition_model(m).labels()
    elapsed = time.perf_counter() - start
    expected = {"b(Vehicle)", "c(Vehicle)", "b(Project)", "c(Project)",
                "b(AssignedTo(Vehicle,Project))", "p(AssignedTo(Vehicle,Project))"}
    ok = len(labels) == 6 and set(labels) == expected and elapsed < 1.0
    record(2, "Vehicle-Project partitions into the six expected units", ok, f"{elapsed * 1000:.1f} ms")


def test_3_constraint_classification():
    cases = [
        ((0, 3), (1, 1), (Participation.PARTIAL, Participation.TOTAL), ONE_TO_MANY_LR),
        ((1, 1), (0, 1), (Participation.TOTAL, Participation.PARTIAL), ONE_TO_ONE),
        ((1, 3), (2, 5), (Participation.TOTAL, Participation.TOTAL), MANY_TO_MANY),
    ]
    wrong = []
    for left, right, participation, ratio in cases:
        lp, rp = MinMaxPair(*left), MinMaxPair(*right)
        got = ((classify_participation(lp), classify_participation(rp)), classify_cardinality(lp, rp))
        if got != (participation, ratio):
            wrong.append(f"{left}/{right} -> {got}")
    record(3, "Example 1 and Table I classifications", not wrong, "; ".join(wrong) or "3/3 exact")


def test_4_round_trip_identity():
    start = time.perf_counter()
    mismatches = []
    for seed in range(CORPUS_SIZE):
        m = generate_model(GenConfig(seed=seed))
        schema, _ = forward_transform(partition_model(m))
        if not models_equal(reverse_transform(schema), m):
            mismatches.append(seed)
    elapsed = time.perf_counter() - start
    ok = not mismatches and elapsed < 10.0
    record(4, "reverse(forward(partition(m))) == m on 1,000 models", ok,
           f"{CORPUS_SIZE - len(mismatches)}/{CORPUS_SIZE} identical, {elapsed:.2f} s")


def test_5_bijection(corpus):
    failing = []
    for seed, m in enumerate(corpus):
        p = partition_model(m)
        report = check_bijection(p, *forward_transform(p))
        if not (report.totality.passed and report.injectivity.passed
                and report.surjectivity.passed and report.cardinality.passed and report.passed):
            failing.append(seed)
    record(5, "totality, injectivity, surjectivity, cardinality on 1,000 models", not failing,
           f"{CORPUS_SIZE - len(failing)}/{CORPUS_SIZE} pass")


def _recount(m):
    # Independent of the partitioner: one unit per non-empty (role group, owner).
    group = {"entity": "b", "key": "b", "mandatory": "b", "secondary": "c",
             "relationship": "br", "minmax": "br", "rel_attr": "p"}
    owners = defaultdict(int)
    for c in model_constructs(m):
        owners[(group[c[0]], c[1])] += 1
    return len(owners)


def test_6_partition_laws(corpus):
    bad = []
    for seed, m in enumerate(corpus):
        p = partition_model(m)
        formula = (len(m.entities) + len(m.relationships)
                   + sum(1 for e in m.entities if e.secondary_attrs)
                   + sum(1 for r in m.relationships if r.attrs))
        if verify_partition(p) or not (len(p.units) == formula == _recount(m)):
            bad.append(seed)
    record(6, "verify_partition clean and E + R + E2 + R2 matches recount", not bad,
           f"{CORPUS_SIZE - len(bad)}/{CORPUS_SIZE} pass")


def test_7_format_round_trips():
    dsl_bad, json_bad, ddl_bad = [], [], []
    for seed in range(FORMAT_CORPUS_SIZE):
        m = generate_model(GenConfig(seed=seed))
        if not models_equal(parse_model(print_model(m)), m):
            dsl_bad.append(seed)
        if not models_equal(model_from_json(model_to_json(m)), m):
            json_bad.append(seed)
        schema, _ = forward_transform(partition_model(m))
        if emit_ddl(schema) != emit_ddl(schema):
            ddl_bad.append(seed)
    ok = not (dsl_bad or json_bad or ddl_bad)
    record(7, "DSL and JSON round trips on 200 models, DDL byte-stable", ok,
           f"dsl {FORMAT_CORPUS_SIZE - len(dsl_bad)}/{FORMAT_CORPUS_SIZE}, "
           f"json {FORMAT_CORPUS_SIZE - len(json_bad)}/{FORMAT_CORPUS_SIZE}, "
           f"ddl {FORMAT_CORPUS_SIZE - len(ddl_bad)}/{FORMAT_CORPUS_SIZE}")
