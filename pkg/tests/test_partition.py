from collections import defaultdict
from dataclasses import replace

import pytest
from hypothesis import given, settings

from conftest import ASSIGNED_TO, models
from erpart import (
    BinaryRelationshipBase,
    EntityType,
    ERModel,
    InvalidModelError,
    MinMaxPair,
    OptionalRelationshipAttrs,
    Partition,
    RegularEntityBase,
    SecondarySimpleAttrs,
    canonicalize,
    partition_model,
    unit_label,
    verify_partition,
)
from erpart.partition import model_constructs, model_from_units, unit_constructs


def brute_force_unit_count(model):
    """Independent recount: group every construct by the unit that must own it
    (entity core, entity extras, relationship core, relationship extras) and
    count the non-empty groups."""
    groups = defaultdict(int)
    for c in model_constructs(model):
        tag, owner = c[0], c[1]
        group = {"entity": "core", "key": "core", "mandatory": "core", "secondary": "extra",
                 "relationship": "rcore", "minmax": "rcore", "rel_attr": "rextra"}[tag]
        groups[(group, owner)] += 1
    return len(groups)


class TestPartitionModel:
    def test_single_entity_with_secondaries(self):
        e = EntityType("e_i", "k", "s1", ("s2", "s3", "s4"))
        p = partition_model(ERModel((e,)))
        assert p.units == (RegularEntityBase("e_i", "k", "s1"),
                           SecondarySimpleAttrs("e_i", ("s2", "s3", "s4")))

    def test_six_units(self, vehicle_project):
        p = partition_model(vehicle_project)
        assert len(p.units) == 6
        assert set(p.labels()) == {"b(Vehicle)", "c(Vehicle)", "b(Project)", "c(Project)",
                                   "b(AssignedTo(Vehicle,Project))", "p(AssignedTo(Vehicle,Project))"}

    def test_canonical_order(self, vehicle_project):
        assert partition_model(vehicle_project).labels() == [
            "b(Project)", "c(Project)", "b(Vehicle)", "c(Vehicle)",
            "b(AssignedTo(Vehicle,Project))", "p(AssignedTo(Vehicle,Project))"]

    def test_minimal_entity(self):
        p = partition_model(ERModel((EntityType("Employee", "Emp_No", "Name"),)))
        assert p.units == (RegularEntityBase("Employee", "Emp_No", "Name"),)

    def test_relationship_without_attrs_has_no_p_unit(self, vehicle_project):
        m = replace(vehicle_project, relationships=(replace(ASSIGNED_TO, attrs=()),))
        assert [u.kind for u in partition_model(m).units][-1] == "binary_relationship_base"

    def test_invalid_model_rejected(self):
        with pytest.raises(InvalidModelError) as info:
            partition_model(ERModel())
        assert info.value.violations[0].code == "NoEntities"

    @settings(max_examples=300)
    @given(models)
    def test_unit_count_formula(self, m):
        E, R = len(m.entities), len(m.relationships)
        E2 = sum(1 for e in m.entities if e.secondary_attrs)
        R2 = sum(1 for r in m.relationships if r.attrs)
        n = len(partition_model(m).units)
        assert n == E + R + E2 + R2 == brute_force_unit_count(m)

    @given(models)
    def test_deterministic(self, m):
        shuffled = replace(m, entities=m.entities[::-1], relationships=m.relationships[::-1])
        assert partition_model(m).units == partition_model(m).units == partition_model(shuffled).units

    @given(models)
    def test_unit_invariants(self, m):
        for u in partition_model(m).units:
            if isinstance(u, RegularEntityBase):
                assert len(unit_constructs(u)) == 3
            if isinstance(u, (SecondarySimpleAttrs, OptionalRelationshipAttrs)):
                assert u.attrs
            if isinstance(u, BinaryRelationshipBase):
                assert u.left != u.right

    @given(models)
    def test_units_rebuild_the_model(self, m):
        assert model_from_units(partition_model(m).units) == canonicalize(m)


class TestVerifyPartition:
    @settings(max_examples=300)
    @given(models)
    def test_generated_partitions_verify(self, m):
        assert verify_partition(partition_model(m)) == []

    def test_duplicated_c_unit(self, employee_model):
        p = partition_model(employee_model)
        dup = Partition(p.units + (p.units[1],), p.source_model)
        assert {v.code for v in verify_partition(dup)} == {"OverlappingUnits"}
        assert any("Address" in v.element for v in verify_partition(dup))

    def test_missing_p_unit(self, vehicle_project):
        p = partition_model(vehicle_project)
        short = Partition(p.units[:-1], p.source_model)
        violations = verify_partition(short)
        assert {v.code for v in violations} == {"UncoveredConstruct"}
        assert sorted(v.element for v in violations) == [
            "rel_attr/AssignedTo/1/AssignedDate", "rel_attr/AssignedTo/2/Period"]

    def test_swapped_key_and_mandatory(self, employee_model):
        p = partition_model(employee_model)
        swapped = Partition((RegularEntityBase("Employee", "Name", "Emp_No"),) + p.units[1:], p.source_model)
        assert {v.code for v in verify_partition(swapped)} == {"UncoveredConstruct", "ForeignConstruct"}

    def test_tampered_min_max(self, vehicle_project):
        p = partition_model(vehicle_project)
        units = [replace(u, left_constraint=MinMaxPair(0, 4)) if isinstance(u, BinaryRelationshipBase) else u
                 for u in p.units]
        codes = {v.code for v in verify_partition(Partition(units, p.source_model))}
        assert codes == {"UncoveredConstruct", "ForeignConstruct"}

    def test_empty_attribute_unit(self, employee_model):
        p = partition_model(employee_model)
        units = p.units + (SecondarySimpleAttrs("Employee", ()),)
        assert [v.code for v in verify_partition(Partition(units, p.source_model))] == ["EmptyUnit"]


class TestLabels:
    def test_entity(self):
        assert unit_label(RegularEntityBase("Employee", "Emp_No", "Name")) == "b(Employee)"
        assert unit_label(SecondarySimpleAttrs("Vehicle", ("Color",))) == "c(Vehicle)"

    def test_relationship(self):
        b = BinaryRelationshipBase("AssignedTo", "Vehicle", "Project", MinMaxPair(0, 3), MinMaxPair(1, 1))
        p = OptionalRelationshipAttrs("AssignedTo", "Vehicle", "Project", ("AssignedDate",))
        assert unit_label(b) == "b(AssignedTo(Vehicle,Project))"
        assert unit_label(p) == "p(AssignedTo(Vehicle,Project))"

    def test_rejects_other_objects(self):
        with pytest.raises(TypeError):
            unit_label("b(x)")
