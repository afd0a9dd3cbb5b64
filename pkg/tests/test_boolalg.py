"""
Tests for finite atomic Boolean algebras and partitions.

Run with: pytest tests/test_boolalg.py -v
"""

import os
import sys
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from condbox.base import AlgebraMismatch, DifferentBase, EmptyFamily, InvalidValue, PartitionInvalid
from condbox.boolalg import (
    Algebra,
    Partition,
    disjointify,
    group_atoms,
    is_partition,
    join_all,
    meet_all,
    refine,
    relative_algebra,
    trichotomy,
)

ATOMS = ("p", "q", "r")
A = Algebra(ATOMS)

conditions = st.sets(st.sampled_from(ATOMS)).map(A.condition)


class TestAlgebra:
    """Tests for Algebra construction and enumeration."""

    def test_one_and_zero(self):
        assert A.one.is_one
        assert A.zero.is_zero
        assert len(A.one) == 3

    def test_rejects_empty_and_duplicate_atoms(self):
        with pytest.raises(InvalidValue):
            Algebra(())
        with pytest.raises(InvalidValue):
            Algebra(("p", "p"))

    def test_rejects_unknown_atom_in_condition(self):
        with pytest.raises(InvalidValue):
            A.condition(["s"])

    def test_conditions_enumerates_power_set_by_size(self):
        all_conditions = list(A.conditions())
        assert len(all_conditions) == 8
        assert all_conditions[0].is_zero
        assert all_conditions[-1].is_one
        sizes = [len(c) for c in all_conditions]
        assert sizes == sorted(sizes)

    def test_weights_parse_and_validate(self):
        W = Algebra(("p", "q"), (("p", "1/3"), ("q", 2)))
        assert W.weight("p") == Fraction(1, 3)
        assert W.weight("q") == 2
        with pytest.raises(InvalidValue):
            Algebra(("p",), (("p", 0),))
        with pytest.raises(InvalidValue):
            Algebra(("p",), (("q", 1),))

    def test_json_round_trip_keeps_weights(self):
        W = Algebra(("p", "q"), (("p", "1/2"),))
        assert Algebra.from_json(W.to_json()) == W

    def test_from_json_requires_atoms(self):
        with pytest.raises(InvalidValue):
            Algebra.from_json({"weights": {}})


class TestLattice:
    """Boolean algebra laws on the eight conditions of a three-atom algebra."""

    @given(conditions, conditions)
    def test_de_morgan(self, a, b):
        assert ~(a & b) == (~a | ~b)
        assert ~(a | b) == (~a & ~b)

    @given(conditions, conditions, conditions)
    def test_distributive(self, a, b, c):
        assert a & (b | c) == (a & b) | (a & c)
        assert a | (b & c) == (a | b) & (a | c)

    @given(conditions)
    def test_complement(self, a):
        assert (a & ~a).is_zero
        assert (a | ~a).is_one
        assert ~~a == a

    @given(conditions, conditions)
    def test_order_agrees_with_meet(self, a, b):
        assert (a <= b) == ((a & b) == a)

    def test_mixing_algebras_raises(self):
        other = Algebra(("p", "q"))
        with pytest.raises(AlgebraMismatch):
            A.one & other.one

    def test_join_all_and_meet_all_of_empty_family(self):
        assert join_all(A, []).is_zero
        assert meet_all(A, []).is_one

    def test_atoms_are_listed_in_algebra_order(self):
        assert A.condition(["r", "p"]).atoms() == ["p", "r"]
        assert str(A.condition(["r", "p"])) == "{p,r}"


class TestPartition:
    """Tests for partitions, disjointification and refinement."""

    def setup_method(self):
        self.p = A.atom("p")
        self.q = A.atom("q")
        self.r = A.atom("r")

    def test_valid_partition_with_zero_part(self):
        P = Partition(A.one, (self.p, A.zero, self.q | self.r))
        assert is_partition(P)
        assert len(P.nonzero()) == 2

    def test_overlapping_parts_rejected(self):
        with pytest.raises(PartitionInvalid):
            Partition.checked(A.one, (self.p | self.q, self.q | self.r))

    def test_parts_must_join_to_base(self):
        assert not is_partition(Partition(A.one, (self.p, self.q)))

    def test_disjointify_follows_input_order(self):
        P = disjointify([self.p | self.q, self.q | self.r, self.p])
        assert P.parts == (self.p | self.q, self.r, A.zero)
        assert P.base.is_one
        assert is_partition(P)

    def test_disjointify_empty_family(self):
        with pytest.raises(EmptyFamily):
            disjointify([])

    @given(st.lists(conditions, min_size=1, max_size=5))
    def test_disjointify_always_partitions_the_join(self, family):
        P = disjointify(family)
        assert is_partition(P)
        assert P.base == join_all(A, family)
        assert all(b <= a for a, b in zip(family, P.parts))

    def test_refine_is_p_major(self):
        P = Partition(A.one, (self.p | self.q, self.r))
        Q = Partition(A.one, (self.p, self.q | self.r))
        R = refine(P, Q)
        assert R.parts == (self.p, self.q, A.zero, self.r)
        assert is_partition(R)

    def test_refine_needs_common_base(self):
        P = Partition(self.p, (self.p,))
        Q = Partition(A.one, (A.one,))
        with pytest.raises(DifferentBase):
            refine(P, Q)

    def test_trichotomy_checks_partition(self):
        T = trichotomy(self.p, self.q, self.r)
        assert len(T) == 3
        with pytest.raises(PartitionInvalid):
            trichotomy(self.p, self.p, self.r)


class TestRelativeAlgebra:
    """Tests for relative algebras and atom grouping."""

    def test_relative_algebra_keeps_atoms_and_weights(self):
        W = Algebra(ATOMS, (("p", 1), ("r", 3)))
        R = relative_algebra(W.condition(["p", "q"]))
        assert R.atoms == ("p", "q")
        assert R.weight("p") == 1
        assert R.weight("r") is None

    def test_relative_algebra_of_zero_rejected(self):
        with pytest.raises(InvalidValue):
            relative_algebra(A.zero)

    def test_group_atoms_first_seen_order(self):
        groups = group_atoms(A, {"p": 1, "q": 2, "r": 1})
        assert groups == [(A.condition(["p", "r"]), 1), (A.atom("q"), 2)]

    def test_group_atoms_within(self):
        groups = group_atoms(A, {"p": 1, "q": 2, "r": 1}, within=A.condition(["q", "r"]))
        assert [c for c, _ in groups] == [A.atom("q"), A.atom("r")]
