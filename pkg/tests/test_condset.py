"""
Tests for conditional sets, amalgamation and the conditional power set.

Run with: pytest tests/test_condset.py -v
"""

import os
import sys

import pytest
from hypothesis import given, settings, strategies as st

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from condbox.base import (
    EmptyFamily,
    EmptyGround,
    EmptyInput,
    NotMaterialized,
    PickKindMismatch,
    PickSupportMismatch,
    SupportMismatch,
)
from condbox.boolalg import Algebra, Partition
from condbox.condset import (
    AmalgamationExpr,
    CondSet,
    Lit,
    alg_as_condset,
    amalgamate,
    complement_formula,
    cond_complement,
    cond_intersection,
    cond_union,
    condition_as_element,
    contains,
    element_as_condition,
    elements,
    empty,
    from_atoms,
    full,
    generate,
    intersection_formula,
    is_stable,
    make_element,
    make_subset,
    pair,
    powerset,
    powerset_atoms,
    primal,
    product,
    restrict,
    restrict_set,
    singleton,
    stable_hull,
    subset_from_json,
    subset_leq,
    subsets,
    to_atoms,
    union_formula,
)

A = Algebra(("p", "q"))
X = CondSet(A, ((1, 2, 3), (1, 2)), "X")
ALL = powerset(X)

subset_strategy = st.sampled_from(ALL)


def _value(expr):
    if expr.partition.base.is_zero:
        return empty(X)
    return to_atoms(expr)


class TestConstruction:
    """Tests for building conditional sets, elements and subsets."""

    def test_generate_uses_ground_everywhere(self):
        G = generate([0, 1, 1], A)
        assert G.carrier("p") == (0, 1)
        assert G.carrier("q") == (0, 1)

    def test_generate_empty_ground(self):
        with pytest.raises(EmptyGround):
            generate([], A)

    def test_empty_carrier_rejected(self):
        with pytest.raises(EmptyGround):
            CondSet(A, ((1,), ()))

    def test_element_support_is_its_atoms(self):
        x = make_element(X, {"q": 2})
        assert x.support == A.atom("q")
        assert not x.lives_on_one

    def test_subset_json_round_trip(self):
        Y = make_subset(X, {"p": [1, 3]})
        assert subset_from_json(X, Y.to_json()) == Y

    def test_empty_subset(self):
        assert empty(X).is_empty
        assert empty(X).support.is_zero

    def test_algebra_as_set(self):
        S = alg_as_condset(A)
        b = A.atom("q")
        assert element_as_condition(condition_as_element(S, b)) == b

    def test_product_and_pair(self):
        P = product([X, X])
        assert len(P.carrier("p")) == 9
        x = make_element(X, {"p": 1, "q": 2})
        y = make_element(X, {"p": 3, "q": 1})
        assert pair(P, [x, y]).value("p") == (1, 3)
        with pytest.raises(SupportMismatch):
            pair(P, [x, make_element(X, {"p": 1})])

    def test_product_of_empty_family(self):
        with pytest.raises(EmptyFamily):
            product([])

    def test_restrict_set_uses_relative_algebra(self):
        R = restrict_set(X, A.atom("q"))
        assert R.algebra.atoms == ("q",)
        assert R.carrier("q") == (1, 2)


class TestAmalgamation:
    """Tests for gluing picks along partitions."""

    def setup_method(self):
        self.p = A.atom("p")
        self.q = A.atom("q")

    def test_literal_picks(self):
        expr = AmalgamationExpr(X, Partition(A.one, (self.p, self.q)), (Lit(3), Lit(1)))
        x = amalgamate(expr)
        assert x.as_dict() == {"p": 3, "q": 1}
        assert x.lives_on_one

    def test_zero_part_takes_none(self):
        expr = AmalgamationExpr(X, Partition(A.one, (A.one, A.zero)), (Lit(1), None))
        assert amalgamate(expr).lives_on_one

    def test_missing_pick_on_nonzero_part(self):
        expr = AmalgamationExpr(X, Partition(A.one, (self.p, self.q)), (Lit(1), None))
        with pytest.raises(PickSupportMismatch):
            amalgamate(expr)

    def test_mixed_kinds_rejected(self):
        expr = AmalgamationExpr(X, Partition(A.one, (self.p, self.q)), (Lit(1), Lit(frozenset([1]), subset=True)))
        with pytest.raises(PickKindMismatch):
            amalgamate(expr)

    def test_pick_on_wrong_support(self):
        x = make_element(X, {"q": 1})
        expr = AmalgamationExpr(X, Partition(A.one, (self.p, self.q)), (x, Lit(1)))
        with pytest.raises(PickSupportMismatch):
            amalgamate(expr)

    def test_normal_form_groups_equal_values(self):
        x = make_element(X, {"p": 2, "q": 2})
        expr = from_atoms(x)
        assert expr.partition.parts == (A.one,)
        assert to_atoms(expr) == x

    def test_restrict_keeps_meet_of_supports(self):
        x = make_element(X, {"p": 2, "q": 1})
        assert restrict(x, self.q).as_dict() == {"q": 1}
        assert restrict(restrict(x, self.p), self.q).support.is_zero


class TestPowerSetOperations:
    """Pointwise operations against the formula side and lattice laws."""

    @given(subset_strategy, subset_strategy)
    @settings(max_examples=100)
    def test_union_and_intersection_match_formulas(self, Y, Z):
        union = cond_union([Y, Z])
        inter = cond_intersection([Y, Z])
        assert _value(union_formula(X, [from_atoms(Y), from_atoms(Z)])) == union
        assert _value(intersection_formula(X, [from_atoms(Y), from_atoms(Z)])) == inter

    @given(subset_strategy)
    def test_complement_matches_formula(self, Y):
        assert _value(complement_formula(from_atoms(Y))) == cond_complement(Y)

    @given(subset_strategy)
    def test_complement_involution_on_full_support(self, Y):
        if Y.lives_on_one and all(Y.at(a) != X.carrier_set(a) for a in A.atoms):
            assert cond_complement(cond_complement(Y)) == Y

    @given(subset_strategy, subset_strategy)
    def test_order_matches_union(self, Y, Z):
        assert subset_leq(Y, Z) == (cond_union([Y, Z]) == Z)

    def test_complement_of_full_and_empty(self):
        assert cond_complement(full(X)).is_empty
        assert cond_complement(empty(X)) == full(X)

    def test_empty_family_needs_parent(self):
        with pytest.raises(EmptyFamily):
            cond_union([])
        assert cond_union([], X).is_empty
        assert cond_intersection([], X) == full(X)

    def test_contains_requires_life_on_one(self):
        x = make_element(X, {"p": 1, "q": 1})
        assert contains(full(X), x)
        assert not contains(full(X), make_element(X, {"p": 1}))

    def test_primal_of_subset_on_one(self):
        Y = make_subset(X, {"p": [1, 2], "q": [2]})
        assert len(primal(Y)) == 2
        assert primal(make_subset(X, {"p": [1]})) == []


class TestEnumeration:
    """Tests for enumerating elements and subsets."""

    def test_counts(self):
        assert len(list(elements(X))) == 6
        assert len(subsets(X)) == 7 * 3
        assert len(ALL) == 8 * 4
        assert ALL[0].is_empty
        assert len(powerset_atoms(X)) == 5

    def test_materialization_bound(self):
        big = CondSet(Algebra(("a", "b", "c", "d")), tuple((1, 2) for _ in range(4)))
        with pytest.raises(NotMaterialized):
            subsets(big)

    def test_stable_hull_is_stable(self):
        Y = [make_element(X, {"p": 1, "q": 1}), make_element(X, {"p": 2, "q": 2})]
        hull = stable_hull(A.one, Y)
        assert len(list(elements(hull))) == 4
        assert not is_stable(A.one, Y)
        assert is_stable(A.one, elements(hull))

    def test_stable_hull_needs_input(self):
        with pytest.raises(EmptyInput):
            stable_hull(A.one, [])

    def test_singleton_of_element(self):
        x = make_element(X, {"p": 3})
        assert singleton(x).at("p") == frozenset([3])
        assert singleton(x).at("q") == frozenset()
