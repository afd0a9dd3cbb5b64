"""
Tests for conditional filters and ultrafilters.

Run with: pytest tests/test_condfilter.py -v
"""

import os
import sys

import pytest

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from condbox.base import DegenerateSystem, EmptyInput, InvalidBase, InvalidValue
from condbox.boolalg import Algebra
from condbox.condfilter import (
    CondFilterBase,
    brute_force_filter,
    filter_leq,
    generate_filter,
    is_filter_base_brute,
    is_ultrafilter,
    localize,
    min_condition,
    primal_family_is_base,
    principal_filter,
    pushforward,
    restrict_filter,
    trivial_filter,
    ultrafilter_clauses,
    ultrafilter_extend,
    ultrafilters,
)
from condbox.condmap import make_function
from condbox.condset import CondSet, cond_complement, elements, full, make_element, make_subset

A = Algebra(("p", "q"))
X = CondSet(A, ((1, 2, 3), (1, 2)), "X")


class TestFilterBase:
    """Tests for filter base validation and generation."""

    def setup_method(self):
        self.Y1 = make_subset(X, {"p": [1, 2], "q": [1, 2]})
        self.Y2 = make_subset(X, {"p": [2, 3], "q": [1]})

    def test_chain_of_traces_is_a_base(self):
        B = CondFilterBase(X, (self.Y1, make_subset(X, {"p": [2], "q": [1]})))
        assert B.is_valid()
        assert is_filter_base_brute(B)

    def test_traces_without_common_member_rejected(self):
        B = CondFilterBase(X, (self.Y1, self.Y2))
        assert not B.is_valid()
        assert not is_filter_base_brute(B)
        with pytest.raises(InvalidBase):
            generate_filter(B)

    def test_generator_must_live_on_one(self):
        B = CondFilterBase(X, (make_subset(X, {"p": [1]}),))
        with pytest.raises(InvalidBase):
            B.validate()

    def test_empty_generator_list(self):
        assert not CondFilterBase(X, ()).is_valid()

    def test_generated_filter_matches_brute_force(self):
        B = CondFilterBase(X, (self.Y1, make_subset(X, {"p": [2], "q": [1, 2]})))
        F = generate_filter(B)
        assert F.members() == brute_force_filter(B)
        assert F.kernel == make_subset(X, {"p": [2], "q": [1, 2]})

    def test_primal_family(self):
        B = CondFilterBase(X, (self.Y1,))
        assert primal_family_is_base(B)


class TestFilters:
    """Tests for principal, trivial and restricted filters."""

    def test_principal_filter_is_ultra(self):
        x = make_element(X, {"p": 3, "q": 1})
        U = principal_filter(x)
        assert U.is_ultra
        assert all(ultrafilter_clauses(U).values())

    def test_membership_stitched_across_atoms(self):
        x = make_element(X, {"p": 3, "q": 1})
        U = principal_filter(x)
        Y = make_subset(X, {"p": [3], "q": [2]})
        Yc = cond_complement(Y)
        assert Y.lives_on_one and Yc.lives_on_one
        assert Y not in U and Yc not in U
        assert make_subset(X, {"p": [3], "q": [1]}) in U
        assert is_ultrafilter(U, "ii")
        assert is_ultrafilter(U, "iii")

    def test_trivial_filter_is_not_ultra(self):
        T = trivial_filter(X)
        assert not T.is_ultra
        assert not any(ultrafilter_clauses(T).values())

    def test_unknown_characterization(self):
        with pytest.raises(InvalidValue):
            is_ultrafilter(trivial_filter(X), "v")

    def test_principal_needs_life_on_one(self):
        with pytest.raises(InvalidValue):
            principal_filter(make_element(X, {"p": 1}))

    def test_extension_is_finer(self):
        T = trivial_filter(X)
        U = ultrafilter_extend(T)
        assert filter_leq(T, U)
        assert U.is_ultra
        assert U.kernel == make_subset(X, {"p": [1], "q": [1]})

    def test_ultrafilters_are_principal(self):
        Us = ultrafilters(X)
        assert len(Us) == len(list(elements(X)))
        assert all(U.is_ultra for U in Us)

    def test_membership(self):
        F = trivial_filter(X)
        assert full(X) in F
        assert make_subset(X, {"p": [1], "q": [1]}) not in F

    def test_restrict_filter(self):
        x = make_element(X, {"p": 2, "q": 1})
        R = restrict_filter(principal_filter(x), A.atom("q"))
        assert R.space.algebra.atoms == ("q",)
        assert R.kernel.at("q") == frozenset([1])


class TestSystems:
    """Tests for localizing a system of subsets."""

    def test_min_condition(self):
        Y = make_subset(X, {"p": [1], "q": [2]})
        Z = make_subset(X, {"q": [1, 2]})
        assert min_condition([Y, Z]) == A.atom("q")
        loc = localize([Y, Z])
        assert loc.kernel.at("q") == frozenset([2])

    def test_degenerate_system(self):
        with pytest.raises(DegenerateSystem):
            min_condition([make_subset(X, {"p": [1]}), make_subset(X, {"q": [1]})])
        with pytest.raises(EmptyInput):
            min_condition([])


class TestPushforward:
    """Tests for image filters."""

    def test_image_of_principal_filter(self):
        Y = CondSet(A, (("a", "b"), ("a",)), "Y")
        f = make_function(X, Y, {"p": {1: "a", 2: "b", 3: "b"}, "q": {1: "a", 2: "a"}})
        x = make_element(X, {"p": 2, "q": 2})
        G = generate_filter(pushforward(f, principal_filter(x)))
        assert G.kernel == make_subset(Y, {"p": ["b"], "q": ["a"]})

    def test_image_of_ultrafilter_is_ultra(self):
        Y = CondSet(A, (("a", "b"), ("a", "b")), "Y")
        f = make_function(X, Y, {"p": {1: "a", 2: "b", 3: "a"}, "q": {1: "b", 2: "a"}})
        U = ultrafilter_extend(trivial_filter(X))
        G = generate_filter(pushforward(f, U))
        assert G.is_ultra
        assert all(ultrafilter_clauses(G).values())
        assert G.kernel == make_subset(Y, {"p": ["a"], "q": ["b"]})
