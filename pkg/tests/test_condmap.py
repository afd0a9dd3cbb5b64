"""
Tests for conditional functions, relations, orders and finiteness.

Run with: pytest tests/test_condmap.py -v
"""

import os
import sys

import pytest
from hypothesis import given, strategies as st

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from condbox.base import CarrierMismatch, NoBound, NotTotal, OrderInvalid
from condbox.boolalg import Algebra, is_partition
from condbox.condmap import (
    compare_total,
    compose,
    cond_card,
    cond_finite_bijection,
    cond_inf,
    cond_max,
    cond_sup,
    constant_function,
    embedding,
    finite_intersection,
    finite_union,
    family_union_pointwise,
    function_from_json,
    generated_order,
    generated_relation,
    graph,
    identity,
    image,
    inverse,
    is_bijective,
    is_equivalence,
    is_injective,
    make_family,
    make_function,
    make_order,
    make_relation,
    preimage,
    primal_is_total,
    restrict_function,
    shift_bijection,
    choice,
)
from condbox.condnum import CondNat
from condbox.condset import (
    CondSet,
    cond_complement,
    cond_union,
    elements,
    full,
    make_element,
    make_subset,
    powerset,
    subset_leq,
)

A = Algebra(("p", "q"))
X = CondSet(A, ((1, 2, 3), (1, 2)), "X")
Y = CondSet(A, (("a", "b"), ("a", "b", "c")), "Y")
F = make_function(X, Y, {"p": {1: "a", 2: "b", 3: "a"}, "q": {1: "c", 2: "c"}}, "f")

codomain_subsets = st.sampled_from(powerset(Y))
domain_subsets = st.sampled_from(powerset(X))


class TestFunctions:
    """Tests for building and applying conditional functions."""

    def test_apply_is_atomwise(self):
        x = make_element(X, {"p": 2, "q": 1})
        assert F(x).as_dict() == {"p": "b", "q": "c"}

    def test_apply_keeps_support(self):
        x = make_element(X, {"p": 3})
        assert F(x).support == A.atom("p")

    def test_missing_atom_or_value(self):
        with pytest.raises(CarrierMismatch):
            make_function(X, Y, {"p": {1: "a", 2: "a", 3: "a"}})
        with pytest.raises(CarrierMismatch):
            make_function(X, Y, {"p": {1: "a"}, "q": {1: "a", 2: "a"}})
        with pytest.raises(CarrierMismatch):
            make_function(X, Y, {"p": lambda u: "z", "q": lambda u: "a"})

    def test_json_round_trip(self):
        assert function_from_json(X, Y, F.to_json()) == F

    def test_compose_applies_inner_first(self):
        g = make_function(Y, Y, {"p": {"a": "b", "b": "a"}, "q": {"a": "a", "b": "a", "c": "b"}})
        h = compose(g, F)
        x = make_element(X, {"p": 1, "q": 2})
        assert h(x) == g(F(x))

    def test_compose_checks_carriers(self):
        with pytest.raises(CarrierMismatch):
            compose(F, F)

    def test_constant_function(self):
        y = make_element(Y, {"p": "b", "q": "a"})
        c = constant_function(X, y)
        assert all(c(x) == y for x in elements(X))

    def test_injective_and_inverse(self):
        assert not is_injective(F)
        swap = make_function(X, X, {"p": {1: 2, 2: 3, 3: 1}, "q": {1: 2, 2: 1}})
        assert is_bijective(swap)
        assert compose(inverse(swap), swap) == identity(X)
        with pytest.raises(CarrierMismatch):
            inverse(F)

    def test_restriction_to_subset(self):
        Z = make_subset(X, {"p": [2, 3], "q": [1]})
        fz = restrict_function(F, Z)
        assert fz.domain.carrier("p") == (2, 3)
        assert embedding(Z).codomain == X


class TestImages:
    """Image and preimage laws on every subset of a small space."""

    @given(codomain_subsets, codomain_subsets)
    def test_preimage_commutes_with_union(self, V, W):
        assert preimage(F, cond_union([V, W])) == cond_union([preimage(F, V), preimage(F, W)])

    @given(codomain_subsets)
    def test_preimage_of_complement_on_full_support(self, V):
        pre = preimage(F, V)
        if pre.lives_on_one and cond_complement(V).lives_on_one:
            comp = preimage(F, cond_complement(V))
            assert cond_union([pre, comp]) == full(X)

    @given(domain_subsets)
    def test_image_then_preimage_contains(self, U):
        assert subset_leq(U, preimage(F, image(F, U)))

    def test_preimage_lives_where_nonempty(self):
        V = make_subset(Y, {"p": ["b"], "q": ["a"]})
        pre = preimage(F, V)
        assert pre.support == A.atom("p")
        assert pre.at("p") == frozenset([2])


class TestRelations:
    """Tests for relations and orders."""

    def test_graph_of_function(self):
        G = graph(F)
        assert G.support.is_one
        assert G.holds("p", 3, "a")

    def test_equivalence_relation(self):
        R = generated_relation(X, X, lambda u, v: u % 2 == v % 2)
        assert is_equivalence(R)
        assert not is_equivalence(generated_relation(X, X, lambda u, v: u <= v))

    def test_order_must_live_on_one(self):
        R = make_relation(X, X, {"p": [(1, 1), (2, 2), (3, 3)]})
        with pytest.raises(OrderInvalid):
            make_order(R)

    def test_non_antisymmetric_rejected(self):
        R = generated_relation(X, X, lambda u, v: True)
        with pytest.raises(OrderInvalid):
            make_order(R)

    def test_total_order_needs_comparability(self):
        R = generated_relation(X, X, lambda u, v: u == v or (u == 1 and v == 2))
        make_order(R)
        with pytest.raises(NotTotal):
            make_order(R, "total")

    def test_compare_total_is_partition(self):
        order = generated_order(X)
        x = make_element(X, {"p": 1, "q": 2})
        y = make_element(X, {"p": 3, "q": 2})
        P = compare_total(order, x, y)
        assert is_partition(P)
        assert P.parts == (A.atom("p"), A.zero, A.atom("q"))

    def test_primal_order_not_total_with_two_wide_atoms(self):
        assert not primal_is_total(generated_order(X))
        Z = CondSet(A, ((1, 2, 3), (1,)))
        assert primal_is_total(generated_order(Z))


class TestBounds:
    """Tests for conditional suprema, infima and extrema."""

    def setup_method(self):
        self.order = generated_order(X)

    def test_sup_and_inf(self):
        S = make_subset(X, {"p": [1, 2], "q": [1, 2]})
        assert cond_sup(self.order, S).as_dict() == {"p": 2, "q": 2}
        assert cond_inf(self.order, S).as_dict() == {"p": 1, "q": 1}
        assert cond_max(self.order, S).as_dict() == {"p": 2, "q": 2}

    def test_max_missing_in_partial_order(self):
        R = generated_relation(X, X, lambda u, v: u == v or (u == 1 and v in (2, 3)))
        order = make_order(R)
        S = make_subset(X, {"p": [2, 3], "q": [1]})
        with pytest.raises(NoBound):
            cond_sup(order, S)


class TestFiniteness:
    """Tests for conditional cardinality and finite families."""

    def test_card_and_bijection(self):
        S = make_subset(X, {"p": [1, 3], "q": [1, 2]})
        n = cond_card(S)
        assert n.value("p") == 2 and n.value("q") == 2
        assert is_bijective(cond_finite_bijection(S))

    def test_shift_bijection(self):
        m = CondNat(A, (("p", 2), ("q", 3)))
        n = CondNat(A, (("p", 4), ("q", 3)))
        s = shift_bijection(m, n)
        assert is_bijective(s)
        assert s.at("p") == {1: 2, 2: 3, 3: 4}
        assert s.at("q") == {1: 3}

    def test_finite_union_agrees_with_pointwise(self):
        index = CondSet(A, ((1, 2, 3), (1, 2, 3)), "I")
        family = make_family(index, X, {
            "p": {1: [1], 2: [2], 3: [3]},
            "q": {1: [1], 2: [2], 3: [1, 2]},
        })
        n = CondNat(A, (("p", 2), ("q", 3)))
        assert finite_union(family, n) == family_union_pointwise(family, n)
        assert finite_intersection(family, n).support.is_zero
        picked = choice(family)(make_element(index, {"p": 3, "q": 3}))
        assert picked.as_dict() == {"p": 3, "q": 1}
