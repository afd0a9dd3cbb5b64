"""
Tests for conditional numbers, vectors, nets, Cauchy sequences and metric spaces.

Run with: pytest tests/test_condnum.py -v
"""

import os
import random
import sys
from fractions import Fraction
from unittest import mock

import pytest
from hypothesis import given, strategies as st

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from condbox.base import DimMismatch, EpsNotPositive, InvalidValue, MalformedDescriptor, MetricAxiomViolation, NotInvertible
from condbox.boolalg import Algebra, is_partition
from condbox.condnum import (
    CauchySeqQ,
    CondInt,
    CondNat,
    CondRat,
    CondReal,
    FiniteMetricSpace,
    RationalBox,
    SeqDescriptor,
    add,
    amalgamate_numbers,
    archimedean_bound,
    ball_contains,
    cabs,
    cauchy_add,
    cauchy_check,
    cauchy_leq,
    cauchy_limit,
    cauchy_modulus,
    cauchy_mul,
    compare,
    cond_sup,
    constant,
    convergent_subsequence,
    distance_decimal,
    distance_sq,
    eps_net,
    eventually_constant,
    exact_sqrt,
    from_mapping,
    geometric,
    heine_borel_finite,
    inv,
    is_cauchy_sequence,
    leq,
    metric_compare,
    metric_triangle,
    mul,
    neg,
    sequence_limit,
    sqrt_bounds,
    sub,
    unit_vector,
    vadd,
    vector,
)
from condbox.condset import CondSet

A = Algebra(("p", "q"))

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
reals = st.tuples(rationals, rationals).map(lambda v: CondReal(A, (("p", v[0]), ("q", v[1]))))


class TestTower:
    """Tests for the N ⊂ Z ⊂ Q ⊂ R tower."""

    def test_nat_rejects_zero_and_fractions(self):
        with pytest.raises(InvalidValue):
            CondNat(A, (("p", 0), ("q", 1)))
        with pytest.raises(InvalidValue):
            CondInt(A, (("p", Fraction(1, 2)),))

    def test_result_ranks(self):
        m = CondNat(A, (("p", 2), ("q", 3)))
        n = CondNat(A, (("p", 5), ("q", 1)))
        assert isinstance(add(m, n), CondNat)
        assert isinstance(sub(m, n), CondInt)
        assert isinstance(neg(m), CondInt)
        assert isinstance(inv(m), CondRat)
        assert isinstance(add(m, constant(A, "1/2")), CondReal)

    def test_from_json_parses_strings(self):
        x = CondReal.from_json(A, {"p": "3/4", "q": "-2"})
        assert x.value("p") == Fraction(3, 4)
        assert x.to_json() == {"p": "3/4", "q": "-2"}

    def test_normal_form_groups_values(self):
        x = from_mapping(A, {"p": 1, "q": 1})
        assert x.normal_form() == [(A.one, Fraction(1))]

    def test_amalgamate_numbers(self):
        x = constant(A, 1)
        y = constant(A, 2)
        z = amalgamate_numbers([(A.atom("p"), x), (A.atom("q"), y)])
        assert z.as_dict() == {"p": 1, "q": 2}


class TestField:
    """Ordered field laws on conditional reals."""

    @given(reals, reals, reals)
    def test_field_laws(self, x, y, z):
        assert add(x, y) == add(y, x)
        assert mul(x, add(y, z)) == add(mul(x, y), mul(x, z))
        assert add(x, neg(x)) == constant(A, 0)

    @given(reals)
    def test_inverse_or_zero_condition(self, x):
        zeros = A.condition(a for a in A.atoms if x.value(a) == 0)
        if zeros.is_zero:
            assert mul(x, inv(x)) == constant(A, 1)
        else:
            with pytest.raises(NotInvertible) as exc:
                inv(x)
            assert exc.value.condition == zeros

    @given(reals, reals)
    def test_compare_is_trichotomy(self, x, y):
        P = compare(x, y)
        assert is_partition(P)
        assert P.base.is_one
        assert leq(x, y) == all(x.value(a) <= y.value(a) for a in A.atoms)

    @given(reals, reals)
    def test_absolute_value_triangle(self, x, y):
        assert leq(cabs(add(x, y)), add(cabs(x), cabs(y)))

    def test_sup_picks_pointwise_max(self):
        x = from_mapping(A, {"p": 1, "q": 5})
        y = from_mapping(A, {"p": 3, "q": -1})
        assert cond_sup([x, y]).as_dict() == {"p": 3, "q": 5}

    def test_archimedean_bound(self):
        x = from_mapping(A, {"p": "7/2", "q": -4})
        n = archimedean_bound(x)
        assert n.as_dict() == {"p": 4, "q": 1}

    def test_ball_needs_positive_radius(self):
        x = constant(A, 0)
        assert ball_contains(x, constant(A, 1), from_mapping(A, {"p": "1/2", "q": "-1/2"}))
        with pytest.raises(EpsNotPositive):
            ball_contains(x, from_mapping(A, {"p": 1, "q": 0}), x)


class TestVectors:
    """Tests for conditional vectors and the l2 metric."""

    def setup_method(self):
        self.x = vector(A, {"p": [0, 0], "q": [1]})
        self.y = vector(A, {"p": [3, 4], "q": [-1]})

    def test_distance_squared(self):
        assert distance_sq(self.x, self.y).as_dict() == {"p": 25, "q": 4}

    def test_metric_compare_decides_on_squares(self):
        P = metric_compare(self.x, self.y, constant(A, 5))
        assert P[2] == A.atom("p")
        assert P[0] == A.atom("q")

    def test_triangle(self):
        z = vector(A, {"p": [1, 1], "q": [0]})
        assert metric_triangle(self.x, z, self.y)

    def test_dimension_mismatch(self):
        with pytest.raises(DimMismatch):
            vadd(self.x, vector(A, {"p": [1], "q": [1]}))

    def test_unit_vector(self):
        dim = CondNat(A, (("p", 2), ("q", 1)))
        k = CondNat(A, (("p", 2), ("q", 1)))
        e = unit_vector(dim, k)
        assert e.at("p") == (0, 1)
        with pytest.raises(DimMismatch):
            unit_vector(dim, CondNat(A, (("p", 1), ("q", 2))))

    def test_decimal_distance(self):
        x = vector(A, {"p": [0], "q": [0]})
        y = vector(A, {"p": [1], "q": [2]})
        d = distance_decimal(x, vector(A, {"p": [1], "q": [1]}), 4)
        assert d["p"] == "1.0000"
        assert distance_decimal(x, y, 2)["q"] == "2.00"

    def test_sqrt_helpers(self):
        lo, hi = sqrt_bounds(Fraction(2), 6)
        assert lo * lo <= 2 <= hi * hi
        assert hi - lo <= Fraction(1, 10 ** 6)
        assert exact_sqrt(Fraction(9, 4)) == Fraction(3, 2)
        assert exact_sqrt(Fraction(2)) is None


class TestEpsNet:
    """Tests for grid nets of rational boxes."""

    def test_net_covers_box_corners(self):
        box = RationalBox(A, (("p", ((0, 2), (0, 2))), ("q", ((1, 1),))))
        eps = from_mapping(A, {"p": "1/2", "q": 1})
        net = eps_net(box, eps)
        corners = [
            vector(A, {"p": [a, b], "q": [1]}) for a in (0, 2) for b in (0, 2)
        ]
        assert all(net.covers(c) for c in corners)
        assert net.count.value("q") == 1
        assert net.count.value("p") == len(net.at("p"))

    def test_empty_box_rejected(self):
        with pytest.raises(InvalidValue):
            RationalBox(A, (("p", ((2, 1),)),))


class TestCauchy:
    """Tests for Cauchy sequences over the descriptor class."""

    def setup_method(self):
        self.s = CauchySeqQ(A, (("p", geometric(1, 1, "1/2")), ("q", eventually_constant(3, 4, head=-7))))
        self.t = CauchySeqQ(A, (("p", geometric(2, -1, "-1/3")), ("q", SeqDescriptor(3))))

    def test_terms(self):
        assert self.s.at("p").term(1) == Fraction(3, 2)
        assert self.s.at("q").term(3) == -7
        assert self.s.at("q").term(4) == 3

    def test_ratio_must_be_below_one(self):
        with pytest.raises(MalformedDescriptor):
            geometric(0, 1, 1)

    def test_modulus_holds_on_window(self):
        eps = constant(A, Fraction(1, 100))
        n0 = cauchy_modulus(self.s, eps)
        assert n0.value("q") == 4
        assert cauchy_check(self.s, eps)

    def test_limits_respect_arithmetic(self):
        assert cauchy_limit(cauchy_add(self.s, self.t)) == add(cauchy_limit(self.s), cauchy_limit(self.t))
        assert cauchy_limit(cauchy_mul(self.s, self.t)) == mul(cauchy_limit(self.s), cauchy_limit(self.t))
        assert cauchy_check(cauchy_mul(self.s, self.t))

    def test_order_by_limits(self):
        assert cauchy_leq(self.s, self.t)
        assert not cauchy_leq(self.t, self.s)


class TestMetricSpace:
    """Tests for finite metric spaces and the finite Heine-Borel check."""

    def test_axioms_validated(self):
        X = CondSet(A, ((1, 2), (1,)))
        with pytest.raises(MetricAxiomViolation):
            FiniteMetricSpace(X, (
                ("p", (((1, 1), 0), ((1, 2), 1), ((2, 1), 2), ((2, 2), 0))),
                ("q", (((1, 1), 0),)),
            ))

    def test_from_vectors_needs_rational_distances(self):
        X = CondSet(A, (((0, 0), (3, 4)), ((0, 0),)))
        space = FiniteMetricSpace.from_vectors(X)
        assert space.d("p", (0, 0), (3, 4)) == 5
        with pytest.raises(MetricAxiomViolation):
            FiniteMetricSpace.from_vectors(CondSet(A, (((0, 0), (1, 1)), ((0, 0),))))

    def test_heine_borel_clauses_agree(self):
        X = CondSet(A, (((0,), (1,), (3,)), ((0,), (2,))))
        report = heine_borel_finite(FiniteMetricSpace.from_vectors(X))
        assert report.agree
        assert report.cover_compact
        assert report.to_dict()["agree"] is True

    def test_heine_borel_counts_sequences(self):
        X = CondSet(A, (((0,), (1,), (3,)), ((0,), (2,))))
        report = heine_borel_finite(FiniteMetricSpace.from_vectors(X), random.Random(4), sequences=10)
        assert report.sequences == 10
        assert report.cauchy_sequences >= 5
        assert report.complete and report.totally_bounded and report.sequentially_compact

    def test_cauchy_sequences_and_limits(self):
        space = FiniteMetricSpace.from_vectors(CondSet(A, (((0,), (1,), (3,)), ((0,), (2,)))))
        steady = {"p": (((3,),), ((1,),)), "q": ((), ((2,),))}
        wobbly = {"p": ((), ((0,), (1,))), "q": ((), ((2,),))}
        assert is_cauchy_sequence(space, steady)
        assert sequence_limit(space, steady) == {"p": (1,), "q": (2,)}
        assert not is_cauchy_sequence(space, wobbly)
        assert sequence_limit(space, wobbly) is None

    def test_subsequence_by_shrinking_balls(self):
        space = FiniteMetricSpace.from_vectors(CondSet(A, (((0,), (1,), (3,)), ((0,), (2,)))))
        seq = {"p": (((1,),), ((0,), (3,), (0,))), "q": ((), ((2,), (0,)))}
        picked = convergent_subsequence(space, seq)
        assert picked["p"] == ((0,), (1, 3))
        assert picked["q"] == ((0,), (1,))

    def test_heine_borel_detects_a_bad_net(self):
        space = FiniteMetricSpace.from_vectors(CondSet(A, (((0,), (1,), (3,)), ((0,), (2,)))))

        def one_center(self, eps):
            return {a: self.space.carrier(a)[:1] for a in self.space.algebra.atoms}

        with mock.patch.object(FiniteMetricSpace, "greedy_net", one_center):
            report = heine_borel_finite(space)
        assert not report.totally_bounded
        assert not report.agree
