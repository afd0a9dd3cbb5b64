"""
Tests for conditional linear algebra: polytopes, separation, duality,
extension, polars and norms.

Run with: pytest tests/test_condlin.py -v
"""

import os
import random
import sys
from fractions import Fraction

import pytest

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from condbox.base import (
    BallNotAbsorbing,
    BallNotCircled,
    DimMismatch,
    DominationViolated,
    EmptyGenerators,
    EpsNotPositive,
    InvalidValue,
    NotDisjoint,
)
from condbox.boolalg import Algebra
from condbox.condlin import (
    CondLinFunctional,
    CondMatrix,
    PolyhedralSublinear,
    VPolytope,
    alaoglu_certificate,
    bipolar_check,
    bipolar_hull_contains,
    conv_hull,
    contains,
    duality_coeffs,
    hb_extend,
    hull_contains,
    is_absorbing,
    is_circled,
    is_convex,
    is_sigma_bounded,
    l1_ball,
    linf_ball,
    minkowski_add,
    norm_eval,
    operator_norm,
    polar_contains,
    reconstruct,
    scale,
    separate,
    sigma_bound,
    span_membership,
    union,
    verify_extension,
    verify_separation,
)
from condbox.condnum import CondNat, CondRealVec, constant, from_mapping, vector
from condbox.suites import generators as gen

A = Algebra(("p", "q"))
DIM = CondNat(A, (("p", 2), ("q", 2)))
F = Fraction


def _poly(p_points, q_points, kind="hull"):
    return VPolytope(A, (("p", tuple(p_points)), ("q", tuple(q_points))), kind)


def _functional(p, q):
    return CondLinFunctional(A, (("p", p), ("q", q)))


class TestPolytopes:
    """Tests for V-polytopes and their set operations."""

    def test_generators_share_a_dimension(self):
        with pytest.raises(DimMismatch):
            _poly([(0, 0), (1,)], [(0,)])
        with pytest.raises(InvalidValue):
            _poly([(0, 0)], [(0,)], kind="cube")

    def test_circled_kind_adds_negatives(self):
        Y = _poly([(1, 0)], [(2,)], "circled")
        assert set(Y.effective("p")) == {(1, 0), (-1, 0)}
        assert is_circled(Y)

    def test_conv_hull_drops_inner_points(self):
        Y = _poly([(0, 0), (2, 0), (0, 2), (1, 1)], [(0,), (1,), (3,)], "points")
        H = conv_hull(Y)
        assert set(H.at("p")) == {(0, 0), (2, 0), (0, 2)}
        assert set(H.at("q")) == {(0,), (3,)}

    def test_point_sets_are_not_filled_in(self):
        Y = _poly([(0, 0), (2, 0)], [(0,)], "points")
        mid = vector(A, {"p": [1, 0], "q": [0]})
        assert not contains(Y, mid)
        assert hull_contains(Y, mid)
        assert not is_convex(Y)
        assert is_convex(conv_hull(Y))

    def test_minkowski_and_scale(self):
        Y = _poly([(0, 0), (1, 0)], [(0,)])
        Z = _poly([(0, 1)], [(2,)])
        S = minkowski_add(Y, Z)
        assert set(S.at("p")) == {(0, 1), (1, 1)}
        T = scale(from_mapping(A, {"p": 2, "q": "1/2"}), S)
        assert set(T.at("p")) == {(0, 2), (2, 2)}
        assert T.at("q") == ((1,),)

    def test_union_collects_generators(self):
        U = union([_poly([(0, 0)], [(0,)]), _poly([(1, 1)], [(1,)])])
        assert hull_contains(U, vector(A, {"p": ["1/2", "1/2"], "q": ["1/3"]}))
        with pytest.raises(EmptyGenerators):
            union([])

    def test_absorbing(self):
        assert is_absorbing(linf_ball(DIM))
        assert not is_absorbing(_poly([(1, 0), (0, 1)], [(1,), (-1,)]))


class TestSpanAndDuality:
    """Tests for span membership and the finite duality of functionals."""

    def setup_method(self):
        self.Y = [
            vector(A, {"p": [1, 0], "q": [1, 1]}),
            vector(A, {"p": [0, 1], "q": [2, 2]}),
        ]

    def test_member_of_span(self):
        res = span_membership(self.Y, vector(A, {"p": [2, 3], "q": [3, 3]}))
        assert res.member
        assert [c.value("p") for c in res.coefficients] == [2, 3]
        lam = [c.value("q") for c in res.coefficients]
        assert lam[0] + 2 * lam[1] == 3

    def test_outside_span_names_atom(self):
        res = span_membership(self.Y, vector(A, {"p": [2, 3], "q": [1, 2]}))
        assert not res.member
        assert res.witness == "q"
        assert res.to_json() == {"member": False, "witness": "q"}

    def test_span_of_nothing(self):
        with pytest.raises(EmptyGenerators):
            span_membership([], vector(A, {"p": [1]}))

    def test_representable_functional(self):
        f = _functional((1, 1), (2, 0))
        fs = [_functional((1, 0), (1, 0)), _functional((0, 1), (0, 1))]
        res = duality_coeffs(f, fs)
        assert res.representable
        assert reconstruct(res.coefficients, fs) == f
        assert not res.nonzero

    def test_kernel_inclusion_fails(self):
        f = _functional((1, 1), (1, 0))
        res = duality_coeffs(f, [_functional((1, 0), (1, 0))])
        assert not res.representable
        atom, v = res.witness
        assert atom == "p"
        assert v[0] == 0 and v[1] != 0

    def test_functional_values(self):
        f = _functional((1, -1), (3, 0))
        x = vector(A, {"p": [2, 5], "q": [1, 9]})
        assert f(x).as_dict() == {"p": -3, "q": 3}
        assert CondLinFunctional.from_json(A, f.to_json()) == f


class TestSeparation:
    """Tests for strict separation of disjoint polytopes."""

    def test_disjoint_points_separate(self):
        C1 = _poly([(0, 0)], [(0,)])
        C2 = _poly([(1, 0)], [(1,)])
        sep = separate(C1, C2)
        assert verify_separation(C1, C2, sep)
        assert all(v > 0 for _, v in sep.eps.values)

    def test_non_strict_has_zero_gap(self):
        C1 = _poly([(0, 0), (0, 1)], [(0,)])
        C2 = _poly([(2, 0), (2, 1)], [(5,)])
        sep = separate(C1, C2, strict=False)
        assert all(v == 0 for _, v in sep.eps.values)
        assert verify_separation(C1, C2, sep)

    def test_overlap_reports_condition(self):
        C1 = _poly([(0, 0), (2, 0)], [(0,)])
        with pytest.raises(NotDisjoint) as exc:
            separate(C1, C1)
        assert exc.value.condition == A.one
        C2 = _poly([(3, 0)], [(0,)])
        with pytest.raises(NotDisjoint) as exc:
            separate(C1, C2)
        assert exc.value.condition == A.atom("q")


class TestExtension:
    """Tests for dominated extension of functionals."""

    def setup_method(self):
        # the l1 norm, the support function of the unit square
        square = ((1, 1), (1, -1), (-1, 1), (-1, -1))
        self.k = PolyhedralSublinear(A, (("p", square), ("q", square)))
        self.basis = [vector(A, {"p": [1, 0], "q": [1, 0]})]

    def test_extension_is_dominated(self):
        values = [constant(A, "1/2")]
        fhat = hb_extend(self.basis, values, self.k)
        assert fhat.at("p") == (F(1, 2), 0)
        samples = [vector(A, {"p": [3, -7], "q": ["1/2", 2]})]
        assert verify_extension(fhat, self.basis, values, self.k, samples)

    def test_values_above_k_rejected(self):
        with pytest.raises(DominationViolated):
            hb_extend(self.basis, [constant(A, 2)], self.k)

    def test_basis_and_values_must_pair_up(self):
        with pytest.raises(EmptyGenerators):
            hb_extend(self.basis, [], self.k)


class TestPolars:
    """Tests for polars, the bipolar check and sigma bounds."""

    def setup_method(self):
        self.Y = _poly([(1, 0), (0, 1)], [(1,)])

    def test_polar_membership(self):
        assert polar_contains(self.Y, vector(A, {"p": ["1/2", "-1"], "q": [1]}))
        assert not polar_contains(self.Y, vector(A, {"p": [2, 0], "q": [0]}))
        assert polar_contains(self.Y, vector(A, {"p": [-5, 0], "q": [0]}), one_sided=True)

    def test_bipolar_agrees_with_hull(self):
        samples = [vector(A, {"p": ["1/2", "1/2"], "q": [3]}), vector(A, {"p": [1, 1], "q": ["-1/2"]})]
        assert bipolar_check(self.Y, samples).agree
        assert bipolar_check(self.Y, samples, one_sided=True).agree

    def test_bipolar_on_scaled_random_samples(self):
        samples = gen.sample_points(random.Random(3), A, {"p": 2, "q": 1}, 200)
        verdicts = {bipolar_hull_contains(self.Y, CondRealVec(A, (("p", s.at("p")),))) for s in samples}
        assert verdicts == {True, False}
        report = bipolar_check(self.Y, samples)
        assert report.agree
        assert report.checked >= 100
        assert bipolar_check(self.Y, samples, one_sided=True).agree

    def test_sigma_bound(self):
        xp = _functional((3, -2), (4,))
        assert sigma_bound(self.Y, xp).as_dict() == {"p": 3, "q": 4}
        assert is_sigma_bounded(self.Y, xp, constant(A, 4))
        assert not is_sigma_bounded(self.Y, xp, constant(A, 3))

    def test_alaoglu_box(self):
        cert = alaoglu_certificate(linf_ball(DIM), constant(A, "1/2"))
        assert dict(cert.box.sides)["p"] == ((-1, 1), (-1, 1))
        assert cert.covers(vector(A, {"p": ["1/3", "1/3"], "q": [0, 1]}))

    def test_alaoglu_needs_neighborhood_and_positive_eps(self):
        with pytest.raises(BallNotAbsorbing):
            alaoglu_certificate(self.Y, constant(A, 1))
        with pytest.raises(EpsNotPositive):
            alaoglu_certificate(linf_ball(DIM), constant(A, 0))


class TestNorms:
    """Tests for gauges of polytope balls and operator norms."""

    def setup_method(self):
        self.x = vector(A, {"p": [3, -4], "q": [0, "1/2"]})

    def test_sup_and_sum_norms(self):
        assert norm_eval(linf_ball(DIM), self.x).as_dict() == {"p": 4, "q": F(1, 2)}
        assert norm_eval(l1_ball(DIM), self.x).as_dict() == {"p": 7, "q": F(1, 2)}

    def test_radius_scales_norm(self):
        assert norm_eval(linf_ball(DIM, 2), self.x).value("p") == 2

    def test_identity_operator_norms(self):
        I = CondMatrix.identity(DIM)
        assert operator_norm(I, linf_ball(DIM), linf_ball(DIM)) == constant(A, 1)
        assert operator_norm(I, l1_ball(DIM), linf_ball(DIM)) == constant(A, 1)
        assert operator_norm(I, linf_ball(DIM), l1_ball(DIM)) == constant(A, 2)

    def test_ball_must_be_circled(self):
        with pytest.raises(BallNotCircled):
            norm_eval(_poly([(1, 1), (-1, 1), (0, -1)], [(1,), (-1,)]), self.x)
