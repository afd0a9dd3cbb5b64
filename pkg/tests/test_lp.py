"""
Tests for the exact rational simplex and its certificates.

Run with: pytest tests/test_lp.py -v
"""

import os
import sys
from fractions import Fraction

import pytest

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from condbox.base import MalformedProblem
from condbox.lp import (
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    Constraint,
    LPProblem,
    lp_solve,
    maximize,
    minimize,
    verify,
    verify_farkas,
    verify_ray,
)

F = Fraction


class TestOptimal:
    """Tests for problems with a finite optimum."""

    def test_single_bound(self):
        p = maximize([1], [([1], "<=", 1)])
        r = lp_solve(p)
        assert r.status == OPTIMAL
        assert r.x == (1,)
        assert r.objective == 1
        assert r.duals == (1,)
        assert verify(p, r)

    def test_small_production_problem(self):
        p = maximize([3, 2], [([1, 1], "<=", 4), ([1, 3], "<=", 6)])
        r = lp_solve(p)
        assert r.objective == 12
        assert r.x == (4, 0)
        assert verify(p, r)

    def test_degenerate_problem_terminates(self):
        # the classic cycling example for the textbook pivot rule
        p = maximize(
            [F(3, 4), -20, F(1, 2), -6],
            [
                ([F(1, 4), -8, -1, 9], "<=", 0),
                ([F(1, 2), -12, F(-1, 2), 3], "<=", 0),
                ([0, 0, 1, 0], "<=", 1),
            ],
        )
        r = lp_solve(p)
        assert r.status == OPTIMAL
        assert r.objective == F(5, 4)
        assert verify(p, r)

    def test_minimize_with_equality(self):
        p = minimize([1, 1], [([1, 2], "=", 4), ([1, -1], ">=", -2)])
        r = lp_solve(p)
        assert r.status == OPTIMAL
        assert r.objective == 2
        assert verify(p, r)

    def test_free_and_boxed_variables(self):
        p = LPProblem(
            (F(1), F(-1)),
            (Constraint((F(1), F(1)), "<=", F(3)),),
            "max",
            ((None, None), (F(-2), F(5))),
        )
        r = lp_solve(p)
        assert r.status == OPTIMAL
        assert r.x == (5, -2)
        assert r.objective == 7
        assert verify(p, r)

    def test_negative_upper_bound(self):
        p = maximize([1], bounds=((None, F(-3)),))
        r = lp_solve(p)
        assert r.x == (-3,)
        assert verify(p, r)

    def test_exact_fractions(self):
        p = maximize([1, 1], [([3, 1], "<=", 1), ([1, 3], "<=", 1)])
        r = lp_solve(p)
        assert r.objective == F(1, 2)
        assert r.x == (F(1, 4), F(1, 4))


class TestCertificates:
    """Tests for infeasibility and unboundedness certificates."""

    def test_infeasible_has_farkas_vector(self):
        p = maximize([1], [([1], "<=", 1), ([1], ">=", 2)])
        r = lp_solve(p)
        assert r.status == INFEASIBLE
        assert r.x is None
        assert verify_farkas(r)
        assert verify(p, r)

    def test_unbounded_has_ray(self):
        p = maximize([1, 0], [([1, -1], "<=", 1)])
        r = lp_solve(p)
        assert r.status == UNBOUNDED
        assert verify_ray(p, r)
        assert p.value(r.ray) > 0

    def test_minimize_unbounded(self):
        p = minimize([1], bounds=((None, None),))
        r = lp_solve(p)
        assert r.status == UNBOUNDED
        assert verify(p, r)

    def test_tampered_duals_fail(self):
        p = maximize([1], [([1], "<=", 1)])
        r = lp_solve(p)
        forged = type(r)(r.status, r.x, r.objective, (F(1, 2),), standard=r.standard)
        assert not verify(p, forged)

    def test_result_json(self):
        r = lp_solve(maximize([1], [([2], "<=", 1)]))
        assert r.to_json()["objective"] == "1/2"
        assert "farkas" in lp_solve(maximize([1], [([1], "<=", -1)])).to_json()


class TestProblemShape:
    """Tests for problem validation and the JSON form."""

    def test_empty_objective(self):
        with pytest.raises(MalformedProblem):
            LPProblem(())

    def test_unknown_sense_and_operator(self):
        with pytest.raises(MalformedProblem):
            LPProblem((F(1),), sense="sideways")
        with pytest.raises(MalformedProblem):
            maximize([1], [([1], "<", 1)])

    def test_row_length(self):
        with pytest.raises(MalformedProblem):
            maximize([1, 1], [([1], "<=", 1)])

    def test_empty_bound(self):
        with pytest.raises(MalformedProblem):
            maximize([1], bounds=((F(2), F(1)),))

    def test_json_round_trip(self):
        p = minimize(["1/3", 2], [([1, 1], ">=", "1/2")], bounds=((0, None), (None, 4)))
        assert LPProblem.from_json(p.to_json()) == p

    def test_from_json_rejects_garbage(self):
        with pytest.raises(MalformedProblem):
            LPProblem.from_json({"constraints": []})
        with pytest.raises(MalformedProblem):
            LPProblem.from_json({"objective": [1], "constraints": [{"op": "<="}]})


class TestAgainstFloatingPoint:
    """Cross-check optimal values against scipy's HiGHS solver."""

    @pytest.mark.parametrize("objective,rows", [
        ([3, 2], [([1, 1], 4), ([1, 3], 6)]),
        ([1, 2, 3], [([1, 1, 1], 10), ([2, 1, 0], 8), ([0, 1, 3], 9)]),
        ([F(1, 2), 1], [([1, 2], 7), ([3, 1], 9)]),
    ])
    def test_optimum_matches_linprog(self, objective, rows):
        optimize = pytest.importorskip("scipy.optimize")
        p = maximize(objective, [(c, "<=", b) for c, b in rows])
        exact = lp_solve(p)
        approx = optimize.linprog(
            [-float(c) for c in objective],
            A_ub=[[float(c) for c in coeffs] for coeffs, _ in rows],
            b_ub=[float(b) for _, b in rows],
            bounds=[(0, None)] * len(objective),
            method="highs",
        )
        assert approx.status == 0
        assert float(exact.objective) == pytest.approx(-approx.fun)
