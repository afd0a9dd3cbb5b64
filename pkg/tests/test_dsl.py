"""
Tests for the expression language: parsing, evaluation and rendering.

Run with: pytest tests/test_dsl.py -v
"""

import os
import sys
from fractions import Fraction

import pytest

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from condbox.base import EvalError, NotInvertible, ParseError
from condbox.dsl import Expr, OperatorRegistry, Symbol, evaluate_source, parse
from condbox.instance import read_instance

SAMPLE = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "samples", "instance.json")


@pytest.fixture(scope="module")
def inst():
    return read_instance(SAMPLE)


def _one(source, inst):
    results = evaluate_source(source, inst)
    assert len(results) == 1
    return results[0]


class TestParse:
    """Tests for the s-expression reader."""

    def test_forms_and_comments(self):
        forms = parse("(inter Y Z) ; both\n(compare r s)")
        assert len(forms) == 2
        assert forms[0] == Expr((Symbol("inter"), Symbol("Y"), Symbol("Z")))

    def test_numbers_are_exact(self):
        assert parse("-1/2 3") == [Fraction(-1, 2), Fraction(3)]

    def test_strings(self):
        assert parse('(const "1/3")') == [Expr((Symbol("const"), "1/3"))]

    def test_positions_in_errors(self):
        with pytest.raises(ParseError) as exc:
            parse("(inter Y\n  Z")
        assert (exc.value.line, exc.value.column) == (1, 1)
        with pytest.raises(ParseError) as exc:
            parse("Y\n )")
        assert (exc.value.line, exc.value.column) == (2, 2)
        with pytest.raises(ParseError):
            parse('(const "1/3)')


class TestEvaluate:
    """Tests for evaluating forms against the sample instance."""

    def test_intersection_renders_support(self, inst):
        out = _one("(inter Y Z)", inst)
        assert out["type"] == "CondSubset"
        assert out["value"]["pointwise"] == {"w1": [1], "w2": [3]}
        assert out["lives_on"] == ["w1", "w2"]

    def test_let_binds_names(self, inst):
        out = _one("(let ((W (union Y Z))) (closure D W))", inst)
        assert out["value"]["pointwise"] == {"w1": [1, 2], "w2": [2, 3]}

    def test_arithmetic(self, inst):
        assert _one("(+ r s)", inst)["value"] == {"w1": "5/2", "w2": "2"}
        assert _one("(restrict r (atoms w1))", inst)["value"] == {"w1": "1/2"}
        assert _one("(restrict r a)", inst)["lives_on"] == ["w1"]

    def test_compare_is_a_partition(self, inst):
        out = _one("(compare r s)", inst)
        assert out["value"]["parts"] == [["w1"], ["w2"], []]

    def test_apply_function(self, inst):
        assert _one("(apply f x)", inst)["value"]["assignment"] == {"w1": 2, "w2": 3}

    def test_topology_predicates(self, inst):
        assert evaluate_source("(open? T Y) (open? D Y) (compact? T fip)", inst) == [False, True, True]

    def test_filters(self, inst):
        assert _one("(ultra? F)", inst) is False
        assert _one("(ultra? (ultrafilter F) iii)", inst) is True

    def test_linear_operators(self, inst):
        assert _one("(norm B v)", inst)["value"] == {"w1": "4", "w2": "1"}
        assert _one("(dual g (list h k))", inst)["value"]["representable"] is True
        assert _one("(separate P Q)", inst)["type"] == "Separation"
        assert _one("(eval g v)", inst)["value"] == {"w1": "-1", "w2": "2"}

    def test_lp(self, inst):
        out = _one("(lp p)", inst)
        assert out["value"]["status"] == "optimal"
        assert out["value"]["objective"] == "14/5"


class TestErrors:
    """Tests for evaluation errors."""

    @pytest.mark.parametrize("source", [
        "(frobnicate Y)",
        "(union)",
        "(closure T nothing)",
        "()",
        "(let (W Y) W)",
        "(3 Y)",
    ])
    def test_rejected(self, inst, source):
        with pytest.raises(EvalError):
            evaluate_source(source, inst)

    def test_library_errors_keep_their_cause(self, inst):
        with pytest.raises(EvalError) as exc:
            evaluate_source("(/ r (- r r))", inst)
        assert isinstance(exc.value.cause, NotInvertible)
        assert "NotInvertible" in str(exc.value)


class TestRegistry:
    """Tests for the operator registry."""

    def test_builtin_operators(self):
        names = OperatorRegistry.list_all()
        for name in ("union", "closure", "compare", "separate", "lp"):
            assert name in names

    def test_register_custom_operator(self, inst):
        @OperatorRegistry.register("twice", (1, 1), "2x")
        def _twice(instance, x):
            return x + x

        try:
            assert OperatorRegistry.get("twice").to_dict() == {"name": "twice", "arity": [1, 1], "description": "2x"}
            assert evaluate_source("(twice 3/4)", inst) == ["3/2"]
        finally:
            OperatorRegistry._ops.pop("twice", None)
