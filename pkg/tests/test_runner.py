"""
Tests for the law suite registry, runner, minimisation and mutants.

Run with: pytest tests/test_runner.py -v
"""

import dataclasses
import os
import sys
from fractions import Fraction

import pytest

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from condbox.base import UnknownSuite
from condbox.config import Settings
from condbox.suites import MUTANTS, CaseParams, LawSuite, SuiteRegistry, SuiteRunner, applied, list_mutants
from condbox import condset
from condbox.condnum import CondReal

SUITES = ["powerset", "functions", "filters", "topology", "numbers", "linear", "witnesses"]


class SmallCarrierSuite(LawSuite):
    """Fails whenever the carrier has two or more values."""

    def build(self, params):
        return params

    def laws(self, case):
        yield "small_carrier", case.carrier < 2
        yield "always", True

    def describe(self, case):
        return case.to_dict()


class CrashingSuite(LawSuite):

    def build(self, params):
        raise RuntimeError("boom")


class TestSuiteRegistry:
    """Tests for SuiteRegistry."""

    def teardown_method(self):
        SuiteRegistry.unregister("small-carrier")

    def test_builtin_suites(self):
        assert sorted(SuiteRegistry.list_all()) == sorted(SUITES)

    def test_register_class_directly(self):
        SuiteRegistry.register_class("small-carrier", SmallCarrierSuite, "toy", ["small_carrier"], order=999)
        assert SuiteRegistry.list_all()[-1] == "small-carrier"
        info = SuiteRegistry.get("small-carrier")
        assert info.to_dict() == {"name": "small-carrier", "description": "toy", "laws": ["small_carrier"]}
        assert SuiteRegistry.create_instance("small-carrier").name == "small-carrier"

    def test_unregister(self):
        SuiteRegistry.register_class("small-carrier", SmallCarrierSuite)
        assert SuiteRegistry.unregister("small-carrier") is True
        assert SuiteRegistry.unregister("small-carrier") is False

    def test_unknown_suite(self):
        with pytest.raises(UnknownSuite):
            SuiteRegistry.get_or_raise("nope")

    def test_every_suite_lists_its_laws(self):
        for info in SuiteRegistry.get_all_info().values():
            assert info["laws"], info["name"]


class TestSuiteRunner:
    """Tests for SuiteRunner with toy suites."""

    def setup_method(self):
        SuiteRegistry.register_class("small-carrier", SmallCarrierSuite, order=999)
        SuiteRegistry.register_class("crashing", CrashingSuite, order=999)
        self.runner = SuiteRunner(Settings(atoms_max=3, carrier_max=4, workers=2))

    def teardown_method(self):
        SuiteRegistry.unregister("small-carrier")
        SuiteRegistry.unregister("crashing")

    def test_case_params_are_reproducible(self):
        suite = SuiteRegistry.create_instance("small-carrier")
        a = [self.runner.case_params(suite, i, 7) for i in range(10)]
        b = [self.runner.case_params(suite, i, 7) for i in range(10)]
        assert a == b
        assert all(1 <= p.atoms <= 3 and 1 <= p.carrier <= 4 for p in a)

    def test_failures_are_minimised(self):
        report = self.runner.run("small-carrier", seed=3, cases=20)
        assert not report.ok
        for failure in report.failures:
            assert failure.laws == ["small_carrier"]
            assert (failure.params.atoms, failure.params.carrier, failure.params.dim) == (1, 2, 1)
            assert failure.params.content_seed == failure.original.content_seed
            assert failure.original.carrier >= 2
            assert failure.instance == failure.params.to_dict()

    def test_exceptions_fail_the_case(self):
        report = self.runner.run("crashing", seed=1, cases=3)
        assert report.failure_count == 3
        assert report.failures[0].laws == ["exception"]
        assert report.failures[0].error == "RuntimeError: boom"
        assert report.failures[0].to_dict()["error"] == "RuntimeError: boom"

    def test_report_json_is_deterministic(self):
        a = self.runner.run("small-carrier", seed=11, cases=15).to_dict()
        b = self.runner.run("small-carrier", seed=11, cases=15).to_dict()
        assert a == b
        assert "wall_time" not in a


class TestBuiltinSuites:
    """Runs the real suites on a handful of cases."""

    def setup_method(self):
        self.runner = SuiteRunner(Settings(workers=2))

    @pytest.mark.parametrize("name", SUITES)
    def test_suite_holds(self, name):
        report = self.runner.run(name, seed=1, cases=40)
        assert report.ok, report.to_dict()

    def test_inverse_law_with_a_vanishing_atom(self):
        suite = SuiteRegistry.create_instance("numbers")
        case = suite.build(CaseParams("numbers:1:0", 3, 2, 1))
        values = dict(zip(case.A.atoms, (Fraction(3, 4), Fraction(-1, 2), Fraction(0))))
        x = CondReal(case.A, tuple(values.items()))
        for law, holds in suite.laws(dataclasses.replace(case, x=x)):
            if law == "multiplicative_inverse":
                assert holds
                break
        else:
            pytest.fail("multiplicative_inverse was not checked")

    def test_same_seed_same_report(self):
        a = self.runner.run("powerset", seed=5, cases=6).to_dict()
        b = self.runner.run("powerset", seed=5, cases=6).to_dict()
        assert a == b

    def test_failed_suite_module_fails_check_all(self):
        SuiteRegistry.record_load_error("broken", "ImportError: cannot import name 'nowhere'")
        try:
            report = self.runner.run("all", seed=1, cases=1)
        finally:
            SuiteRegistry.clear_load_error("broken")
        assert report.failure_count == 1
        part = report.parts[-1]
        assert part.suite == "broken"
        assert part.failures[0].laws == ["import"]
        assert part.to_dict()["failures"][0]["error"] == "ImportError: cannot import name 'nowhere'"
        assert SuiteRegistry.load_errors() == {}

    def test_fuzz_derives_seeds(self):
        report = self.runner.fuzz(2, seed=9, cases=1)
        assert len(report.parts) == 2
        assert report.parts[0].seed != report.parts[1].seed
        assert report.to_dict()["suite"] == "fuzz"


class TestMutants:
    """Each mutant must be caught by the suite it targets."""

    @pytest.mark.parametrize("name", sorted(MUTANTS))
    def test_mutant_is_caught(self, name):
        mutant = MUTANTS[name]
        report = SuiteRunner(Settings(workers=2)).run(mutant.suite, seed=1, cases=25, mutant=name)
        assert not report.ok
        assert report.mutant == name

    def test_patch_is_undone(self):
        original = condset.cond_complement
        with applied("complement-no-support-fix") as mutant:
            assert condset.cond_complement is mutant.replacement
        assert condset.cond_complement is original

    def test_unknown_mutant(self):
        with pytest.raises(UnknownSuite):
            with applied("nope"):
                pass
        assert len(list_mutants()) == len(MUTANTS)


def test_case_params_shrink_keeps_seed():
    p = CaseParams("x:1:0", 3, 4, 2)
    assert p.shrink(atoms=1) == CaseParams("x:1:0", 1, 4, 2)
    assert p.rng().random() == CaseParams("x:1:0", 1, 1, 1).rng().random()
