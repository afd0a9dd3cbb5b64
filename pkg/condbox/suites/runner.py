"""
Suite Runner for Cond Box.

Runs the cases of a law suite on a thread pool and merges the outcomes by
case index. Every failing case is shrunk (fewer atoms, smaller carriers,
lower dimension, same content seed) while it keeps failing, and the report
carries the smallest failing instance.
"""

import logging
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from ..config import Settings, get_settings
from .mutants import applied
from .registry import CaseParams, LawSuite, SuiteRegistry

logger = logging.getLogger(__name__)

DIM_MAX = 4
SIZE_KEYS = ("atoms", "carrier", "dim")


@dataclass
class CaseFailure:
    """One failing case after minimisation."""
    index: int
    laws: List[str]
    params: CaseParams
    original: CaseParams
    instance: Dict[str, Any] = field(default_factory=dict)
    error: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        out = {
            'index': self.index,
            'laws': list(self.laws),
            'params': self.params.to_dict(),
            'original_params': self.original.to_dict(),
            'instance': self.instance,
        }
        if self.error is not None:
            out['error'] = self.error
        return out


@dataclass
class Report:
    """Outcome of one suite run, or of several when `parts` is set."""
    suite: str
    seed: int
    cases: int
    failures: List[CaseFailure] = field(default_factory=list)
    mutant: Optional[str] = None
    parts: List["Report"] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def failure_count(self) -> int:
        return len(self.failures) + sum(p.failure_count for p in self.parts)

    @property
    def ok(self) -> bool:
        return self.failure_count == 0

    def to_dict(self) -> Dict[str, Any]:
        """JSON report; wall time is left out so equal seeds give equal bytes."""
        out: Dict[str, Any] = {
            'suite': self.suite,
            'seed': self.seed,
            'cases': self.cases,
            'failure_count': self.failure_count,
        }
        if self.mutant is not None:
            out['mutant'] = self.mutant
        if self.parts:
            out['suites'] = [p.to_dict() for p in self.parts]
        else:
            out['failures'] = [f.to_dict() for f in self.failures]
        return out


Outcome = Tuple[List[str], Optional[str], Any]


class SuiteRunner:
    """
    Executes registered law suites.

    Usage:
        runner = SuiteRunner()
        report = runner.run("powerset", seed=1, cases=500)
        print(report.ok)
    """

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or get_settings()

    def case_params(self, suite: LawSuite, index: int, seed: int) -> CaseParams:
        """Sizes and content seed of case `index`, fixed by (suite, seed, index)."""
        key = f"{suite.name}:{seed}:{index}"
        rng = random.Random(key)
        params = CaseParams(
            content_seed=key,
            atoms=rng.randint(1, max(1, self.settings.atoms_max)),
            carrier=rng.randint(1, max(1, self.settings.carrier_max)),
            dim=rng.randint(1, DIM_MAX),
        )
        return suite.clamp(params)

    def outcome(self, suite: LawSuite, params: CaseParams) -> Outcome:
        """(failing laws, error text, case); build or check errors fail the case."""
        try:
            case = suite.build(params)
            return suite.check(case), None, case
        except Exception as e:
            return ["exception"], f"{type(e).__name__}: {e}", None

    def minimize(self, suite: LawSuite, params: CaseParams) -> CaseParams:
        """Shrink one size at a time while the case still fails."""
        current = params
        improved = True
        while improved:
            improved = False
            for key in SIZE_KEYS:
                value = getattr(current, key)
                if value <= 1:
                    continue
                trial = suite.clamp(current.shrink(**{key: value - 1}))
                if trial == current:
                    continue
                if self.outcome(suite, trial)[0]:
                    current = trial
                    improved = True
        return current

    def _failure(self, suite: LawSuite, index: int, params: CaseParams) -> CaseFailure:
        small = self.minimize(suite, params)
        laws, error, case = self.outcome(suite, small)
        instance = suite.describe(case) if case is not None else {}
        return CaseFailure(index, laws, small, params, instance, error)

    def run(self, name: str, seed: Optional[int] = None, cases: Optional[int] = None, mutant: Optional[str] = None) -> Report:
        """Run `cases` cases of one suite (or of every suite for `all`)."""
        seed = self.settings.seed if seed is None else seed
        cases = self.settings.cases if cases is None else cases
        if name == "all":
            return self.run_all(seed, cases, mutant)
        suite = SuiteRegistry.create_instance(name)
        started = time.perf_counter()
        with applied(mutant):
            params = [self.case_params(suite, i, seed) for i in range(cases)]
            results: List[Optional[Outcome]] = [None] * cases
            with ThreadPoolExecutor(max_workers=max(1, self.settings.workers)) as pool:
                futures = {pool.submit(self.outcome, suite, p): i for i, p in enumerate(params)}
                for future, i in futures.items():
                    results[i] = future.result()
            failures = [
                self._failure(suite, i, params[i])
                for i, result in enumerate(results)
                if result is not None and result[0]
            ]
        report = Report(name, seed, cases, failures, mutant)
        report.wall_time = time.perf_counter() - started
        logger.info(f"[Runner] suite {name}: {cases} cases, {len(failures)} failures in {report.wall_time:.2f}s")
        return report

    def run_all(self, seed: int, cases: int, mutant: Optional[str] = None) -> Report:
        """Every registered suite; a suite module that failed to import counts as a failing part."""
        parts = [self.run(name, seed, cases, mutant) for name in SuiteRegistry.list_all()]
        for module, error in SuiteRegistry.load_errors().items():
            params = CaseParams(f"{module}:import", 0, 0, 0)
            parts.append(Report(module, seed, 0, [CaseFailure(0, ["import"], params, params, {}, error)], mutant))
        report = Report("all", seed, sum(p.cases for p in parts), mutant=mutant, parts=parts)
        report.wall_time = sum(p.wall_time for p in parts)
        return report

    def fuzz(self, rounds: int, seed: Optional[int] = None, cases: Optional[int] = None) -> Report:
        """Every suite over `rounds` seeds derived from the base seed."""
        seed = self.settings.seed if seed is None else seed
        derive = random.Random(f"fuzz:{seed}")
        seeds = [derive.randrange(1, 2 ** 31) for _ in range(rounds)]
        parts = [self.run_all(s, self.settings.cases if cases is None else cases) for s in seeds]
        logger.info(f"[Runner] fuzz: {rounds} rounds from seed {seed}")
        return Report("fuzz", seed, sum(p.cases for p in parts), parts=parts)


def run_suite(name: str, seed: Optional[int] = None, cases: Optional[int] = None, mutant: Optional[str] = None) -> Report:
    return SuiteRunner().run(name, seed, cases, mutant)
