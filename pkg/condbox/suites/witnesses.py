"""Negative cases: every one of them must fail with the exact witness."""

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterator

from ..base import NotInvertible
from ..boolalg import Algebra, Condition
from ..condlin import span_membership
from ..condmap import generated_order, make_function, primal_is_total
from ..condnum import CondReal, CondRealVec, inv
from ..condset import CondSet
from ..condtop import DiscreteNaturals, NoSubcoverWitness, continuity_witness, discrete, find_finite_subcover, generated_topology, is_compact
from . import generators as gen
from .registry import CaseParams, Law, LawSuite, SuiteRegistry


@dataclass
class WitnessesCase:
    A: Algebra
    X: CondSet
    x: CondReal
    zeros: Condition
    bad: str
    chain: CondSet


@SuiteRegistry.register(
    "witnesses",
    description="Counterexamples reported with their witnessing atom or condition",
    laws=[
        "primal_order_not_total", "primal_order_chain", "naturals_not_compact", "not_invertible",
        "discontinuity_atom", "span_witness",
    ],
    order=70,
)
class WitnessesSuite(LawSuite):

    def clamp(self, params: CaseParams) -> CaseParams:
        return params.shrink(atoms=min(params.atoms, 3), carrier=min(params.carrier, 3))

    def build(self, params: CaseParams) -> WitnessesCase:
        rng = params.rng()
        A = gen.algebra(rng, params.atoms)
        X = gen.cond_set(rng, A, params.carrier, "X")
        x = gen.number(rng, A)
        zeros = A.condition(a for a in A.atoms if x.value(a) == 0)
        bad = rng.choice(A.atoms)
        # one atom carries a chain, the rest a single point
        chain = CondSet(A, tuple((1, 2, 3)[:params.carrier] if a == bad else (1,) for a in A.atoms), "C")
        return WitnessesCase(A, X, x, zeros, bad, chain)

    def laws(self, case: WitnessesCase) -> Iterator[Law]:
        A, X = case.A, case.X
        wide = sum(1 for a in A.atoms if len(X.carrier(a)) >= 2)
        yield "primal_order_not_total", primal_is_total(generated_order(X)) == (wide <= 1)
        yield "primal_order_chain", primal_is_total(generated_order(case.chain))

        N = DiscreteNaturals(A)
        found = find_finite_subcover(N, N.singleton_cover())
        yield "naturals_not_compact", (
            isinstance(found, NoSubcoverWitness)
            and not any(is_compact(N, w) for w in ("cover", "fip", "ultrafilter"))
        )

        try:
            inv(case.x)
            reported = None
        except NotInvertible as e:
            reported = e.condition
        yield "not_invertible", (reported is None) == case.zeros.is_zero and (reported is None or reported == case.zeros)

        # identity into a discrete codomain, from an indiscrete two-point carrier at one atom
        two = CondSet(A, tuple((1, 2) if a == case.bad else (1,) for a in A.atoms), "D")
        T = generated_topology(two, {})
        f = make_function(two, two, {a: {v: v for v in two.carrier(a)} for a in A.atoms})
        witness = continuity_witness(f, T, discrete(two))
        yield "discontinuity_atom", witness is not None and witness[0] == case.bad

        y = CondRealVec(A, tuple((a, (Fraction(1), Fraction(0))) for a in A.atoms))
        x = CondRealVec(A, tuple((a, (Fraction(0), Fraction(1)) if a == case.bad else (Fraction(2), Fraction(0))) for a in A.atoms))
        result = span_membership([y], x)
        yield "span_witness", not result.member and result.witness == case.bad

    def describe(self, case: WitnessesCase) -> Dict[str, Any]:
        return {
            "algebra": case.A.to_json(),
            "set": case.X.to_json(),
            "number": case.x.to_json(),
            "atom": case.bad,
        }
