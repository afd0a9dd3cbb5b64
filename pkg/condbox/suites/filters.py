"""Filter bases, generated filters and the ultrafilter characterizations, by enumeration."""

from dataclasses import dataclass
from typing import Any, Dict, Iterator, List

from ..base import DegenerateSystem
from ..boolalg import Condition, meet_all
from ..condfilter import (
    CondFilter,
    CondFilterBase,
    brute_force_filter,
    filter_leq,
    generate_filter,
    is_filter_base_brute,
    localize,
    min_condition,
    primal_family_is_base,
    principal_filter,
    pushforward,
    trivial_filter,
    ultrafilter_clauses,
    ultrafilter_extend,
)
from ..condmap import CondFunction, image
from ..condset import CondElement, CondSet, CondSubset, restrict, subsets
from . import generators as gen
from .registry import CaseParams, Law, LawSuite, SuiteRegistry

# Below this many members of S(X) every filter is checked; above it a sample.
ENUMERATE_ALL = 16
SAMPLED_FILTERS = 4


@dataclass
class FiltersCase:
    X: CondSet
    Y: CondSet
    base: CondFilterBase
    f: CondFunction
    x: CondElement
    kernels: List[CondSubset]
    conditions: List[Condition]


@SuiteRegistry.register(
    "filters",
    description="Conditional filters and ultrafilters on materialized spaces",
    laws=[
        "base_validity", "primal_base", "generated_members", "ultra_extends", "ultra_clauses",
        "clauses_agree", "principal_ultra", "trivial_filter", "min_condition", "localize", "pushforward", "pushforward_ultra",
    ],
    order=30,
)
class FiltersSuite(LawSuite):

    def clamp(self, params: CaseParams) -> CaseParams:
        atoms = min(params.atoms, 3)
        carrier = min(params.carrier, 3 if atoms <= 2 else 2)
        return params.shrink(atoms=atoms, carrier=carrier)

    def build(self, params: CaseParams) -> FiltersCase:
        rng = params.rng()
        A = gen.algebra(rng, params.atoms)
        X = gen.cond_set(rng, A, params.carrier, "X")
        Y = gen.cond_set(rng, A, params.carrier, "Y")
        base = gen.filter_base(rng, X)
        f = gen.function(rng, X, Y)
        x = gen.element(rng, X)
        S = subsets(X)
        kernels = S if len(S) <= ENUMERATE_ALL else [rng.choice(S) for _ in range(SAMPLED_FILTERS)]
        conditions = [gen.condition(rng, A, nonzero=True) for _ in range(rng.randint(1, 3))]
        return FiltersCase(X, Y, base, f, x, kernels, conditions)

    def laws(self, case: FiltersCase) -> Iterator[Law]:
        B, X = case.base, case.X
        valid = B.is_valid()
        yield "base_validity", valid == is_filter_base_brute(B)
        yield "primal_base", primal_family_is_base(B) == valid
        if not valid:
            return

        F = generate_filter(B)
        yield "generated_members", set(F.members()) == set(brute_force_filter(B))

        U = ultrafilter_extend(F)
        yield "ultra_extends", filter_leq(F, U) and U.is_ultra
        yield "ultra_clauses", all(ultrafilter_clauses(U).values())

        agree = True
        for K in case.kernels:
            G = CondFilter(X, K, (K,))
            verdicts = set(ultrafilter_clauses(G).values())
            agree = agree and verdicts == {G.is_ultra}
        yield "clauses_agree", agree

        yield "principal_ultra", all(ultrafilter_clauses(principal_filter(case.x)).values())
        T = trivial_filter(X)
        yield "trivial_filter", T.is_ultra == all(len(X.carrier(a)) == 1 for a in X.algebra.atoms)

        system = [restrict(Z, b) for Z, b in zip(F.members(), case.conditions)]
        m = meet_all(X.algebra, (Z.support for Z in system))
        if m.is_zero:
            try:
                min_condition(system)
                yield "min_condition", False
            except DegenerateSystem:
                yield "min_condition", True
        else:
            yield "min_condition", min_condition(system) == m
            local = localize(system)
            yield "localize", (
                local.space.algebra.atoms == tuple(m.atoms())
                and all(local.kernel.at(a) == frozenset.intersection(*(Z.at(a) for Z in system)) for a in m.atoms())
                and all(local.contains(Z) for Z in local.generators)
            )

        pushed = pushforward(case.f, F)
        yield "pushforward", pushed.is_valid() and generate_filter(pushed).kernel == image(case.f, F.kernel)

        V = generate_filter(pushforward(case.f, U))
        yield "pushforward_ultra", V.is_ultra and all(ultrafilter_clauses(V).values())

    def describe(self, case: FiltersCase) -> Dict[str, Any]:
        return {
            "algebra": case.X.algebra.to_json(),
            "sets": {"X": case.X.to_json(), "Y": case.Y.to_json()},
            "generators": [Y.to_json() for Y in case.base.generators],
            "function": case.f.to_json(),
            "element": case.x.to_json(),
            "conditions": [b.to_json() for b in case.conditions],
        }
