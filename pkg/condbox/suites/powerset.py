"""Boolean algebra laws of P(X), with the formula side checked against the per-atom side."""

import itertools
from dataclasses import dataclass
from typing import Any, Dict, Iterator, List

from .. import condset
from ..boolalg import Condition
from ..condset import (
    AmalgamationExpr,
    CondSet,
    CondSubset,
    complement_formula,
    cond_intersection,
    cond_union,
    empty,
    from_atoms,
    full,
    intersection_formula,
    restrict,
    subset_leq,
    to_atoms,
    union_formula,
)
from . import generators as gen
from .registry import CaseParams, Law, LawSuite, SuiteRegistry


@dataclass
class PowersetCase:
    X: CondSet
    Y: CondSubset
    Z: CondSubset
    W: CondSubset
    grid: List[List[CondSubset]]
    b: Condition


def _value(expr: AmalgamationExpr, X: CondSet) -> CondSubset:
    if expr.partition.base.is_zero:
        return empty(X)
    return to_atoms(expr)


@SuiteRegistry.register(
    "powerset",
    description="Boolean algebra laws of the conditional power set",
    laws=[
        "complement_meet", "complement_join", "double_complement", "de_morgan_union",
        "de_morgan_intersection", "distributivity", "dual_distributivity", "associativity_union",
        "associativity_intersection", "absorption", "order_by_meet", "formula_union",
        "formula_intersection", "formula_complement", "normal_form", "restriction",
    ],
    order=10,
)
class PowersetSuite(LawSuite):

    def build(self, params: CaseParams) -> PowersetCase:
        rng = params.rng()
        A = gen.algebra(rng, params.atoms)
        X = gen.cond_set(rng, A, params.carrier)
        Y, Z, W = (gen.subset(rng, X) for _ in range(3))
        grid = [[gen.subset(rng, X) for _ in range(2)] for _ in range(2)]
        return PowersetCase(X, Y, Z, W, grid, gen.condition(rng, A))

    def laws(self, case: PowersetCase) -> Iterator[Law]:
        X, Y, Z, W = case.X, case.Y, case.Z, case.W
        c = condset.cond_complement
        yield "complement_meet", cond_intersection([Y, c(Y)]) == empty(X)
        yield "complement_join", cond_union([Y, c(Y)]) == full(X)
        yield "double_complement", c(c(Y)) == Y
        yield "de_morgan_union", c(cond_union([Y, Z])) == cond_intersection([c(Y), c(Z)])
        yield "de_morgan_intersection", c(cond_intersection([Y, Z])) == cond_union([c(Y), c(Z)])

        choices = list(itertools.product(range(2), repeat=2))
        g = case.grid
        lhs = cond_intersection([cond_union(row) for row in g])
        rhs = cond_union([cond_intersection([g[i][f[i]] for i in range(2)]) for f in choices])
        yield "distributivity", lhs == rhs
        lhs = cond_union([cond_intersection(row) for row in g])
        rhs = cond_intersection([cond_union([g[i][f[i]] for i in range(2)]) for f in choices])
        yield "dual_distributivity", lhs == rhs

        yield "associativity_union", cond_union([cond_union([Y, Z]), W]) == cond_union([Y, cond_union([Z, W])])
        yield "associativity_intersection", (
            cond_intersection([cond_intersection([Y, Z]), W]) == cond_intersection([Y, cond_intersection([Z, W])])
        )
        yield "absorption", cond_union([Y, cond_intersection([Y, Z])]) == Y
        yield "order_by_meet", subset_leq(Y, Z) == (cond_intersection([Y, Z]) == Y)

        fy, fz = from_atoms(Y), from_atoms(Z)
        yield "formula_union", _value(union_formula(X, [fy, fz]), X) == cond_union([Y, Z])
        yield "formula_intersection", _value(intersection_formula(X, [fy, fz]), X) == cond_intersection([Y, Z])
        yield "formula_complement", _value(complement_formula(fy), X) == c(Y)
        yield "normal_form", _value(fy, X) == Y
        yield "restriction", (
            restrict(cond_union([Y, Z]), case.b) == cond_union([restrict(Y, case.b), restrict(Z, case.b)], X)
        )

    def describe(self, case: PowersetCase) -> Dict[str, Any]:
        return {
            "algebra": case.X.algebra.to_json(),
            "set": case.X.to_json(),
            "subsets": {"Y": case.Y.to_json(), "Z": case.Z.to_json(), "W": case.W.to_json()},
            "grid": [[Y.to_json() for Y in row] for row in case.grid],
            "condition": case.b.to_json(),
        }
