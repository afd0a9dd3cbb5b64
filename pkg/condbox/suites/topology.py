"""Topological laws on finite conditional spaces: closure, continuity, bases, products, compactness."""

from dataclasses import dataclass
from typing import Any, Dict, Iterator, List

from .. import condset
from ..boolalg import Condition, complement
from ..condfilter import CondFilter, generate_filter
from ..condmap import CondFunction, compose, image, projection
from ..condset import (
    CondElement,
    CondSet,
    CondSubset,
    cond_union,
    elements,
    full,
    restrict,
    singleton,
    subset_leq,
    subsets,
)
from ..condtop import (
    CondTopoBase,
    CondTopology,
    StitchedSubcover,
    basis_closure_brute,
    closure,
    cluster_points_pointwise,
    converges,
    find_finite_subcover,
    finer_converging_filter,
    initial_topology,
    interior,
    is_closed,
    is_compact,
    is_compact_subset,
    is_continuous,
    is_continuous_at,
    is_continuous_at_by_filters,
    is_continuous_by_closed,
    is_continuous_by_closure,
    is_continuous_by_interior,
    is_continuous_by_preimage,
    is_hausdorff,
    is_hausdorff_pairwise,
    is_open,
    is_second_countable,
    is_separable,
    limit_set,
    neighborhood_filter,
    open_sets,
    product_base,
    product_topology,
    relative_topology,
    topology_from_base,
)
from . import generators as gen
from .registry import CaseParams, Law, LawSuite, SuiteRegistry

# Brute-force base closure and limit sets only run below these sizes.
BRUTE_OPENS = 64
LIMIT_SUBSETS = 256
CLUSTER_POINTS = 8


@dataclass
class TopologyCase:
    X: CondSet
    Z: CondSet
    T: CondTopology
    S: CondTopology
    f: CondFunction
    g: CondFunction
    Y: CondSubset
    Y1: CondSubset
    x: CondElement
    F: CondFilter
    b: Condition
    factors: List[CondTopology]


@SuiteRegistry.register(
    "topology",
    description="Conditional topologies on finite conditional sets",
    laws=[
        "closure_interior_duality", "interior_open", "closure_closed", "interior_contained",
        "closure_contains", "idempotent", "open_by_interior", "continuity_characterizations",
        "continuity_pointwise", "continuity_by_filters", "initial_continuous", "initial_coarsest",
        "compose_continuous", "second_countable", "separable", "base_round_trip", "relative",
        "product_base", "projections_continuous", "tychonoff", "neighborhood_converges",
        "limit_set", "cluster_points", "compactness_triple", "stitched_subcover",
        "neighborhood_subcover", "compact_subsets", "hausdorff",
    ],
    order=40,
)
class TopologySuite(LawSuite):

    def clamp(self, params: CaseParams) -> CaseParams:
        atoms = min(params.atoms, 3)
        return params.shrink(atoms=atoms, carrier=min(params.carrier, 3 if atoms == 3 else 4))

    def build(self, params: CaseParams) -> TopologyCase:
        rng = params.rng()
        A = gen.algebra(rng, params.atoms)
        X = gen.cond_set(rng, A, params.carrier, "X")
        Z = gen.cond_set(rng, A, params.carrier, "Z")
        S = gen.topology(rng, Z)
        f = gen.function(rng, X, Z)
        # half of the cases carry the initial topology of f, so f is continuous there
        T = initial_topology([f], [S]) if rng.random() < 0.5 else gen.topology(rng, X)
        g = gen.function(rng, Z, Z)
        Y = gen.subset(rng, X)
        Y1 = gen.subset(rng, X, on_one=True)
        x = gen.element(rng, X)
        F = generate_filter(gen.filter_base(rng, X, valid=True))
        b = gen.condition(rng, A)
        count = 3 if params.atoms == 1 else 2
        factors = [gen.topology(rng, gen.cond_set(rng, A, min(2, params.carrier), f"F{j}")) for j in range(count)]
        return TopologyCase(X, Z, T, S, f, g, Y, Y1, x, F, b, factors)

    def laws(self, case: TopologyCase) -> Iterator[Law]:
        X, T, S, f, Y = case.X, case.T, case.S, case.f, case.Y
        c = condset.cond_complement

        yield "closure_interior_duality", closure(T, Y) == c(interior(T, c(Y)))
        yield "interior_open", is_open(T, interior(T, Y))
        yield "closure_closed", is_closed(T, closure(T, Y))
        yield "interior_contained", subset_leq(interior(T, Y), Y)
        yield "closure_contains", subset_leq(Y, closure(T, Y))
        yield "idempotent", (
            interior(T, interior(T, Y)) == interior(T, Y) and closure(T, closure(T, Y)) == closure(T, Y)
        )
        yield "open_by_interior", is_open(T, Y) == (interior(T, Y) == Y)

        cont = is_continuous(f, T, S)
        yield "continuity_characterizations", cont == is_continuous_by_preimage(f, T, S) == is_continuous_by_closed(f, T, S) \
            == is_continuous_by_closure(f, T, S) == is_continuous_by_interior(f, T, S)
        yield "continuity_pointwise", cont == all(is_continuous_at(f, T, S, x) for x in elements(X))
        yield "continuity_by_filters", is_continuous_at(f, T, S, case.x) == is_continuous_at_by_filters(f, T, S, case.x)

        initial = initial_topology([f], [S])
        yield "initial_continuous", is_continuous(f, initial, S)
        yield "initial_coarsest", not cont or all(initial.at(a) <= T.at(a) for a in X.algebra.atoms)
        g = case.g
        both = cont and is_continuous(g, S, S)
        yield "compose_continuous", not both or is_continuous(compose(g, f), T, S)

        yield "second_countable", is_second_countable(T)
        yield "separable", is_separable(T)
        opens = open_sets(T)
        if len(opens) <= BRUTE_OPENS:
            B = CondTopoBase(X, tuple(O for O in opens if O.lives_on_one))
            yield "base_round_trip", topology_from_base(B) == T and set(basis_closure_brute(B)) == set(opens)

        R = relative_topology(T, case.Y1)
        yield "relative", all(
            R.at(a) == frozenset(o & case.Y1.at(a) for o in T.at(a)) for a in X.algebra.atoms
        )

        factors = case.factors
        P = product_topology(factors)
        spaces = [Tj.space for Tj in factors]
        yield "product_base", topology_from_base(product_base(factors)) == P
        yield "projections_continuous", all(
            is_continuous(projection(P.space, spaces, j), P, Tj) for j, Tj in enumerate(factors)
        )
        yield "tychonoff", all(is_compact(P, w) == all(is_compact(Tj, w) for Tj in factors) for w in ("cover", "ultrafilter"))

        Nx = neighborhood_filter(T, case.x)
        yield "neighborhood_converges", converges(T, Nx, case.x)
        if len(subsets(X)) <= LIMIT_SUBSETS:
            yield "limit_set", subset_leq(singleton(case.x), limit_set(T, Nx))

        F = case.F
        cluster = cluster_points_pointwise(T, F)
        points = list(elements(X))[:CLUSTER_POINTS]
        yield "cluster_points", all(
            subset_leq(singleton(p), cluster) == (finer_converging_filter(T, F, p) is not None) for p in points
        )

        yield "compactness_triple", is_compact(T, "cover") == is_compact(T, "fip") == is_compact(T, "ultrafilter")

        b = case.b
        if not b.is_zero and not b.is_one:
            cover = [restrict(full(X), b), restrict(full(X), complement(b)), full(X)]
            found = find_finite_subcover(T, cover)
            yield "stitched_subcover", (
                isinstance(found, StitchedSubcover)
                and found.covers(X, cover)
                and set(found.partition.parts) == {b, complement(b)}
                and all(v == 1 for _, v in found.count.values)
            )
        neighborhoods = [neighborhood_filter(T, p).kernel for p in points]
        found = find_finite_subcover(T, neighborhoods + [full(X)])
        yield "neighborhood_subcover", isinstance(found, StitchedSubcover) and found.covers(X, neighborhoods + [full(X)])

        Y1 = case.Y1
        compact_image = not cont or is_compact_subset(S, image(f, Y1))
        closed_part = closure(T, Y1)
        yield "compact_subsets", (
            is_compact_subset(T, Y1)
            and compact_image
            and (not closed_part.lives_on_one or is_compact_subset(T, closed_part))
            and is_compact_subset(T, cond_union([Y1, closed_part]))
        )

        if all(len(X.carrier(a)) >= 2 for a in X.algebra.atoms):
            yield "hausdorff", is_hausdorff(T) == is_hausdorff_pairwise(T)

    def describe(self, case: TopologyCase) -> Dict[str, Any]:
        return {
            "algebra": case.X.algebra.to_json(),
            "sets": {"X": case.X.to_json(), "Z": case.Z.to_json()},
            "topologies": {"T": case.T.to_json(), "S": case.S.to_json()},
            "functions": {"f": case.f.to_json(), "g": case.g.to_json()},
            "subsets": {"Y": case.Y.to_json(), "Y1": case.Y1.to_json()},
            "element": case.x.to_json(),
            "filter": case.F.to_json(),
            "condition": case.b.to_json(),
            "factors": [{"set": Tj.space.to_json(), **Tj.to_json()} for Tj in case.factors],
        }
