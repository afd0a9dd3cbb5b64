"""Image and preimage identities, composition, cardinality and choice."""

from dataclasses import dataclass
from typing import Any, Dict, Iterator

from .. import condmap, condset
from ..condmap import (
    CondFunction,
    apply,
    choice,
    compare_total,
    compose,
    cond_card,
    cond_finite_bijection,
    family_union_pointwise,
    finite_intersection,
    finite_union,
    generated_order,
    image,
    interval_set,
    is_bijective,
    is_injective,
    make_family,
)
from ..boolalg import Condition, complement, is_partition
from ..condnum import CondNat, constant
from ..condset import (
    CondElement,
    CondSet,
    CondSubset,
    _subset,
    cond_intersection,
    cond_union,
    full,
    restrict,
    subset_leq,
)
from . import generators as gen
from .registry import CaseParams, Law, LawSuite, SuiteRegistry

FAMILY_SIZE = 3


@dataclass
class FunctionsCase:
    X: CondSet
    Y: CondSet
    Z: CondSet
    f: CondFunction
    g: CondFunction
    U1: CondSubset
    U2: CondSubset
    V1: CondSubset
    V2: CondSubset
    W: CondSubset
    x: CondElement
    y: CondElement
    b: Condition
    family: condmap.SubsetFamily
    n: CondNat


@SuiteRegistry.register(
    "functions",
    description="Image and preimage identities of conditional functions",
    laws=[
        "image_union", "preimage_union", "image_intersection", "image_intersection_injective",
        "preimage_intersection", "image_complement", "preimage_complement", "image_monotone",
        "preimage_monotone", "preimage_of_image", "image_of_preimage", "compose_image",
        "compose_preimage", "apply_restrict", "compare_partition", "cardinality", "choice",
        "finite_union", "finite_intersection",
    ],
    order=20,
)
class FunctionsSuite(LawSuite):

    def build(self, params: CaseParams) -> FunctionsCase:
        rng = params.rng()
        A = gen.algebra(rng, params.atoms)
        X = gen.cond_set(rng, A, params.carrier, "X")
        Y = gen.cond_set(rng, A, params.carrier, "Y")
        Z = gen.cond_set(rng, A, params.carrier, "Z")
        f = gen.function(rng, X, Y, injective=rng.random() < 0.5)
        g = gen.function(rng, Y, Z)
        U1, U2 = gen.subset(rng, X), gen.subset(rng, X)
        V1, V2 = gen.subset(rng, Y), gen.subset(rng, Y)
        W = gen.subset(rng, Z)
        x, y = gen.element(rng, X), gen.element(rng, X)
        b = gen.condition(rng, A)
        index = interval_set(constant(A, FAMILY_SIZE, CondNat))
        family = make_family(index, X, {
            a: {i: gen.values(rng, X.carrier(a)) for i in index.carrier(a)} for a in A.atoms
        })
        n = CondNat(A, tuple((a, rng.randint(1, FAMILY_SIZE)) for a in A.atoms))
        return FunctionsCase(X, Y, Z, f, g, U1, U2, V1, V2, W, x, y, b, family, n)

    def laws(self, case: FunctionsCase) -> Iterator[Law]:
        f, g = case.f, case.g
        U1, U2, V1, V2 = case.U1, case.U2, case.V1, case.V2
        pre = condmap.preimage
        c = condset.cond_complement
        X = case.X

        yield "image_union", image(f, cond_union([U1, U2])) == cond_union([image(f, U1), image(f, U2)])
        yield "preimage_union", pre(f, cond_union([V1, V2])) == cond_union([pre(f, V1), pre(f, V2)], X)
        meet_image = image(f, cond_intersection([U1, U2]))
        image_meet = cond_intersection([image(f, U1), image(f, U2)])
        yield "image_intersection", subset_leq(meet_image, image_meet)
        yield "image_intersection_injective", not is_injective(f) or meet_image == image_meet
        yield "preimage_intersection", pre(f, cond_intersection([V1, V2])) == cond_intersection([pre(f, V1), pre(f, V2)], X)
        fX = image(f, full(X))
        yield "image_complement", subset_leq(cond_intersection([c(image(f, U1)), fX]), image(f, c(U1)))
        yield "preimage_complement", pre(f, c(V1)) == c(pre(f, V1))

        bigger_U = cond_union([U1, U2])
        bigger_V = cond_union([V1, V2])
        yield "image_monotone", subset_leq(image(f, U1), image(f, bigger_U))
        yield "preimage_monotone", subset_leq(pre(f, V1), pre(f, bigger_V))

        back = pre(f, image(f, U1))
        yield "preimage_of_image", subset_leq(U1, back) and (not is_injective(f) or back == U1)
        forth = image(f, pre(f, V1))
        yield "image_of_preimage", subset_leq(forth, V1) and (not subset_leq(V1, fX) or forth == V1)

        gf = compose(g, f)
        yield "compose_image", image(gf, U1) == image(g, image(f, U1))
        yield "compose_preimage", pre(gf, case.W) == pre(f, pre(g, case.W))
        yield "apply_restrict", apply(f, restrict(case.x, case.b)) == restrict(apply(f, case.x), case.b)

        p = compare_total(generated_order(X), case.x, case.y)
        lt, gt, eq = (set(part.members) for part in p)
        pointwise = all(
            (a in lt) == (case.x.value(a) < case.y.value(a))
            and (a in gt) == (case.x.value(a) > case.y.value(a))
            and (a in eq) == (case.x.value(a) == case.y.value(a))
            for a in X.algebra.atoms
        )
        yield "compare_partition", is_partition(p) and p.base.is_one and pointwise

        # fill U1 up to 1 with the whole carrier off its support
        on_one = cond_union([U1, restrict(full(X), complement(U1.support))])
        n = cond_card(on_one)
        yield "cardinality", (
            all(n.value(a) == len(on_one.at(a)) for a in X.algebra.atoms)
            and is_bijective(cond_finite_bijection(on_one))
        )

        family = case.family
        chosen = choice(family)
        yield "choice", all(
            chosen.at(a)[i] in family.at(a, i) for a in X.algebra.atoms for i in family.index.carrier(a)
        )

        yield "finite_union", finite_union(family, case.n) == family_union_pointwise(family, case.n)
        expected = {}
        for a in X.algebra.atoms:
            common = frozenset.intersection(*(family.at(a, k) for k in range(1, int(case.n.value(a)) + 1)))
            if common:
                expected[a] = common
        yield "finite_intersection", finite_intersection(family, case.n) == _subset(X, expected)

    def describe(self, case: FunctionsCase) -> Dict[str, Any]:
        return {
            "algebra": case.X.algebra.to_json(),
            "sets": {"X": case.X.to_json(), "Y": case.Y.to_json(), "Z": case.Z.to_json()},
            "functions": {"f": case.f.to_json(), "g": case.g.to_json()},
            "subsets": {
                "U1": case.U1.to_json(), "U2": case.U2.to_json(),
                "V1": case.V1.to_json(), "V2": case.V2.to_json(), "W": case.W.to_json(),
            },
            "elements": {"x": case.x.to_json(), "y": case.y.to_json()},
            "condition": case.b.to_json(),
            "n": case.n.to_json(),
        }
