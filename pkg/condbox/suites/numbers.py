"""Ordered field laws of the conditional reals, metrics, nets and Cauchy sequences."""

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Optional

from .. import condnum
from ..base import NotInvertible
from ..boolalg import Algebra, is_partition
from ..condnum import (
    CauchySeqQ,
    CondInt,
    CondNat,
    CondRat,
    CondReal,
    CondRealVec,
    FiniteMetricSpace,
    RationalBox,
    add,
    archimedean_bound,
    ball_contains,
    cabs,
    cauchy_add,
    cauchy_check,
    cauchy_equiv,
    cauchy_leq,
    cauchy_limit,
    cauchy_modulus,
    cauchy_mul,
    cond_inf,
    cond_sup,
    constant,
    distance_decimal,
    distance_sq,
    dot,
    eps_net,
    heine_borel_finite,
    inv,
    is_nonnegative,
    leq,
    metric_compare,
    metric_triangle,
    mul,
    neg,
    sqrt_bounds,
    sub,
    vadd,
    vscale,
    zero_condition,
)
from . import generators as gen
from .registry import CaseParams, Law, LawSuite, SuiteRegistry

DIGITS = 6
NET_POINTS = 5
MODULUS_WINDOW = 5
# Heine-Borel enumerates open covers, so its spaces stay small.
METRIC_ATOMS = 3
METRIC_CARRIER = 3


@dataclass
class NumbersCase:
    A: Algebra
    x: CondReal
    y: CondReal
    z: CondReal
    eps: CondReal
    m: CondNat
    n: CondNat
    vx: CondRealVec
    vy: CondRealVec
    vz: CondRealVec
    box: RationalBox
    inside: List[CondRealVec]
    metric: Optional[FiniteMetricSpace]
    s: CauchySeqQ
    t: CauchySeqQ
    sequence_seed: int


def _positive(rng, A: Algebra) -> CondReal:
    return CondReal(A, tuple((a, Fraction(rng.randint(1, 8), rng.randint(1, 4))) for a in A.atoms))


@SuiteRegistry.register(
    "numbers",
    description="Conditional number tower, metric and Cauchy sequence laws",
    laws=[
        "add_commutative", "mul_commutative", "add_associative", "mul_associative", "distributive",
        "additive_inverse", "multiplicative_inverse", "tower_ranks", "trichotomy", "order_add",
        "order_mul", "sup_inf", "archimedean", "absolute_value", "ball", "metric_axioms",
        "metric_compare", "distance_decimal", "vector_space", "cauchy_schwarz", "eps_net",
        "heine_borel", "cauchy_modulus", "cauchy_limits", "cauchy_order",
    ],
    order=50,
)
class NumbersSuite(LawSuite):

    def build(self, params: CaseParams) -> NumbersCase:
        rng = params.rng()
        A = gen.algebra(rng, params.atoms)
        x, y, z = (gen.number(rng, A) for _ in range(3))
        eps = _positive(rng, A)
        m, n = gen.number(rng, A, CondNat), gen.number(rng, A, CondNat)
        d = gen.dims(rng, A, params.dim)
        vx, vy, vz = (gen.vector(rng, A, d) for _ in range(3))
        sides = []
        for a in A.atoms:
            lows = gen.coords(rng, d[a])
            sides.append((a, tuple((lo, lo + Fraction(rng.randint(0, 6), 2)) for lo in lows)))
        box = RationalBox(A, tuple(sides))
        inside = [
            CondRealVec(A, tuple(
                (a, tuple(lo + (hi - lo) * Fraction(rng.randint(0, 4), 4) for lo, hi in box.at(a))) for a in A.atoms
            ))
            for _ in range(NET_POINTS)
        ]
        metric = gen.metric_space(rng, A, min(params.carrier, METRIC_CARRIER)) if params.atoms <= METRIC_ATOMS else None
        s, t = gen.sequence(rng, A), gen.sequence(rng, A)
        return NumbersCase(A, x, y, z, eps, m, n, vx, vy, vz, box, inside, metric, s, t, rng.randrange(2 ** 32))

    def laws(self, case: NumbersCase) -> Iterator[Law]:
        A, x, y, z = case.A, case.x, case.y, case.z
        zero, one = constant(A, 0), constant(A, 1)
        compare = condnum.compare

        yield "add_commutative", add(x, y) == add(y, x)
        yield "mul_commutative", mul(x, y) == mul(y, x)
        yield "add_associative", add(add(x, y), z) == add(x, add(y, z))
        yield "mul_associative", mul(mul(x, y), z) == mul(x, mul(y, z))
        yield "distributive", mul(x, add(y, z)) == add(mul(x, y), mul(x, z))
        yield "additive_inverse", add(x, neg(x)) == zero and add(x, zero) == x

        zeros = A.condition(a for a in A.atoms if x.value(a) == 0)
        try:
            r = inv(x)
            inverse = zeros.is_zero and mul(x, r) == one
        except NotInvertible as e:
            inverse = e.condition == zeros == zero_condition(x)
        yield "multiplicative_inverse", inverse

        yield "tower_ranks", (
            isinstance(add(case.m, case.n), CondNat)
            and isinstance(sub(case.m, case.n), CondInt)
            and isinstance(inv(case.m), CondRat)
            and isinstance(add(case.m, x), CondReal)
        )

        p = compare(x, y)
        lt, gt, eq = (set(part.members) for part in p)
        yield "trichotomy", (
            is_partition(p)
            and p.base.is_one
            and all((a in lt) == (x.value(a) < y.value(a)) and (a in gt) == (x.value(a) > y.value(a))
                    and (a in eq) == (x.value(a) == y.value(a)) for a in A.atoms)
            and compare(x, x)[2].is_one
        )

        x_le_y = leq(x, y)
        yield "order_add", not x_le_y or leq(add(x, z), add(y, z))
        yield "order_mul", not (x_le_y and is_nonnegative(z)) or leq(mul(x, z), mul(y, z))

        sup, inf = cond_sup([x, y, z]), cond_inf([x, y, z])
        yield "sup_inf", (
            all(leq(g, sup) and leq(inf, g) for g in (x, y, z))
            and all(sup.value(a) in (x.value(a), y.value(a), z.value(a)) for a in A.atoms)
            and all(inf.value(a) in (x.value(a), y.value(a), z.value(a)) for a in A.atoms)
        )

        bound = archimedean_bound(x)
        yield "archimedean", all(
            bound.value(a) > x.value(a) and (bound.value(a) == 1 or bound.value(a) - 1 <= x.value(a))
            for a in A.atoms
        )

        yield "absolute_value", (
            is_nonnegative(cabs(x))
            and cabs(mul(x, y)) == mul(cabs(x), cabs(y))
            and leq(cabs(add(x, y)), add(cabs(x), cabs(y)))
        )

        eps = case.eps
        yield "ball", ball_contains(x, eps, x) and ball_contains(x, eps, y) == all(
            abs(x.value(a) - y.value(a)) < eps.value(a) for a in A.atoms
        )

        vx, vy, vz = case.vx, case.vy, case.vz
        dxy = distance_sq(vx, vy)
        yield "metric_axioms", (
            distance_sq(vx, vx) == zero
            and dxy == distance_sq(vy, vx)
            and all((dxy.value(a) == 0) == (vx.at(a) == vy.at(a)) for a in A.atoms)
            and metric_triangle(vx, vy, vz)
        )
        mp = metric_compare(vx, vy, eps)
        yield "metric_compare", all(
            (a in set(mp[0].members)) == (dxy.value(a) < eps.value(a) ** 2) for a in A.atoms
        )
        decimals = distance_decimal(vx, vy, DIGITS)
        slack = Fraction(1, 10 ** DIGITS)
        within = True
        for a in A.atoms:
            lo, hi = sqrt_bounds(dxy.value(a), DIGITS)
            within = within and lo - slack <= Fraction(decimals[a]) <= hi + slack
        yield "distance_decimal", within

        lam = x
        yield "vector_space", (
            vadd(vx, vy) == vadd(vy, vx)
            and vscale(lam, vadd(vx, vy)) == vadd(vscale(lam, vx), vscale(lam, vy))
            and dot(vx, vy) == dot(vy, vx)
        )
        xy, xx, yy = dot(vx, vy), dot(vx, vx), dot(vy, vy)
        yield "cauchy_schwarz", all(xy.value(a) ** 2 <= xx.value(a) * yy.value(a) for a in A.atoms)

        net = eps_net(case.box, eps)
        yield "eps_net", (
            all(case.box.contains(p) and net.covers(p) for p in case.inside)
            and all(net.count.value(a) == len(net.at(a)) for a in A.atoms)
        )

        if case.metric is not None:
            report = heine_borel_finite(case.metric, random.Random(case.sequence_seed))
            yield "heine_borel", report.agree and report.cover_compact and report.cauchy_sequences > 0

        s, t = case.s, case.t
        n0 = cauchy_modulus(s, eps)
        yield "cauchy_modulus", cauchy_check(s, eps) and all(
            abs(s.at(a).term(i) - s.at(a).term(j)) < eps.value(a)
            for a in A.atoms
            for i in range(int(n0.value(a)), int(n0.value(a)) + MODULUS_WINDOW)
            for j in range(int(n0.value(a)), int(n0.value(a)) + MODULUS_WINDOW)
        )
        ls, lt_ = cauchy_limit(s), cauchy_limit(t)
        yield "cauchy_limits", (
            cauchy_limit(cauchy_add(s, t)) == add(ls, lt_)
            and cauchy_limit(cauchy_mul(s, t)) == mul(ls, lt_)
            and cauchy_check(cauchy_add(s, t), eps)
            and cauchy_check(cauchy_mul(s, t), eps)
        )
        yield "cauchy_order", (
            cauchy_leq(s, t) == leq(ls, lt_)
            and cauchy_equiv(s, s)
            and cauchy_equiv(s, t) == (ls == lt_)
        )

    def describe(self, case: NumbersCase) -> Dict[str, Any]:
        return {
            "algebra": case.A.to_json(),
            "numbers": {k: getattr(case, k).to_json() for k in ("x", "y", "z", "eps", "m", "n")},
            "vectors": {k: getattr(case, k).to_json() for k in ("vx", "vy", "vz")},
            "box": {a: [[str(lo), str(hi)] for lo, hi in ivs] for a, ivs in case.box.sides},
            "metric_space": case.metric.space.to_json() if case.metric is not None else None,
            "sequences": {"s": case.s.to_json(), "t": case.t.to_json()},
            "sequence_seed": case.sequence_seed,
        }
