"""Conditional linear algebra: duality, Hahn-Banach, separation, polars and norms."""

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterator, List

from ..base import NotDisjoint
from ..boolalg import Algebra
from ..condlin import (
    CondLinFunctional,
    CondMatrix,
    PolyhedralSublinear,
    VPolytope,
    _rank,
    alaoglu_certificate,
    bipolar_check,
    conv_hull,
    contains,
    duality_coeffs,
    hb_extend,
    hull_contains,
    is_sigma_bounded,
    l1_ball,
    linf_ball,
    minkowski_add,
    norm_eval,
    operator_norm,
    polar_contains,
    reconstruct,
    scale,
    separate,
    sigma_bound,
    span_membership,
    union,
    verify_extension,
    verify_separation,
)
from ..condnum import CondNat, CondReal, CondRealVec, constant, vadd, vscale
from ..lp import LPProblem, lp_solve, verify
from . import generators as gen
from .registry import CaseParams, Law, LawSuite, SuiteRegistry

SAMPLES = 3
BIPOLAR_SAMPLES = 200
# Far enough along the first axis to clear any generated polytope.
SHIFT = 20


@dataclass
class LinearCase:
    A: Algebra
    dims: Dict[str, int]
    Y: VPolytope
    Z: VPolytope
    fs: List[CondLinFunctional]
    lams: List[CondReal]
    f: CondLinFunctional
    ys: List[CondRealVec]
    x: CondRealVec
    k: PolyhedralSublinear
    w: Dict[str, tuple]
    basis: List[CondRealVec]
    lam: CondReal
    radius: Fraction
    eps: CondReal
    samples: List[CondRealVec]
    bipolar_samples: List[CondRealVec]
    lp: LPProblem


def _shifted(Y: VPolytope) -> VPolytope:
    gens = tuple((a, tuple((p[0] + SHIFT,) + p[1:] for p in Y.effective(a))) for a in Y.support.atoms())
    return VPolytope(Y.algebra, gens, "hull")


def _first(Y: VPolytope, Z: VPolytope) -> CondRealVec:
    return CondRealVec(Y.algebra, tuple(
        (a, tuple(u + v for u, v in zip(Y.effective(a)[0], Z.effective(a)[0]))) for a in Y.support.atoms()
    ))


@SuiteRegistry.register(
    "linear",
    description="Duality, extension, separation, polar and norm laws on conditional R^n",
    laws=[
        "duality_sound", "duality_complete", "span_sound", "span_complete", "hb_extension",
        "separation", "separation_weak", "not_disjoint", "polar_antitone", "polar_union",
        "polar_scaling", "sigma_bound", "bipolar", "bipolar_one_sided", "minkowski", "conv_hull",
        "norm_linf", "norm_l1", "operator_norm", "alaoglu", "lp_certificate",
    ],
    order=60,
)
class LinearSuite(LawSuite):

    def build(self, params: CaseParams) -> LinearCase:
        rng = params.rng()
        A = gen.algebra(rng, params.atoms)
        d = gen.dims(rng, A, params.dim)
        Y, Z = gen.polytope(rng, A, d), gen.polytope(rng, A, d)
        fs = [gen.functional(rng, A, d) for _ in range(rng.randint(1, 3))]
        lams = [gen.number(rng, A) for _ in fs]
        f = gen.functional(rng, A, d)
        ys = [gen.vector(rng, A, d) for _ in range(2)]
        x = gen.vector(rng, A, d)
        k = gen.sublinear(rng, A, d)
        w = {}
        for a in A.atoms:
            p, q = rng.choice(k.at(a)), rng.choice(k.at(a))
            w[a] = tuple((u + v) / 2 for u, v in zip(p, q))
        b1 = gen.vector(rng, A, d)
        b1 = CondRealVec(A, tuple((a, v if any(v) else (Fraction(1),) + v[1:]) for a, v in b1.entries))
        basis = [b1]
        b2 = gen.vector(rng, A, d)
        if all(_rank([b1.at(a), b2.at(a)]) == 2 for a in A.atoms):
            basis.append(b2)
        lam = CondReal(A, tuple((a, Fraction(rng.randint(1, 6), rng.randint(1, 3))) for a in A.atoms))
        radius = Fraction(rng.randint(1, 4), rng.randint(1, 2))
        eps = CondReal(A, tuple((a, Fraction(1, rng.randint(1, 4))) for a in A.atoms))
        samples = [
            CondRealVec(A, tuple((a, tuple(c / 8 for c in v)) for a, v in gen.vector(rng, A, d).entries))
            for _ in range(SAMPLES)
        ]
        lp = gen.lp_problem(rng, rng.randint(1, 3), rng.randint(1, 3))
        bipolar_samples = gen.sample_points(rng, A, d, BIPOLAR_SAMPLES)
        return LinearCase(A, d, Y, Z, fs, lams, f, ys, x, k, w, basis, lam, radius, eps, samples, bipolar_samples, lp)

    def laws(self, case: LinearCase) -> Iterator[Law]:
        A, fs = case.A, case.fs
        atoms = A.atoms

        target = reconstruct(case.lams, fs)
        result = duality_coeffs(target, fs)
        yield "duality_sound", result.representable and reconstruct(result.coefficients, fs) == target

        result = duality_coeffs(case.f, fs)
        ranks_agree = all(
            _rank([g.at(a) for g in fs] + [case.f.at(a)]) == _rank([g.at(a) for g in fs]) for a in atoms
        )
        if result.representable:
            complete = ranks_agree and reconstruct(result.coefficients, fs) == case.f
        else:
            a, v = result.witness
            complete = (
                not ranks_agree
                and all(sum(c * u for c, u in zip(g.at(a), v)) == 0 for g in fs)
                and sum(c * u for c, u in zip(case.f.at(a), v)) != 0
            )
        yield "duality_complete", complete

        y1, y2 = case.ys
        l1, l2 = case.lams[0], case.lams[-1]
        combo = vadd(vscale(l1, y1), vscale(l2, y2))
        span = span_membership([y1, y2], combo)
        yield "span_sound", span.member and vadd(
            vscale(span.coefficients[0], y1), vscale(span.coefficients[1], y2)
        ) == combo
        span = span_membership([y1, y2], case.x)
        in_span = all(_rank([y1.at(a), y2.at(a), case.x.at(a)]) == _rank([y1.at(a), y2.at(a)]) for a in atoms)
        yield "span_complete", span.member == in_span and (
            span.member or _rank([y1.at(span.witness), y2.at(span.witness), case.x.at(span.witness)])
            > _rank([y1.at(span.witness), y2.at(span.witness)])
        )

        k, basis = case.k, case.basis
        values = [
            CondReal(A, tuple((a, sum((c * u for c, u in zip(case.w[a], b.at(a))), Fraction(0))) for a in atoms))
            for b in basis
        ]
        fhat = hb_extend(basis, values, k)
        yield "hb_extension", verify_extension(fhat, basis, values, k, case.samples + case.ys)

        Y, Z = case.Y, case.Z
        far = _shifted(Y)
        yield "separation", verify_separation(Y, far, separate(Y, far))
        weak = separate(Y, far, strict=False)
        yield "separation_weak", weak.eps == constant(A, 0) and verify_separation(Y, far, weak)
        try:
            separate(Y, Y)
            overlap = False
        except NotDisjoint as e:
            overlap = e.condition == A.one
        yield "not_disjoint", overlap

        both = union([Y, Z])
        yield "polar_antitone", all(
            not polar_contains(both, xp) or polar_contains(Y, xp) for xp in case.samples
        )
        yield "polar_union", all(
            polar_contains(both, xp) == (polar_contains(Y, xp) and polar_contains(Z, xp)) for xp in case.samples
        )
        yield "polar_scaling", all(
            polar_contains(scale(case.lam, Y), xp) == polar_contains(Y, vscale(case.lam, xp)) for xp in case.samples
        )

        xp = case.f
        bound = sigma_bound(Y, xp)
        yield "sigma_bound", is_sigma_bounded(Y, xp, bound) and all(
            abs(xp.value(CondRealVec(A, ((a, g),))).value(a)) <= bound.value(a)
            for a in atoms for g in Y.effective(a)
        )

        yield "bipolar", bipolar_check(Y, case.bipolar_samples).agree
        yield "bipolar_one_sided", bipolar_check(Y, case.bipolar_samples, one_sided=True).agree

        yield "minkowski", contains(minkowski_add(Y, Z), _first(Y, Z))
        hull = conv_hull(Y)
        yield "conv_hull", all(hull_contains(Y, s) == hull_contains(hull, s) for s in case.samples + [case.x])

        dim = CondNat(A, tuple((a, n) for a, n in case.dims.items()))
        x = case.x
        yield "norm_linf", all(
            norm_eval(linf_ball(dim), x).value(a) == max(abs(c) for c in x.at(a)) for a in atoms
        )
        yield "norm_l1", all(
            norm_eval(l1_ball(dim), x).value(a) == sum((abs(c) for c in x.at(a)), Fraction(0)) for a in atoms
        )
        identity = CondMatrix.identity(dim)
        one = constant(A, 1)
        yield "operator_norm", (
            operator_norm(identity, linf_ball(dim), linf_ball(dim)) == one
            and operator_norm(identity, l1_ball(dim), l1_ball(dim)) == one
        )

        U = linf_ball(dim, case.radius)
        cert = alaoglu_certificate(U, case.eps)
        corner = CondRealVec(A, tuple((a, (1 / case.radius,) + (Fraction(0),) * (n - 1)) for a, n in case.dims.items()))
        candidates = [xp for xp in case.samples + [corner] if polar_contains(U, xp)]
        yield "alaoglu", polar_contains(U, corner) and all(cert.box.contains(p) and cert.covers(p) for p in candidates)

        yield "lp_certificate", verify(case.lp, lp_solve(case.lp))

    def describe(self, case: LinearCase) -> Dict[str, Any]:
        return {
            "algebra": case.A.to_json(),
            "dims": case.dims,
            "polytopes": {"Y": case.Y.to_json(), "Z": case.Z.to_json()},
            "functionals": [g.to_json() for g in case.fs],
            "coefficients": [c.to_json() for c in case.lams],
            "f": case.f.to_json(),
            "vectors": {"y1": case.ys[0].to_json(), "y2": case.ys[1].to_json(), "x": case.x.to_json()},
            "sublinear": case.k.to_json(),
            "basis": [b.to_json() for b in case.basis],
            "samples": [s.to_json() for s in case.samples],
            "lp": case.lp.to_json(),
        }
