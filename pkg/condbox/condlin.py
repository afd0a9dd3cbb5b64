"""
Conditional linear algebra on 𝐑ⁿ over a finite algebra.

Vectors, functionals and polytopes are stored per atom and the dimension may
differ between atoms. Every geometric question reduces to an exact per-atom
linear program (condbox.lp) or an exact rational solve (sympy), and the
per-atom answers are stitched back into conditional objects.
"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import sympy

from .base import (
    AlgebraMismatch,
    BallNotAbsorbing,
    BallNotCircled,
    DimMismatch,
    DominationViolated,
    EmptyGenerators,
    EpsNotPositive,
    InvalidValue,
    NotDisjoint,
    SupportMismatch,
    format_fraction,
    to_fraction,
)
from .boolalg import Algebra, Condition
from .condnum import CondNat, CondNumber, CondReal, CondRealVec, EpsNet, RationalBox, eps_net, is_positive
from .lp import Constraint, LPProblem, OPTIMAL, UNBOUNDED, lp_solve

logger = logging.getLogger(__name__)

Vec = Tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)

KINDS = ("hull", "circled", "points")


def _dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), ZERO)


def _vec(values: Sequence[Any]) -> Vec:
    return tuple(to_fraction(c) for c in values)


def _frac(r) -> Fraction:
    r = sympy.Rational(r)
    return Fraction(int(r.p), int(r.q))


def _matrix(rows: Sequence[Sequence[Fraction]]) -> sympy.Matrix:
    return sympy.Matrix([[sympy.Rational(c.numerator, c.denominator) for c in row] for row in rows])


def _unit(n: int, i: int, sign: int = 1) -> Vec:
    return tuple(Fraction(sign) if j == i else ZERO for j in range(n))


def _per_atom(algebra: Algebra, data: Mapping[str, Any], convert: Callable[[Any], Any]) -> Tuple[Tuple[str, Any], ...]:
    order = {a: i for i, a in enumerate(algebra.atoms)}
    out = []
    for atom, value in data.items():
        if atom not in order:
            raise InvalidValue(f"unknown atom {atom!r}")
        out.append((atom, convert(value)))
    out.sort(key=lambda av: order[av[0]])
    return tuple(out)


# Domain types
@dataclass(frozen=True)
class CondLinFunctional:
    """x ↦ ⟨coeffs, x⟩ per atom."""
    algebra: Algebra = field(repr=False)
    coeffs: Tuple[Tuple[str, Vec], ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _per_atom(self.algebra, dict(self.coeffs), _vec))

    def at(self, atom: str) -> Vec:
        return dict(self.coeffs)[atom]

    @property
    def support(self) -> Condition:
        return self.algebra.condition(a for a, _ in self.coeffs)

    @property
    def dim(self) -> CondNat:
        return CondNat(self.algebra, tuple((a, len(w)) for a, w in self.coeffs))

    def value(self, x: CondRealVec) -> CondReal:
        _check_dims(self.algebra, self.coeffs, x)
        return CondReal(self.algebra, tuple((a, _dot(self.at(a), x.at(a))) for a in x.support.atoms()))

    def __call__(self, x: CondRealVec) -> CondReal:
        return self.value(x)

    def to_json(self) -> Dict[str, List[str]]:
        return {a: [format_fraction(c) for c in w] for a, w in self.coeffs}

    @classmethod
    def from_json(cls, algebra: Algebra, data: Mapping[str, Any]) -> "CondLinFunctional":
        if not isinstance(data, Mapping):
            raise InvalidValue("functionals are objects mapping atoms to coefficient lists")
        return cls(algebra, tuple(data.items()))


@dataclass(frozen=True)
class VPolytope:
    """Per-atom convex hull of generator points.

    kind "circled" means the hull of ±generators, "points" the finite set itself.
    """
    algebra: Algebra = field(repr=False)
    generators: Tuple[Tuple[str, Tuple[Vec, ...]], ...]
    kind: str = "hull"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidValue(f"unknown polytope kind {self.kind!r}")

        def points(pts):
            pts = tuple(_vec(p) for p in pts)
            if not pts:
                raise InvalidValue("a polytope needs a generator at every atom")
            if len({len(p) for p in pts}) != 1:
                raise DimMismatch("generators of different lengths")
            return tuple(dict.fromkeys(pts))

        object.__setattr__(self, "generators", _per_atom(self.algebra, dict(self.generators), points))

    def at(self, atom: str) -> Tuple[Vec, ...]:
        return dict(self.generators)[atom]

    def effective(self, atom: str) -> Tuple[Vec, ...]:
        """Generators whose plain convex hull is the set at this atom."""
        pts = self.at(atom)
        if self.kind == "circled":
            return tuple(dict.fromkeys(pts + tuple(tuple(-c for c in p) for p in pts)))
        return pts

    @property
    def support(self) -> Condition:
        return self.algebra.condition(a for a, _ in self.generators)

    @property
    def dim(self) -> CondNat:
        return CondNat(self.algebra, tuple((a, len(pts[0])) for a, pts in self.generators))

    def local_dim(self, atom: str) -> int:
        return len(self.at(atom)[0])

    def to_json(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "generators": {a: [[format_fraction(c) for c in p] for p in pts] for a, pts in self.generators},
        }

    @classmethod
    def from_json(cls, algebra: Algebra, data: Mapping[str, Any]) -> "VPolytope":
        if not isinstance(data, Mapping):
            raise InvalidValue("polytopes are objects")
        if "generators" in data:
            return cls(algebra, tuple(data["generators"].items()), data.get("kind", "hull"))
        return cls(algebra, tuple(data.items()))


@dataclass(frozen=True)
class PolyhedralSublinear:
    """k(x) = max_j ⟨g_j, x⟩ per atom."""
    algebra: Algebra = field(repr=False)
    pieces: Tuple[Tuple[str, Tuple[Vec, ...]], ...]

    def __post_init__(self):
        def rows(pts):
            pts = tuple(_vec(p) for p in pts)
            if not pts:
                raise EmptyGenerators("a sublinear function needs at least one piece")
            return pts

        object.__setattr__(self, "pieces", _per_atom(self.algebra, dict(self.pieces), rows))

    def at(self, atom: str) -> Tuple[Vec, ...]:
        return dict(self.pieces)[atom]

    def value_at(self, atom: str, x: Sequence[Fraction]) -> Fraction:
        return max(_dot(g, x) for g in self.at(atom))

    def value(self, x: CondRealVec) -> CondReal:
        _check_dims(self.algebra, tuple((a, g[0]) for a, g in self.pieces), x)
        return CondReal(self.algebra, tuple((a, self.value_at(a, x.at(a))) for a in x.support.atoms()))

    def to_json(self) -> Dict[str, Any]:
        return {a: [[format_fraction(c) for c in g] for g in gs] for a, gs in self.pieces}

    @classmethod
    def from_json(cls, algebra: Algebra, data: Mapping[str, Any]) -> "PolyhedralSublinear":
        return cls(algebra, tuple(data.items()))


@dataclass(frozen=True)
class HPolyhedron:
    """Per atom the set {x : a·x ≤ b for every row (a, b)}."""
    algebra: Algebra = field(repr=False)
    rows: Tuple[Tuple[str, Tuple[Tuple[Vec, Fraction], ...]], ...]
    dims: Tuple[Tuple[str, int], ...] = ()

    def at(self, atom: str) -> Tuple[Tuple[Vec, Fraction], ...]:
        return dict(self.rows)[atom]

    def local_dim(self, atom: str) -> int:
        return dict(self.dims)[atom]

    def contains_at(self, atom: str, x: Sequence[Fraction]) -> bool:
        return all(_dot(a, x) <= b for a, b in self.at(atom))

    def contains(self, x: CondRealVec) -> bool:
        return all(self.contains_at(a, x.at(a)) for a in x.support.atoms())

    def intersect(self, other: "HPolyhedron") -> "HPolyhedron":
        if self.algebra != other.algebra:
            raise AlgebraMismatch("polyhedra over different algebras")
        rows = tuple((a, r + other.at(a)) for a, r in self.rows if a in dict(other.rows))
        return HPolyhedron(self.algebra, rows, self.dims)

    def to_json(self) -> Dict[str, Any]:
        return {
            a: [{"a": [format_fraction(c) for c in lhs], "b": format_fraction(rhs)} for lhs, rhs in r]
            for a, r in self.rows
        }


@dataclass(frozen=True)
class CondMatrix:
    """A linear map 𝐑ⁿ → 𝐑ᵐ per atom, stored by rows."""
    algebra: Algebra = field(repr=False)
    rows: Tuple[Tuple[str, Tuple[Vec, ...]], ...]
    columns: Tuple[Tuple[str, int], ...] = ()

    def __post_init__(self):
        widths = dict(self.columns)

        def matrix(rows):
            rows = tuple(_vec(r) for r in rows)
            if len({len(r) for r in rows}) > 1:
                raise DimMismatch("matrix rows of different lengths")
            return rows

        clean = _per_atom(self.algebra, dict(self.rows), matrix)
        cols = tuple((a, widths.get(a, len(r[0]) if r else 0)) for a, r in clean)
        object.__setattr__(self, "rows", clean)
        object.__setattr__(self, "columns", cols)

    def at(self, atom: str) -> Tuple[Vec, ...]:
        return dict(self.rows)[atom]

    def apply(self, x: CondRealVec) -> CondRealVec:
        widths = dict(self.columns)
        entries = []
        for a in x.support.atoms():
            if widths[a] != len(x.at(a)):
                raise DimMismatch(f"matrix with {widths[a]} columns applied to a {len(x.at(a))}-vector at {a!r}")
            entries.append((a, tuple(_dot(r, x.at(a)) for r in self.at(a))))
        return CondRealVec(self.algebra, tuple(entries))

    def to_json(self) -> Dict[str, Any]:
        return {a: [[format_fraction(c) for c in r] for r in rows] for a, rows in self.rows}

    @classmethod
    def identity(cls, dim: CondNat) -> "CondMatrix":
        return cls(dim.algebra, tuple((a, tuple(_unit(int(n), i) for i in range(int(n)))) for a, n in dim.values))


def _check_dims(algebra: Algebra, per_atom: Sequence[Tuple[str, Sequence[Any]]], x: CondRealVec) -> None:
    if x.algebra != algebra:
        raise AlgebraMismatch("vector over another algebra")
    lengths = {a: len(v) for a, v in per_atom}
    for a in x.support.atoms():
        if a not in lengths:
            raise SupportMismatch(f"no data at {a!r}")
        if lengths[a] != len(x.at(a)):
            raise DimMismatch(f"dimension {len(x.at(a))} against {lengths[a]} at {a!r}")


def _common_atoms(*polys: VPolytope) -> List[str]:
    first = polys[0]
    for P in polys[1:]:
        if P.algebra != first.algebra:
            raise AlgebraMismatch("polytopes over different algebras")
        if P.support != first.support:
            raise SupportMismatch("polytopes live on different conditions")
        for a in first.support.atoms():
            if P.local_dim(a) != first.local_dim(a):
                raise DimMismatch(f"dimensions {first.local_dim(a)} and {P.local_dim(a)} differ at {a!r}")
    return first.support.atoms()


# Per-atom LPs
def _hull_problem(points: Sequence[Vec], x: Sequence[Fraction]) -> LPProblem:
    """λ ≥ 0, Σλ = 1, Σλ p = x."""
    k = len(points)
    rows = [Constraint(tuple([ONE] * k), "=", ONE)]
    for i in range(len(x)):
        rows.append(Constraint(tuple(p[i] for p in points), "=", x[i]))
    return LPProblem(tuple([ZERO] * k), tuple(rows), "max")


def in_hull(points: Sequence[Vec], x: Sequence[Fraction]) -> bool:
    return lp_solve(_hull_problem(points, x)).status == OPTIMAL


def reach(points: Sequence[Vec], d: Sequence[Fraction]) -> Optional[Fraction]:
    """max t ≥ 0 with t·d in conv(points); None when 0 is outside the hull."""
    k = len(points)
    rows = [Constraint(tuple([ONE] * k) + (ZERO,), "=", ONE)]
    for i in range(len(d)):
        rows.append(Constraint(tuple(p[i] for p in points) + (-d[i],), "=", ZERO))
    result = lp_solve(LPProblem(tuple([ZERO] * k) + (ONE,), tuple(rows), "max"))
    if result.status != OPTIMAL:
        return None
    return result.objective


def vertices(points: Sequence[Vec]) -> Tuple[Vec, ...]:
    """Generators not in the hull of the others."""
    pts = list(dict.fromkeys(points))
    kept = []
    for i, p in enumerate(pts):
        others = [q for j, q in enumerate(pts) if j != i and (j > i or q in kept)]
        if not others or not in_hull(others, p):
            kept.append(p)
    return tuple(kept)


# Minkowski arithmetic and convexity
def minkowski_add(Y: VPolytope, Z: VPolytope) -> VPolytope:
    """Y + Z: pairwise generator sums."""
    atoms = _common_atoms(Y, Z)
    gens = []
    for a in atoms:
        sums = [tuple(u + v for u, v in zip(p, q)) for p in Y.effective(a) for q in Z.effective(a)]
        gens.append((a, tuple(sums)))
    kind = "points" if Y.kind == Z.kind == "points" else "hull"
    return VPolytope(Y.algebra, tuple(gens), kind)


def scale(lam: CondNumber, Y: VPolytope) -> VPolytope:
    """λY with λ a conditional real on the support of Y."""
    if lam.algebra != Y.algebra:
        raise AlgebraMismatch("scalar over another algebra")
    gens = []
    for a in Y.support.atoms():
        t = lam.value(a)
        gens.append((a, tuple(tuple(t * c for c in p) for p in Y.at(a))))
    return VPolytope(Y.algebra, tuple(gens), Y.kind)


def conv_step(Y: VPolytope) -> VPolytope:
    """One round of {λx + (1−λ)y : λ ∈ {0, 1/2, 1}} over the generator representatives."""
    half = Fraction(1, 2)
    gens = []
    for a in Y.support.atoms():
        pts = Y.effective(a)
        out = dict.fromkeys(pts)
        for p, q in itertools.combinations(pts, 2):
            out.setdefault(tuple(half * u + half * v for u, v in zip(p, q)), None)
        gens.append((a, tuple(out)))
    return VPolytope(Y.algebra, tuple(gens), "points")


def conv_hull(Y: VPolytope) -> VPolytope:
    """The per-atom classical convex hull, generated by its vertices."""
    gens = tuple((a, vertices(Y.effective(a))) for a in Y.support.atoms())
    return VPolytope(Y.algebra, gens, "hull")


def hull_contains(Y: VPolytope, x: CondRealVec) -> bool:
    """x ∈ conv(Y) at every atom of the support of x."""
    _check_dims(Y.algebra, tuple((a, Y.at(a)[0]) for a in Y.support.atoms()), x)
    return all(in_hull(Y.effective(a), x.at(a)) for a in x.support.atoms())


def contains(Y: VPolytope, x: CondRealVec) -> bool:
    """Membership in Y itself; a finite point set is not filled in."""
    if Y.kind == "points":
        _check_dims(Y.algebra, tuple((a, Y.at(a)[0]) for a in Y.support.atoms()), x)
        return all(tuple(x.at(a)) in Y.at(a) for a in x.support.atoms())
    return hull_contains(Y, x)


def is_convex(Y: VPolytope) -> bool:
    """Y = conv(Y): generators of conv_step(Y) stay in Y."""
    if Y.kind != "points":
        return True
    step = conv_step(Y)
    return all(p in Y.at(a) for a in Y.support.atoms() for p in step.at(a))


def is_circled(Y: VPolytope) -> bool:
    """λy ∈ Y for |λ| ≤ 1; for a convex set, symmetry under y ↦ −y."""
    if Y.kind == "circled":
        return True
    for a in Y.support.atoms():
        pts = Y.at(a)
        if Y.kind == "points":
            if any(any(c != 0 for c in p) for p in pts):
                return False
            continue
        if not all(in_hull(pts, tuple(-c for c in p)) for p in pts):
            return False
    return True


def is_absorbing(Y: VPolytope) -> bool:
    """0 lies in the interior at every atom: every ±e_i direction has positive reach."""
    if Y.kind == "points":
        return False
    for a in Y.support.atoms():
        n = Y.local_dim(a)
        pts = Y.effective(a)
        for i in range(n):
            for sign in (1, -1):
                t = reach(pts, _unit(n, i, sign))
                if t is None or t <= 0:
                    return False
    return True


# Span and duality
@dataclass(frozen=True)
class SpanResult:
    member: bool
    coefficients: Optional[Tuple[CondReal, ...]] = None
    witness: Optional[str] = None

    def to_json(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"member": self.member}
        if self.coefficients is not None:
            out["coefficients"] = [c.to_json() for c in self.coefficients]
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def _stitch(algebra: Algebra, per_atom: Mapping[str, Sequence[Fraction]], count: int) -> Tuple[CondReal, ...]:
    return tuple(CondReal(algebra, tuple((a, vals[k]) for a, vals in per_atom.items())) for k in range(count))


def span_membership(Y: Sequence[CondRealVec], x: CondRealVec) -> SpanResult:
    """x = ∑ λ_k y_k, solved exactly per atom; free parameters are set to 0."""
    if not Y:
        raise EmptyGenerators("span of an empty family")
    algebra = x.algebra
    coeffs: Dict[str, List[Fraction]] = {}
    for a in x.support.atoms():
        cols = []
        for y in Y:
            if y.algebra != algebra:
                raise AlgebraMismatch("vectors over different algebras")
            if len(y.at(a)) != len(x.at(a)):
                raise DimMismatch(f"generator of dimension {len(y.at(a))} at {a!r}")
            cols.append(y.at(a))
        M = _matrix(cols).T
        b = _matrix([[c] for c in x.at(a)])
        try:
            sol, params = M.gauss_jordan_solve(b)
        except ValueError:
            logger.debug(f"[Linear] {x.to_json()} outside the span at {a}")
            return SpanResult(False, witness=a)
        sol = sol.subs({p: 0 for p in params})
        coeffs[a] = [_frac(v) for v in sol]
    return SpanResult(True, _stitch(algebra, coeffs, len(Y)))


@dataclass(frozen=True)
class DualityResult:
    """Coefficients with f = ∑ λ_k f_k, or a kernel vector separating f from the family."""
    coefficients: Optional[Tuple[CondReal, ...]]
    nonzero: bool = False
    witness: Optional[Tuple[str, Vec]] = None

    @property
    def representable(self) -> bool:
        return self.coefficients is not None

    def to_json(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"representable": self.representable, "nonzero": self.nonzero}
        if self.coefficients is not None:
            out["coefficients"] = [c.to_json() for c in self.coefficients]
        if self.witness is not None:
            out["witness"] = {"atom": self.witness[0], "vector": [format_fraction(c) for c in self.witness[1]]}
        return out


def _make_nonzero(lam: List[Fraction], null: Sequence[Sequence[Fraction]]) -> List[Fraction]:
    """Shift λ along the null space of the family until no coordinate is 0, if possible."""
    lam = list(lam)
    for z in null:
        if all(v != 0 for v in lam):
            break
        best = lam
        for t in range(1, len(lam) + 2):
            trial = [v + t * w for v, w in zip(lam, z)]
            if sum(v == 0 for v in trial) < sum(v == 0 for v in best):
                best = trial
        lam = best
    return lam


def duality_coeffs(f: CondLinFunctional, fs: Sequence[CondLinFunctional]) -> DualityResult:
    """λ with f = ∑ λ_k f_k iff ⊓ ker(f_k) ⊑ ker(f).

    The kernel inclusion is tested on a null-space basis of the family; the
    coefficients are the least-norm exact solution, shifted along the family's
    own dependencies towards non-zero values. `nonzero` reports whether every
    λ_k ended up non-zero at every atom.
    """
    if not fs:
        raise EmptyGenerators("the family of functionals is empty")
    algebra = f.algebra
    coeffs: Dict[str, List[Fraction]] = {}
    nonzero = True
    for a in f.support.atoms():
        target = f.at(a)
        rows = []
        for g in fs:
            if g.algebra != algebra:
                raise AlgebraMismatch("functionals over different algebras")
            if len(g.at(a)) != len(target):
                raise DimMismatch(f"functional of dimension {len(g.at(a))} at {a!r}")
            rows.append(g.at(a))
        F = _matrix(rows)
        for v in F.nullspace():
            vec = tuple(_frac(c) for c in v)
            if _dot(target, vec) != 0:
                logger.debug(f"[Linear] kernel inclusion fails at {a}")
                return DualityResult(None, False, (a, vec))
        Ft = F.T
        lam = Ft.pinv() * _matrix([[c] for c in target])
        values = [_frac(c) for c in lam]
        if Ft * _matrix([[c] for c in values]) != _matrix([[c] for c in target]):
            raise DimMismatch(f"inexact reconstruction at {a!r}")
        null = [[_frac(c) for c in z] for z in Ft.nullspace()]
        values = _make_nonzero(values, null)
        nonzero = nonzero and all(v != 0 for v in values)
        coeffs[a] = values
    return DualityResult(_stitch(algebra, coeffs, len(fs)), nonzero)


def reconstruct(coefficients: Sequence[CondReal], fs: Sequence[CondLinFunctional]) -> CondLinFunctional:
    """∑ λ_k f_k."""
    algebra = fs[0].algebra
    out = []
    for a in coefficients[0].support.atoms():
        n = len(fs[0].at(a))
        acc = [ZERO] * n
        for lam, g in zip(coefficients, fs):
            for i, c in enumerate(g.at(a)):
                acc[i] += lam.value(a) * c
        out.append((a, tuple(acc)))
    return CondLinFunctional(algebra, tuple(out))


def represent_functional(fn: Callable[[CondRealVec], CondNumber], dim: CondNat) -> CondLinFunctional:
    """Coefficient vector of a conditionally linear map, read off the unit vectors e_k."""
    algebra = dim.algebra
    widths = {a: int(n) for a, n in dim.values}
    coeffs: Dict[str, List[Fraction]] = {a: [] for a in widths}
    for k in range(max(widths.values())):
        atoms = [a for a, n in widths.items() if n > k]
        e = CondRealVec(algebra, tuple((a, _unit(widths[a], k)) for a in atoms))
        value = fn(e)
        for a in atoms:
            coeffs[a].append(value.value(a))
    return CondLinFunctional(algebra, tuple((a, tuple(c)) for a, c in coeffs.items()))


# Separation
@dataclass(frozen=True)
class Separation:
    """f(x) + eps < f(y) for x in the first set and y in the second (≤ when eps is 0)."""
    functional: CondLinFunctional
    eps: CondReal

    def to_json(self) -> Dict[str, Any]:
        return {"functional": self.functional.to_json(), "eps": self.eps.to_json()}


def _separation_lp(P: Sequence[Vec], Q: Sequence[Vec]) -> Tuple[Vec, Fraction]:
    """max t with w ∈ [−1, 1]ⁿ, w·p ≤ α ≤ w·q − t; returns (w, t)."""
    n = len(P[0])
    # variables: w_1..w_n, alpha, t
    rows = []
    for p in P:
        rows.append(Constraint(tuple(p) + (-ONE, ZERO), "<=", ZERO))
    for q in Q:
        rows.append(Constraint(tuple(-c for c in q) + (ONE, ONE), "<=", ZERO))
    bounds = tuple((-ONE, ONE) for _ in range(n)) + ((None, None), (None, None))
    result = lp_solve(LPProblem(tuple([ZERO] * n) + (ZERO, ONE), tuple(rows), "max", bounds))
    return tuple(result.x[:n]), result.x[n + 1]


def separate(C1: VPolytope, C2: VPolytope, strict: bool = True) -> Separation:
    """Stitched separating functional with a positive gap at every atom."""
    atoms = _common_atoms(C1, C2)
    algebra = C1.algebra
    overlap, coeffs, gaps = [], [], []
    for a in atoms:
        w, t = _separation_lp(C1.effective(a), C2.effective(a))
        if t <= 0:
            overlap.append(a)
            continue
        coeffs.append((a, w))
        gaps.append((a, t / 2 if strict else ZERO))
    if overlap:
        raise NotDisjoint(algebra.condition(overlap))
    sep = Separation(CondLinFunctional(algebra, tuple(coeffs)), CondReal(algebra, tuple(gaps)))
    logger.debug(f"[Linear] separated with gap {sep.eps.to_json()}")
    return sep


def verify_separation(C1: VPolytope, C2: VPolytope, sep: Separation) -> bool:
    """Checked on every generator; enough by linearity."""
    for a in C1.support.atoms():
        w, eps = sep.functional.at(a), sep.eps.value(a)
        for p in C1.effective(a):
            for q in C2.effective(a):
                lhs, rhs = _dot(w, p) + eps, _dot(w, q)
                if not (lhs < rhs if eps > 0 else lhs <= rhs):
                    return False
    return True


# Hahn-Banach
def _rank(vectors: Sequence[Vec]) -> int:
    return _matrix(vectors).rank() if vectors else 0


def _subspace_lp(basis: Sequence[Vec], values: Sequence[Fraction], k: Sequence[Vec], v: Vec, sign: int) -> Optional[Fraction]:
    """sign=+1: sup_c [f(Bc) − k(Bc − v)]; sign=−1: inf_c [k(Bc + v) − f(Bc)].

    Variables c (free, one per basis vector) and s (free) with s ≥ g·(Bc ∓ v).
    """
    m = len(basis)
    rows = []
    for g in k:
        gb = tuple(_dot(g, b) for b in basis)
        gv = _dot(g, v)
        # g·Bc − s ≤ ±g·v
        rows.append(Constraint(gb + (-ONE,), "<=", gv if sign > 0 else -gv))
    bounds = tuple((None, None) for _ in range(m + 1))
    if sign > 0:
        p = LPProblem(tuple(values) + (-ONE,), tuple(rows), "max", bounds)
    else:
        p = LPProblem(tuple(-x for x in values) + (ONE,), tuple(rows), "min", bounds)
    result = lp_solve(p)
    if result.status != OPTIMAL:
        return None
    return result.objective


def _dominated(w: Vec, k: Sequence[Vec]) -> bool:
    """⟨w, ·⟩ ≤ max_j ⟨g_j, ·⟩ everywhere iff w ∈ conv(g_j)."""
    return in_hull(k, w)


def _solve_square(basis: Sequence[Vec], values: Sequence[Fraction]) -> Vec:
    sol = _matrix(basis).LUsolve(_matrix([[v] for v in values]))
    return tuple(_frac(c) for c in sol)


def hb_extend(basis: Sequence[CondRealVec], values: Sequence[CondReal], k: PolyhedralSublinear) -> CondLinFunctional:
    """Extend f (given on a basis of a subspace) to all of 𝐑ⁿ with f̂ ≤ k.

    One missing unit direction v at a time, the value r = f̂(v) is the midpoint
    of [sup_y f̂(y) − k(y − v), inf_y k(y + v) − f̂(y)].
    """
    if not basis or len(basis) != len(values):
        raise EmptyGenerators("a basis with one value per vector is required")
    algebra = k.algebra
    coeffs = []
    for a in basis[0].support.atoms():
        B = [tuple(b.at(a)) for b in basis]
        vals = [values[i].value(a) for i in range(len(B))]
        pieces = k.at(a)
        n = len(pieces[0])
        if any(len(b) != n for b in B):
            raise DimMismatch(f"basis and k disagree on the dimension at {a!r}")
        if _rank(B) != len(B):
            raise InvalidValue(f"basis vectors are dependent at {a!r}")
        # f ≤ k on the subspace: the homogeneous LP stays at 0 over a bounded box
        rows = [Constraint(tuple(_dot(g, b) for b in B) + (-ONE,), "<=", ZERO) for g in pieces]
        box = tuple((-ONE, ONE) for _ in B) + ((None, None),)
        check = lp_solve(LPProblem(tuple(vals) + (-ONE,), tuple(rows), "max", box))
        if check.status != OPTIMAL or check.objective > 0:
            raise DominationViolated(f"f exceeds k on the subspace at {a!r}")
        for i in range(n):
            if len(B) == n:
                break
            v = _unit(n, i)
            if _rank(B + [v]) == len(B):
                continue
            lo = _subspace_lp(B, vals, pieces, v, +1)
            hi = _subspace_lp(B, vals, pieces, v, -1)
            if lo is None or hi is None or lo > hi:
                raise DominationViolated(f"empty extension interval at {a!r}")
            r = (lo + hi) / 2
            logger.debug(f"[Linear] extension interval [{lo}, {hi}] at {a}, chose {r}")
            B.append(v)
            vals.append(r)
        w = _solve_square(B, vals)
        if not _dominated(w, pieces):
            raise DominationViolated(f"extension not dominated at {a!r}")
        coeffs.append((a, w))
    return CondLinFunctional(algebra, tuple(coeffs))


def verify_extension(
    fhat: CondLinFunctional,
    basis: Sequence[CondRealVec],
    values: Sequence[CondReal],
    k: PolyhedralSublinear,
    points: Sequence[CondRealVec] = (),
) -> bool:
    """Agreement on the basis and f̂ ≤ k, exactly and on the given points."""
    for b, v in zip(basis, values):
        if fhat.value(b) != v.restrict(b.support):
            return False
    for a, w in fhat.coeffs:
        if not _dominated(w, k.at(a)):
            return False
        n = len(w)
        for signs in itertools.product((-1, 1), repeat=n):
            x = tuple(Fraction(s) for s in signs)
            if _dot(w, x) > k.value_at(a, x):
                return False
    for x in points:
        fx, kx = fhat.value(x), k.value(x)
        if any(fx.value(a) > kx.value(a) for a in x.support.atoms()):
            return False
    return True


# Polars
def polar(Y: VPolytope, one_sided: bool = False) -> HPolyhedron:
    """Y^• = {x′ : |⟨g, x′⟩| ≤ 1} or Y^∘ = {x′ : ⟨g, x′⟩ ≤ 1}, g over the generators."""
    rows, dims = [], []
    for a in Y.support.atoms():
        gens = Y.effective(a)
        r = [(g, ONE) for g in gens]
        if not one_sided:
            r += [(tuple(-c for c in g), ONE) for g in gens]
        rows.append((a, tuple(dict.fromkeys(r))))
        dims.append((a, Y.local_dim(a)))
    return HPolyhedron(Y.algebra, tuple(rows), tuple(dims))


def polar_contains(Y: VPolytope, xp: CondRealVec, one_sided: bool = False) -> bool:
    return polar(Y, one_sided).contains(xp)


def _polar_max(H: HPolyhedron, atom: str, x: Sequence[Fraction]) -> Optional[Fraction]:
    """max ⟨x, x′⟩ over x′ in H at one atom; None when unbounded."""
    n = H.local_dim(atom)
    rows = tuple(Constraint(tuple(lhs), "<=", rhs) for lhs, rhs in H.at(atom))
    result = lp_solve(LPProblem(tuple(x), rows, "max", tuple((None, None) for _ in range(n))))
    if result.status == UNBOUNDED:
        return None
    return result.objective


def bipolar_contains(Y: VPolytope, x: CondRealVec, one_sided: bool = False) -> bool:
    """x ∈ Y^•• (or Y^∘∘): no x′ in the polar pushes ⟨x, x′⟩ above 1."""
    H = polar(Y, one_sided)
    for a in x.support.atoms():
        for sign in ((1,) if one_sided else (1, -1)):
            best = _polar_max(H, a, tuple(sign * c for c in x.at(a)))
            if best is None or best > 1:
                return False
    return True


def bipolar_hull_contains(Y: VPolytope, x: CondRealVec, one_sided: bool = False) -> bool:
    """Membership in conv(±Y), or conv(Y ∪ {0}) in the one-sided case."""
    for a in x.support.atoms():
        gens = list(Y.effective(a))
        n = Y.local_dim(a)
        if one_sided:
            gens.append(tuple([ZERO] * n))
        else:
            gens += [tuple(-c for c in g) for g in gens]
        if not in_hull(list(dict.fromkeys(gens)), x.at(a)):
            return False
    return True


@dataclass(frozen=True)
class BipolarReport:
    checked: int
    mismatches: Tuple[Tuple[str, Vec], ...]

    @property
    def agree(self) -> bool:
        return not self.mismatches

    def to_dict(self) -> Dict[str, Any]:
        return {
            "checked": self.checked,
            "agree": self.agree,
            "mismatches": [{"atom": a, "point": [format_fraction(c) for c in p]} for a, p in self.mismatches],
        }


def bipolar_check(Y: VPolytope, samples: Sequence[CondRealVec] = (), one_sided: bool = False) -> BipolarReport:
    """Y^•• against the circled convex hull on generators, their negatives and the samples."""
    checked = 0
    mismatches = []
    for a in Y.support.atoms():
        pts = list(Y.effective(a)) + [tuple(-c for c in g) for g in Y.effective(a)]
        pts += [tuple(s.at(a)) for s in samples if a in s.support.members]
        for p in dict.fromkeys(pts):
            if len(p) != Y.local_dim(a):
                raise DimMismatch(f"sample of dimension {len(p)} at {a!r}")
            x = CondRealVec(Y.algebra, ((a, p),))
            checked += 1
            if bipolar_contains(Y, x, one_sided) != bipolar_hull_contains(Y, x, one_sided):
                mismatches.append((a, p))
    return BipolarReport(checked, tuple(mismatches))


def sigma_bound(Y: VPolytope, xp: CondLinFunctional) -> CondReal:
    """λ_{x′} = max over generators of |⟨g, x′⟩|; bounds |⟨x, x′⟩| on all of Y."""
    return CondReal(
        Y.algebra,
        tuple((a, max(abs(_dot(g, xp.at(a))) for g in Y.effective(a))) for a in Y.support.atoms()),
    )


def is_sigma_bounded(Y: VPolytope, xp: CondLinFunctional, bound: CondNumber) -> bool:
    """|⟨y, x′⟩| ≤ bound on all of Y; the generators decide it."""
    lam = sigma_bound(Y, xp)
    return all(v <= bound.value(a) for a, v in lam.values)


def union(polys: Sequence[VPolytope]) -> VPolytope:
    """Generators of the conditional union ⊔Y_i (as a hull)."""
    if not polys:
        raise EmptyGenerators("union of no polytopes")
    atoms = _common_atoms(*polys)
    gens = tuple((a, tuple(itertools.chain.from_iterable(P.effective(a) for P in polys))) for a in atoms)
    return VPolytope(polys[0].algebra, gens, "hull")


# Norms
def _check_ball(ball: VPolytope) -> None:
    if not is_circled(ball):
        raise BallNotCircled("the unit ball must be circled at every atom")
    if not is_absorbing(ball):
        raise BallNotAbsorbing("the unit ball must contain 0 in its interior at every atom")


def _gauge(gens: Sequence[Vec], x: Sequence[Fraction]) -> Fraction:
    """min Σc with c ≥ 0 and Σ c_k g_k = x."""
    k = len(gens)
    rows = tuple(Constraint(tuple(g[i] for g in gens), "=", x[i]) for i in range(len(x)))
    result = lp_solve(LPProblem(tuple([ONE] * k), rows, "min"))
    if result.status != OPTIMAL:
        raise BallNotAbsorbing("the ball does not reach the vector")
    return result.objective


def norm_eval(ball: VPolytope, x: CondRealVec) -> CondReal:
    """The gauge ‖x‖ = min{t ≥ 0 : x ∈ t·ball}."""
    _check_ball(ball)
    _check_dims(ball.algebra, tuple((a, ball.at(a)[0]) for a in ball.support.atoms()), x)
    return CondReal(x.algebra, tuple((a, _gauge(ball.effective(a), x.at(a))) for a in x.support.atoms()))


def norm_distance(ball: VPolytope, x: CondRealVec, y: CondRealVec) -> CondReal:
    from .condnum import vsub

    return norm_eval(ball, vsub(x, y))


def operator_norm(T: CondMatrix, dom_ball: VPolytope, cod_ball: VPolytope) -> CondReal:
    """‖T‖ = max over the domain ball generators of ‖T v‖, per atom."""
    _check_ball(dom_ball)
    _check_ball(cod_ball)
    widths = dict(T.columns)
    out = []
    for a in dom_ball.support.atoms():
        if widths.get(a) != dom_ball.local_dim(a):
            raise DimMismatch(f"matrix and domain ball disagree at {a!r}")
        best = ZERO
        for v in dom_ball.effective(a):
            image = tuple(_dot(r, v) for r in T.at(a))
            if len(image) != cod_ball.local_dim(a):
                raise DimMismatch(f"matrix and codomain ball disagree at {a!r}")
            best = max(best, _gauge(cod_ball.effective(a), image))
        out.append((a, best))
    return CondReal(T.algebra, tuple(out))


def linf_ball(dim: CondNat, radius: Any = 1) -> VPolytope:
    """The ℓ∞ ball as a circled polytope (half of the sign vectors suffice)."""
    r = to_fraction(radius)
    gens = []
    for a, n in dim.values:
        n = int(n)
        pts = [tuple(r * s for s in (1,) + signs) for signs in itertools.product((1, -1), repeat=n - 1)]
        gens.append((a, tuple(pts)))
    return VPolytope(dim.algebra, tuple(gens), "circled")


def l1_ball(dim: CondNat, radius: Any = 1) -> VPolytope:
    r = to_fraction(radius)
    return VPolytope(dim.algebra, tuple((a, tuple(tuple(r * c for c in _unit(int(n), i)) for i in range(int(n)))) for a, n in dim.values), "circled")


# Compactness of polars
@dataclass(frozen=True)
class AlaogluCertificate:
    """U^• closed (finite H-description), inside an exact box, covered by an ε-net."""
    polar: HPolyhedron
    box: RationalBox
    net: EpsNet
    inside: Tuple[Tuple[str, Tuple[Vec, ...]], ...]

    def covers(self, xp: CondRealVec) -> bool:
        return self.net.covers(xp)

    def to_json(self) -> Dict[str, Any]:
        return {
            "polar": self.polar.to_json(),
            "box": {a: [[format_fraction(lo), format_fraction(hi)] for lo, hi in s] for a, s in self.box.sides},
            "net": self.net.to_json(),
            "inside": {a: len(pts) for a, pts in self.inside},
        }


def alaoglu_certificate(U: VPolytope, eps: CondNumber) -> AlaogluCertificate:
    """Closed and totally bounded certificate for the polar of a neighborhood U."""
    if not is_positive(eps):
        raise EpsNotPositive("eps must be positive at every atom")
    if not is_absorbing(U):
        raise BallNotAbsorbing("U must be a neighborhood of 0 at every atom")
    H = polar(U)
    sides = []
    for a in U.support.atoms():
        n = U.local_dim(a)
        ivs = []
        for i in range(n):
            hi = _polar_max(H, a, _unit(n, i))
            lo = _polar_max(H, a, _unit(n, i, -1))
            if hi is None or lo is None:
                raise BallNotAbsorbing(f"polar unbounded at {a!r}")
            ivs.append((-lo, hi))
        sides.append((a, tuple(ivs)))
    box = RationalBox(U.algebra, tuple(sides))
    net = eps_net(box, CondReal(eps.algebra, tuple((a, eps.value(a)) for a, _ in sides)))
    inside = tuple((a, tuple(p for p in net.at(a) if H.contains_at(a, p))) for a, _ in sides)
    logger.debug(f"[Linear] polar net with {net.count.to_json()} centers")
    return AlaogluCertificate(H, box, net, inside)
