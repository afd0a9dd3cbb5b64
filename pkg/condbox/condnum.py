"""
Conditional numbers in per-atom form.

CondNat/CondInt/CondRat/CondReal store one exact Fraction per atom of their
support. Comparisons return trichotomy partitions instead of booleans, and
ℓ² distances are decided through squared comparisons so no irrational value
is ever formed. 𝐍 starts at 1.
"""

import itertools
import logging
import math
import random
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import cached_property
from typing import Any, ClassVar, Dict, Hashable, List, Mapping, Optional, Sequence, Tuple, Type, TypeVar

from .base import (
    AlgebraMismatch,
    DimMismatch,
    EmptyGenerators,
    EpsNotPositive,
    InvalidValue,
    MalformedDescriptor,
    MetricAxiomViolation,
    NotInvertible,
    SupportMismatch,
    encode_value,
    format_fraction,
    to_fraction,
)
from .boolalg import Algebra, Condition, Partition, group_atoms, meet
from .condset import CondSet

logger = logging.getLogger(__name__)

N = TypeVar("N", bound="CondNumber")


@dataclass(frozen=True)
class CondNumber:
    """Per-atom exact values on a support."""
    algebra: Algebra = field(repr=False)
    values: Tuple[Tuple[str, Fraction], ...]

    domain: ClassVar[str] = "R"
    rank: ClassVar[int] = 3

    def __post_init__(self):
        order = {a: i for i, a in enumerate(self.algebra.atoms)}
        vals = []
        for atom, v in self.values:
            if atom not in order:
                raise InvalidValue(f"unknown atom {atom!r}")
            vals.append((atom, to_fraction(v)))
        vals.sort(key=lambda av: order[av[0]])
        if len({a for a, _ in vals}) != len(vals):
            raise InvalidValue("duplicate atoms in a number")
        object.__setattr__(self, "values", tuple(vals))
        for atom, v in vals:
            self._validate(atom, v)

    def _validate(self, atom: str, v: Fraction) -> None:
        pass

    @cached_property
    def _map(self) -> Dict[str, Fraction]:
        return dict(self.values)

    @property
    def support(self) -> Condition:
        return self.algebra.condition(a for a, _ in self.values)

    @property
    def lives_on_one(self) -> bool:
        return len(self.values) == len(self.algebra.atoms)

    def value(self, atom: str) -> Fraction:
        return self._map[atom]

    def as_dict(self) -> Dict[str, Fraction]:
        return dict(self._map)

    def restrict(self: N, a: Condition) -> N:
        return type(self)(self.algebra, tuple((at, v) for at, v in self.values if at in a.members))

    def normal_form(self) -> List[Tuple[Condition, Fraction]]:
        """x = ∑ a_i x_i with distinct x_i, parts ordered by first atom."""
        return group_atoms(self.algebra, self._map, within=self.support)

    def to_json(self) -> Dict[str, str]:
        return {a: format_fraction(v) for a, v in self.values}

    @classmethod
    def from_json(cls: Type[N], algebra: Algebra, data: Mapping[str, Any]) -> N:
        if not isinstance(data, Mapping):
            raise InvalidValue("numbers are objects mapping atoms to rationals")
        return cls(algebra, tuple((a, to_fraction(v)) for a, v in data.items()))

    def __add__(self, other: "CondNumber") -> "CondNumber":
        return add(self, other)

    def __sub__(self, other: "CondNumber") -> "CondNumber":
        return sub(self, other)

    def __mul__(self, other: "CondNumber") -> "CondNumber":
        return mul(self, other)

    def __neg__(self) -> "CondNumber":
        return neg(self)


class CondNat(CondNumber):
    """Conditional natural number, values in {1, 2, ...}."""
    domain = "N"
    rank = 0

    def _validate(self, atom: str, v: Fraction) -> None:
        if v.denominator != 1 or v < 1:
            raise InvalidValue(f"{format_fraction(v)} at {atom!r} is not a natural number")

    def as_int(self, atom: str) -> int:
        return int(self.value(atom))


class CondInt(CondNumber):
    domain = "Z"
    rank = 1

    def _validate(self, atom: str, v: Fraction) -> None:
        if v.denominator != 1:
            raise InvalidValue(f"{format_fraction(v)} at {atom!r} is not an integer")


class CondRat(CondNumber):
    domain = "Q"
    rank = 2


class CondReal(CondNumber):
    """Conditional real number; a per-atom rational on a finite algebra."""
    domain = "R"
    rank = 3


_BY_RANK = {0: CondNat, 1: CondInt, 2: CondRat, 3: CondReal}


def constant(algebra: Algebra, q: Any, cls: Type[N] = CondReal) -> N:
    return cls(algebra, tuple((a, to_fraction(q)) for a in algebra.atoms))


def from_mapping(algebra: Algebra, mapping: Mapping[str, Any], cls: Type[N] = CondReal) -> N:
    return cls(algebra, tuple((a, to_fraction(v)) for a, v in mapping.items()))


def embed(x: CondNumber) -> CondReal:
    """𝐍 ⊂ 𝐙 ⊂ 𝐐 ↪ 𝐑: the same values, read as conditional reals."""
    return CondReal(x.algebra, x.values)


def amalgamate_numbers(pieces: Sequence[Tuple[Condition, CondNumber]], cls: Optional[Type[N]] = None) -> CondNumber:
    """∑ a_i x_i for disjoint a_i, each x_i restricted to its part."""
    if not pieces:
        raise EmptyGenerators("nothing to amalgamate")
    cls = cls or type(pieces[0][1])
    merged: Dict[str, Fraction] = {}
    for a, x in pieces:
        for atom in a.atoms():
            if atom in merged:
                raise InvalidValue("parts overlap")
            merged[atom] = x.value(atom)
    return cls(pieces[0][1].algebra, tuple(merged.items()))


# Arithmetic
def _pointwise(x: CondNumber, y: CondNumber, op, cls: Type[CondNumber]) -> CondNumber:
    if x.algebra != y.algebra:
        raise AlgebraMismatch("numbers over different algebras")
    common = meet(x.support, y.support)
    return cls(x.algebra, tuple((a, op(x.value(a), y.value(a))) for a in common.atoms()))


def _rank(*xs: CondNumber, at_least: int = 0) -> Type[CondNumber]:
    return _BY_RANK[max([at_least] + [x.rank for x in xs])]


def add(x: CondNumber, y: CondNumber) -> CondNumber:
    return _pointwise(x, y, lambda u, v: u + v, _rank(x, y))


def sub(x: CondNumber, y: CondNumber) -> CondNumber:
    return _pointwise(x, y, lambda u, v: u - v, _rank(x, y, at_least=1))


def mul(x: CondNumber, y: CondNumber) -> CondNumber:
    return _pointwise(x, y, lambda u, v: u * v, _rank(x, y))


def neg(x: CondNumber) -> CondNumber:
    return _rank(x, at_least=1)(x.algebra, tuple((a, -v) for a, v in x.values))


def zero_condition(x: CondNumber) -> Condition:
    """The condition on which x vanishes."""
    return x.algebra.condition(a for a, v in x.values if v == 0)


def inv(x: CondNumber) -> CondNumber:
    """1/x, defined when x is non-zero at every atom of its support."""
    zeros = zero_condition(x)
    if not zeros.is_zero:
        raise NotInvertible(zeros)
    return _rank(x, at_least=2)(x.algebra, tuple((a, 1 / v) for a, v in x.values))


def div(x: CondNumber, y: CondNumber) -> CondNumber:
    return mul(x, inv(y))


def cabs(x: CondNumber) -> CondNumber:
    """|x| = max{x, −x} pointwise."""
    return type(x)(x.algebra, tuple((a, abs(v)) for a, v in x.values))


def compare(x: CondNumber, y: CondNumber) -> Partition:
    """(a, b, c) with x < y on a, y < x on b and x = y on c."""
    if x.algebra != y.algebra:
        raise AlgebraMismatch("numbers over different algebras")
    if x.support != y.support:
        raise SupportMismatch("compared numbers live on different conditions")
    A = x.algebra
    lt, gt, eq = [], [], []
    for a in x.support.atoms():
        u, v = x.value(a), y.value(a)
        (lt if u < v else gt if u > v else eq).append(a)
    return Partition.checked(x.support, (A.condition(lt), A.condition(gt), A.condition(eq)))


def leq(x: CondNumber, y: CondNumber) -> bool:
    """x ≤ y everywhere on the common support."""
    return compare(x, y)[1].is_zero


def is_positive(x: CondNumber) -> bool:
    """x ∈ 𝐑₊₊."""
    return all(v > 0 for _, v in x.values)


def is_nonnegative(x: CondNumber) -> bool:
    """x ∈ 𝐑₊."""
    return all(v >= 0 for _, v in x.values)


def cond_sup(generators: Sequence[CondNumber]) -> CondNumber:
    """Supremum of the stable hull of finitely many generators."""
    if not generators:
        raise EmptyGenerators("sup needs at least one generator")
    result = generators[0]
    for g in generators[1:]:
        result = _pointwise(result, g, max, _rank(result, g))
    return result


def cond_inf(generators: Sequence[CondNumber]) -> CondNumber:
    if not generators:
        raise EmptyGenerators("inf needs at least one generator")
    result = generators[0]
    for g in generators[1:]:
        result = _pointwise(result, g, min, _rank(result, g))
    return result


def archimedean_bound(x: CondNumber) -> CondNat:
    """The per-atom least n ∈ 𝐍 with n > x."""
    return CondNat(x.algebra, tuple((a, max(1, math.floor(v) + 1)) for a, v in x.values))


def ball_partition(q: CondNumber, eps: CondNumber, y: CondNumber) -> Partition:
    """compare(|q − y|, eps); the first part is where y lies in B_eps(q)."""
    if not is_positive(eps):
        raise EpsNotPositive("radius must be positive at every atom")
    return compare(cabs(sub(q, y)), eps)


def ball_contains(q: CondNumber, eps: CondNumber, y: CondNumber) -> bool:
    p = ball_partition(q, eps, y)
    return p[0] == q.support


# Vectors
@dataclass(frozen=True)
class CondRealVec:
    """A vector of the conditional 𝐑ⁿ; the length may differ per atom."""
    algebra: Algebra = field(repr=False)
    entries: Tuple[Tuple[str, Tuple[Fraction, ...]], ...]

    def __post_init__(self):
        order = {a: i for i, a in enumerate(self.algebra.atoms)}
        clean = []
        for atom, vec in self.entries:
            if atom not in order:
                raise InvalidValue(f"unknown atom {atom!r}")
            vec = tuple(to_fraction(c) for c in vec)
            if not vec:
                raise InvalidValue(f"vector at {atom!r} is empty")
            clean.append((atom, vec))
        clean.sort(key=lambda av: order[av[0]])
        object.__setattr__(self, "entries", tuple(clean))

    @cached_property
    def _map(self) -> Dict[str, Tuple[Fraction, ...]]:
        return dict(self.entries)

    def at(self, atom: str) -> Tuple[Fraction, ...]:
        return self._map[atom]

    def as_dict(self) -> Dict[str, Tuple[Fraction, ...]]:
        return dict(self._map)

    @property
    def support(self) -> Condition:
        return self.algebra.condition(a for a, _ in self.entries)

    @property
    def dim(self) -> CondNat:
        return CondNat(self.algebra, tuple((a, len(v)) for a, v in self.entries))

    def to_json(self) -> Dict[str, List[str]]:
        return {a: [format_fraction(c) for c in v] for a, v in self.entries}

    @classmethod
    def from_json(cls, algebra: Algebra, data: Mapping[str, Any]) -> "CondRealVec":
        if not isinstance(data, Mapping):
            raise InvalidValue("vectors are objects mapping atoms to lists")
        return cls(algebra, tuple((a, tuple(to_fraction(c) for c in v)) for a, v in data.items()))


def vector(algebra: Algebra, mapping: Mapping[str, Sequence[Any]]) -> CondRealVec:
    return CondRealVec(algebra, tuple((a, tuple(v)) for a, v in mapping.items()))


def zero_vector(dim: CondNat) -> CondRealVec:
    return CondRealVec(dim.algebra, tuple((a, (Fraction(0),) * int(n)) for a, n in dim.values))


def unit_vector(dim: CondNat, k: CondNat) -> CondRealVec:
    """The conditional unit vector e_k (k ≤ dim at every atom)."""
    entries = []
    for a, n in dim.values:
        i = int(k.value(a))
        if i > n:
            raise DimMismatch(f"index {i} exceeds dimension {n} at {a!r}")
        entries.append((a, tuple(Fraction(1 if j == i else 0) for j in range(1, int(n) + 1))))
    return CondRealVec(dim.algebra, tuple(entries))


def _same_dims(x: CondRealVec, y: CondRealVec) -> None:
    if x.algebra != y.algebra:
        raise AlgebraMismatch("vectors over different algebras")
    if x.support != y.support:
        raise SupportMismatch("vectors live on different conditions")
    for a in x.support.atoms():
        if len(x.at(a)) != len(y.at(a)):
            raise DimMismatch(f"dimensions {len(x.at(a))} and {len(y.at(a))} differ at {a!r}")


def vadd(x: CondRealVec, y: CondRealVec) -> CondRealVec:
    _same_dims(x, y)
    return CondRealVec(x.algebra, tuple((a, tuple(u + v for u, v in zip(x.at(a), y.at(a)))) for a in x.support.atoms()))


def vsub(x: CondRealVec, y: CondRealVec) -> CondRealVec:
    _same_dims(x, y)
    return CondRealVec(x.algebra, tuple((a, tuple(u - v for u, v in zip(x.at(a), y.at(a)))) for a in x.support.atoms()))


def vscale(lam: CondNumber, x: CondRealVec) -> CondRealVec:
    return CondRealVec(x.algebra, tuple((a, tuple(lam.value(a) * c for c in v)) for a, v in x.entries))


def dot(x: CondRealVec, y: CondRealVec) -> CondReal:
    _same_dims(x, y)
    return CondReal(x.algebra, tuple((a, sum((u * v for u, v in zip(x.at(a), y.at(a))), Fraction(0))) for a in x.support.atoms()))


def distance_sq(x: CondRealVec, y: CondRealVec) -> CondReal:
    """d(x, y)² for the ℓ² metric."""
    d = vsub(x, y)
    return dot(d, d)


def metric_compare(x: CondRealVec, y: CondRealVec, r: CondNumber) -> Partition:
    """Trichotomy of d(x, y) against r ≥ 0, decided on squares."""
    if not is_nonnegative(r):
        raise InvalidValue("the radius must be non-negative")
    return compare(distance_sq(x, y), mul(r, r))


def sqrt_bounds(q: Fraction, digits: int) -> Tuple[Fraction, Fraction]:
    """Rationals lo ≤ √q ≤ hi with hi − lo ≤ 10^-digits."""
    q = Fraction(q)
    if q < 0:
        raise InvalidValue("square root of a negative number")
    scale = 10 ** digits
    root = math.isqrt(q.numerator * scale * scale // q.denominator)
    lo = Fraction(root, scale)
    hi = Fraction(root + 1, scale)
    if lo * lo == q:
        hi = lo
    return lo, hi


def exact_sqrt(q: Fraction) -> Optional[Fraction]:
    """√q when it is rational, else None."""
    q = Fraction(q)
    if q < 0:
        return None
    n, d = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


def sqrt_leq_sum(a: Fraction, b: Fraction, c: Fraction) -> bool:
    """√a ≤ √b + √c, decided exactly for non-negative rationals."""
    lhs = a - b - c
    if lhs <= 0:
        return True
    return lhs * lhs <= 4 * b * c


def metric_triangle(x: CondRealVec, y: CondRealVec, z: CondRealVec) -> bool:
    """d(x, z) ≤ d(x, y) + d(y, z) at every atom."""
    xz, xy, yz = distance_sq(x, z), distance_sq(x, y), distance_sq(y, z)
    return all(sqrt_leq_sum(xz.value(a), xy.value(a), yz.value(a)) for a in xz.support.atoms())


def distance_decimal(x: CondRealVec, y: CondRealVec, digits: int) -> Dict[str, str]:
    """d(x, y) per atom as a decimal string with the requested digits."""
    result = {}
    for a, sq in distance_sq(x, y).values:
        with localcontext() as ctx:
            ctx.prec = digits + 20
            root = (Decimal(sq.numerator) / Decimal(sq.denominator)).sqrt()
            result[a] = str(root.quantize(Decimal(1).scaleb(-digits)))
    return result


# ε-nets
@dataclass(frozen=True)
class RationalBox:
    """Per atom a list of coordinate intervals [lo, hi]."""
    algebra: Algebra = field(repr=False)
    sides: Tuple[Tuple[str, Tuple[Tuple[Fraction, Fraction], ...]], ...]

    def __post_init__(self):
        clean = []
        for atom, intervals in self.sides:
            ivs = tuple((to_fraction(lo), to_fraction(hi)) for lo, hi in intervals)
            if not ivs or any(lo > hi for lo, hi in ivs):
                raise InvalidValue(f"box at {atom!r} is empty")
            clean.append((atom, ivs))
        object.__setattr__(self, "sides", tuple(clean))

    def at(self, atom: str) -> Tuple[Tuple[Fraction, Fraction], ...]:
        return dict(self.sides)[atom]

    def contains(self, x: CondRealVec) -> bool:
        return all(
            len(x.at(a)) == len(ivs) and all(lo <= c <= hi for c, (lo, hi) in zip(x.at(a), ivs))
            for a, ivs in self.sides
        )


@dataclass(frozen=True)
class EpsNet:
    """Centers per atom and their conditional count."""
    eps: CondReal
    centers: Tuple[Tuple[str, Tuple[Tuple[Fraction, ...], ...]], ...]
    count: CondNat

    def at(self, atom: str) -> Tuple[Tuple[Fraction, ...], ...]:
        return dict(self.centers)[atom]

    def covers(self, x: CondRealVec) -> bool:
        """Every atom of x sits strictly within eps of some center."""
        for a, point in x.entries:
            e2 = self.eps.value(a) ** 2
            if not any(sum((p - c) ** 2 for p, c in zip(point, center)) < e2 for center in self.at(a)):
                return False
        return True

    def to_json(self) -> Dict[str, Any]:
        return {
            "eps": self.eps.to_json(),
            "count": self.count.to_json(),
            "centers": {a: [[format_fraction(c) for c in p] for p in cs] for a, cs in self.centers},
        }


def grid_cells(widths: Sequence[Fraction], eps: Fraction) -> int:
    """Least m with every cell of a uniform m-grid inside the open eps-ball of its center."""
    total = sum((w * w for w in widths), Fraction(0))
    if total == 0:
        return 1
    t = total / (4 * eps * eps)
    return max(1, math.isqrt(math.floor(t)) + 1)


def eps_net(box: RationalBox, eps: CondNumber) -> EpsNet:
    """Cell-midpoint grid per atom; half cell diagonals stay below eps."""
    if not is_positive(eps):
        raise EpsNotPositive("eps must be positive at every atom")
    centers = []
    counts = []
    for a, ivs in box.sides:
        widths = [hi - lo for lo, hi in ivs]
        m = grid_cells(widths, eps.value(a))
        axes = [[lo + (hi - lo) * (2 * k + 1) / (2 * m) for k in range(m)] if hi > lo else [lo] for lo, hi in ivs]
        pts = tuple(tuple(p) for p in itertools.product(*axes))
        centers.append((a, pts))
        counts.append((a, len(pts)))
    return EpsNet(CondReal(eps.algebra, tuple((a, eps.value(a)) for a, _ in box.sides)), tuple(centers), CondNat(box.algebra, tuple(counts)))


# Cauchy sequences on a closed descriptor class
@dataclass(frozen=True)
class SeqDescriptor:
    """q_n = prefix[n-1] for n ≤ len(prefix), else constant + ∑ r·sⁿ."""
    constant: Fraction
    terms: Tuple[Tuple[Fraction, Fraction], ...] = ()
    prefix: Tuple[Fraction, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "constant", to_fraction(self.constant))
        terms = tuple((to_fraction(r), to_fraction(s)) for r, s in self.terms)
        for _, s in terms:
            if abs(s) >= 1:
                raise MalformedDescriptor(f"ratio {format_fraction(s)} must satisfy |s| < 1")
        object.__setattr__(self, "terms", tuple((r, s) for r, s in terms if r != 0 and s != 0))
        object.__setattr__(self, "prefix", tuple(to_fraction(p) for p in self.prefix))

    def term(self, n: int) -> Fraction:
        if n < 1:
            raise InvalidValue("sequences are indexed from 1")
        if n <= len(self.prefix):
            return self.prefix[n - 1]
        return self.constant + sum((r * s ** n for r, s in self.terms), Fraction(0))

    @property
    def limit(self) -> Fraction:
        return self.constant

    def modulus(self, eps: Fraction) -> int:
        """n0 with |q_n − q_m| < eps for all n, m ≥ n0."""
        if eps <= 0:
            raise EpsNotPositive("eps must be positive")
        n0 = len(self.prefix) + 1
        if not self.terms:
            return n0
        weight = 2 * sum(abs(r) for r, _ in self.terms)
        sigma = max(abs(s) for _, s in self.terms)
        while weight * sigma ** n0 >= eps:
            n0 += 1
        return n0

    def __add__(self, other: "SeqDescriptor") -> "SeqDescriptor":
        k = max(len(self.prefix), len(other.prefix))
        return SeqDescriptor(
            self.constant + other.constant,
            self.terms + other.terms,
            tuple(self.term(n) + other.term(n) for n in range(1, k + 1)),
        )

    def __mul__(self, other: "SeqDescriptor") -> "SeqDescriptor":
        terms = [(other.constant * r, s) for r, s in self.terms]
        terms += [(self.constant * r, s) for r, s in other.terms]
        terms += [(r1 * r2, s1 * s2) for r1, s1 in self.terms for r2, s2 in other.terms]
        k = max(len(self.prefix), len(other.prefix))
        return SeqDescriptor(
            self.constant * other.constant,
            tuple(terms),
            tuple(self.term(n) * other.term(n) for n in range(1, k + 1)),
        )

    def to_json(self) -> Dict[str, Any]:
        return {
            "constant": format_fraction(self.constant),
            "terms": [[format_fraction(r), format_fraction(s)] for r, s in self.terms],
            "prefix": [format_fraction(p) for p in self.prefix],
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "SeqDescriptor":
        kind = data.get("kind")
        if kind == "eventually_constant":
            return eventually_constant(data["tail"], int(data["switch"]), data.get("head", 0))
        if kind == "geometric":
            return geometric(data["c"], data["r"], data["s"])
        try:
            return cls(data["constant"], tuple(tuple(t) for t in data.get("terms", ())), tuple(data.get("prefix", ())))
        except (KeyError, TypeError) as e:
            raise MalformedDescriptor(f"bad descriptor {data!r}") from e


def eventually_constant(tail: Any, switch: int, head: Any = 0) -> SeqDescriptor:
    """q_n = head for n < switch, q_n = tail afterwards."""
    if switch < 1:
        raise MalformedDescriptor("switch index starts at 1")
    return SeqDescriptor(to_fraction(tail), (), (to_fraction(head),) * (switch - 1))


def geometric(c: Any, r: Any, s: Any) -> SeqDescriptor:
    """q_n = c + r·sⁿ with |s| < 1."""
    return SeqDescriptor(to_fraction(c), ((to_fraction(r), to_fraction(s)),))


@dataclass(frozen=True)
class CauchySeqQ:
    """A conditional rational sequence given by one descriptor per atom."""
    algebra: Algebra = field(repr=False)
    descriptors: Tuple[Tuple[str, SeqDescriptor], ...]

    def at(self, atom: str) -> SeqDescriptor:
        return dict(self.descriptors)[atom]

    def term(self, n: CondNat) -> CondRat:
        return CondRat(self.algebra, tuple((a, d.term(int(n.value(a)))) for a, d in self.descriptors))

    def to_json(self) -> Dict[str, Any]:
        return {a: d.to_json() for a, d in self.descriptors}


def _zip_seq(s: CauchySeqQ, t: CauchySeqQ, op) -> CauchySeqQ:
    if s.algebra != t.algebra or [a for a, _ in s.descriptors] != [a for a, _ in t.descriptors]:
        raise SupportMismatch("sequences live on different conditions")
    return CauchySeqQ(s.algebra, tuple((a, op(d, t.at(a))) for a, d in s.descriptors))


def cauchy_add(s: CauchySeqQ, t: CauchySeqQ) -> CauchySeqQ:
    return _zip_seq(s, t, lambda d, e: d + e)


def cauchy_mul(s: CauchySeqQ, t: CauchySeqQ) -> CauchySeqQ:
    return _zip_seq(s, t, lambda d, e: d * e)


def cauchy_modulus(s: CauchySeqQ, eps: CondNumber) -> CondNat:
    """n0 per atom for the Cauchy condition at eps."""
    return CondNat(s.algebra, tuple((a, d.modulus(eps.value(a))) for a, d in s.descriptors))


def cauchy_check(s: CauchySeqQ, eps: Optional[CondNumber] = None, window: int = 8) -> bool:
    """Check |q_n − q_m| < eps on a window past the closed-form modulus."""
    eps = eps or constant(s.algebra, Fraction(1, 1000))
    for a, d in s.descriptors:
        e = eps.value(a)
        n0 = d.modulus(e)
        for n in range(n0, n0 + window):
            for m in range(n0, n0 + window):
                if abs(d.term(n) - d.term(m)) >= e:
                    logger.warning(f"[Cauchy] modulus {n0} fails at {a} for n={n}, m={m}")
                    return False
    return True


def cauchy_limit(s: CauchySeqQ) -> CondReal:
    return CondReal(s.algebra, tuple((a, d.limit) for a, d in s.descriptors))


def cauchy_equiv(s: CauchySeqQ, t: CauchySeqQ) -> bool:
    """(q_n) ∼ (p_n): the difference tends to 0 at every atom."""
    return all(d.limit == t.at(a).limit for a, d in s.descriptors)


def cauchy_leq(s: CauchySeqQ, t: CauchySeqQ) -> bool:
    """[s] ≤ [t]: for every eps, q_n − p_n < eps eventually; true iff limits are ordered."""
    diff = _zip_seq(s, t, lambda d, e: d + SeqDescriptor(-e.constant, tuple((-r, x) for r, x in e.terms), tuple(-p for p in e.prefix)))
    return all(d.limit <= 0 for _, d in diff.descriptors)


# Finite metric spaces
@dataclass(frozen=True)
class FiniteMetricSpace:
    """A conditional set with exact pairwise distances per atom."""
    space: CondSet
    distances: Tuple[Tuple[str, Tuple[Tuple[Tuple[Hashable, Hashable], Fraction], ...]], ...]

    def __post_init__(self):
        object.__setattr__(self, "distances", tuple(
            (a, tuple(((u, v), to_fraction(d)) for (u, v), d in table)) for a, table in self.distances
        ))
        self.validate()

    @cached_property
    def _tables(self) -> Dict[str, Dict[Tuple[Hashable, Hashable], Fraction]]:
        return {a: dict(table) for a, table in self.distances}

    def d(self, atom: str, u: Hashable, v: Hashable) -> Fraction:
        return self._tables[atom][(u, v)]

    def validate(self) -> None:
        for a in self.space.algebra.atoms:
            if a not in self._tables:
                raise MetricAxiomViolation(f"no distances at {a!r}")
            pts = self.space.carrier(a)
            table = self._tables[a]
            for u in pts:
                for v in pts:
                    if (u, v) not in table:
                        raise MetricAxiomViolation(f"missing d({u!r}, {v!r}) at {a!r}")
                    duv = table[(u, v)]
                    if duv < 0 or (duv == 0) != (u == v):
                        raise MetricAxiomViolation(f"d({u!r}, {v!r}) = {duv} at {a!r}")
                    if duv != table[(v, u)]:
                        raise MetricAxiomViolation(f"asymmetric distance at {a!r}")
                    for w in pts:
                        if table[(u, w)] > duv + table[(v, w)]:
                            raise MetricAxiomViolation(f"triangle inequality fails at {a!r}")

    def separation(self, atom: str) -> Fraction:
        """Smallest positive distance at an atom (1 for a single point)."""
        positive = [d for d in self._tables[atom].values() if d > 0]
        return min(positive) if positive else Fraction(1)

    def ball(self, atom: str, center: Hashable, radius: Fraction) -> frozenset:
        return frozenset(v for v in self.space.carrier(atom) if self.d(atom, center, v) < radius)

    def greedy_net(self, eps: CondNumber) -> Dict[str, Tuple[Hashable, ...]]:
        """First-fit centers per atom; every point lies within eps of one."""
        result = {}
        for a in self.space.algebra.atoms:
            centers: List[Hashable] = []
            for v in self.space.carrier(a):
                if not any(self.d(a, c, v) < eps.value(a) for c in centers):
                    centers.append(v)
            result[a] = tuple(centers)
        return result

    @classmethod
    def from_vectors(cls, space: CondSet) -> "FiniteMetricSpace":
        """ℓ² space on carriers of rational tuples; distances must be rational."""
        tables = []
        for a in space.algebra.atoms:
            table = []
            for u in space.carrier(a):
                for v in space.carrier(a):
                    sq = sum((Fraction(x) - Fraction(y)) ** 2 for x, y in zip(u, v))
                    root = exact_sqrt(sq)
                    if root is None:
                        raise MetricAxiomViolation(f"distance √{sq} is irrational")
                    table.append(((u, v), root))
            tables.append((a, tuple(table)))
        return cls(space, tuple(tables))


def metric_topology(space: FiniteMetricSpace):
    """Per-atom topology generated by the open balls."""
    from .condtop import generated_topology

    families = {}
    for a in space.space.algebra.atoms:
        radii = sorted({d for d in space._tables[a].values()} | {space.separation(a)})
        radii.append(max(radii) + 1)
        families[a] = [space.ball(a, c, r) for c in space.space.carrier(a) for r in radii if r > 0]
    return generated_topology(space.space, families)


@dataclass
class HeineBorelReport:
    """Outcome of the three compactness clauses on a finite metric space."""
    cover_compact: bool
    complete: bool
    totally_bounded: bool
    sequentially_compact: bool
    nets: List[Dict[str, Any]] = field(default_factory=list)
    sequences: int = 0
    cauchy_sequences: int = 0

    @property
    def agree(self) -> bool:
        clause_two = self.complete and self.totally_bounded
        return self.cover_compact == clause_two == self.sequentially_compact

    def to_dict(self) -> Dict[str, Any]:
        return {
            "cover_compact": self.cover_compact,
            "complete": self.complete,
            "totally_bounded": self.totally_bounded,
            "sequentially_compact": self.sequentially_compact,
            "agree": self.agree,
            "sequences": self.sequences,
            "cauchy_sequences": self.cauchy_sequences,
            "nets": self.nets,
        }


# An eventually periodic sequence per atom: the prefix, then the cycle repeated forever.
PeriodicSeq = Dict[str, Tuple[Tuple[Hashable, ...], Tuple[Hashable, ...]]]


def random_sequence(space: FiniteMetricSpace, rng: random.Random, constant_tail: bool = False) -> PeriodicSeq:
    """A conditional sequence living on 1, drawn independently at every atom."""
    seq = {}
    for a in space.space.algebra.atoms:
        pts = space.space.carrier(a)
        prefix = tuple(rng.choice(pts) for _ in range(rng.randint(0, 3)))
        length = 1 if constant_tail else rng.randint(1, 2 * len(pts) + 1)
        seq[a] = (prefix, tuple(rng.choice(pts) for _ in range(length)))
    return seq


def _tail_diameter(space: FiniteMetricSpace, a: str, cycle: Sequence[Hashable]) -> Fraction:
    return max(space.d(a, u, v) for u in cycle for v in cycle)


def is_cauchy_sequence(space: FiniteMetricSpace, seq: PeriodicSeq) -> bool:
    """Cauchy at every atom: the repeating tail has diameter below every ε, i.e. zero."""
    return all(_tail_diameter(space, a, cycle) == 0 for a, (_, cycle) in seq.items())


def sequence_limit(space: FiniteMetricSpace, seq: PeriodicSeq) -> Optional[Dict[str, Hashable]]:
    """The per-atom limit in the space, or None when the sequence does not converge."""
    limit = {}
    for a, (_, cycle) in seq.items():
        found = [v for v in space.space.carrier(a) if all(space.d(a, u, v) == 0 for u in cycle)]
        if not found:
            return None
        limit[a] = found[0]
    return limit


def convergent_subsequence(space: FiniteMetricSpace, seq: PeriodicSeq) -> Dict[str, Tuple[Hashable, Tuple[int, ...]]]:
    """Per atom, a limit point and the cycle positions of a subsequence converging to it.

    Halves a radius starting above the diameter, each time keeping the first
    ball that still holds infinitely many terms, until the radius drops to the
    separation and the ball is a single point.
    """
    result = {}
    for a, (prefix, cycle) in seq.items():
        positions = list(range(len(cycle)))
        pts = space.space.carrier(a)
        radius = _tail_diameter(space, a, pts) + 1
        center = cycle[0]
        while True:
            for c in pts:
                kept = [i for i in positions if space.d(a, c, cycle[i]) < radius]
                if kept:
                    center, positions = c, kept
                    break
            if radius <= space.separation(a):
                break
            radius /= 2
        result[a] = (center, tuple(len(prefix) + i for i in positions))
    return result


def _subsequence_converges(T, space: FiniteMetricSpace, seq: PeriodicSeq, picked) -> bool:
    for a, (center, positions) in picked.items():
        prefix, cycle = seq[a]
        if not positions or center not in space.space.carrier(a):
            return False
        terms = [cycle[i - len(prefix)] for i in positions]
        if any(space.d(a, u, center) != 0 for u in terms):
            return False
        if not all(set(terms) <= set(O) for O in T.at(a) if center in O):
            return False
    return True


def heine_borel_finite(space: FiniteMetricSpace, rng: Optional[random.Random] = None, sequences: int = 24) -> HeineBorelReport:
    """Cover compactness, completeness with total boundedness, and sequential compactness.

    Completeness and sequential compactness are checked on `sequences` seeded
    eventually periodic conditional sequences, half of them with constant tails.
    """
    from .condtop import is_compact

    rng = rng if rng is not None else random.Random(0)
    X = space.space
    A = X.algebra
    T = metric_topology(space)
    cover_compact = is_compact(T, "cover")

    drawn = [random_sequence(space, rng, constant_tail=(k % 2 == 0)) for k in range(sequences)]
    cauchy = [s for s in drawn if is_cauchy_sequence(space, s)]
    complete = all(sequence_limit(space, s) is not None for s in cauchy)

    nets = []
    totally_bounded = True
    seps = CondReal(A, tuple((a, space.separation(a)) for a in A.atoms))
    diam = CondReal(A, tuple((a, _tail_diameter(space, a, X.carrier(a))) for a in A.atoms))
    for eps in (mul(seps, constant(A, Fraction(1, 2))), seps, constant(A, 1), add(diam, constant(A, 1))):
        net = space.greedy_net(eps)
        for a in A.atoms:
            covered = all(any(space.d(a, c, v) < eps.value(a) for c in net[a]) for v in X.carrier(a))
            # At or below the separation only the whole carrier covers; above the diameter one point does.
            if eps.value(a) <= seps.value(a):
                exact = set(net[a]) == set(X.carrier(a))
            elif eps.value(a) > diam.value(a):
                exact = len(net[a]) == 1
            else:
                exact = 1 <= len(net[a]) <= len(X.carrier(a))
            if not (covered and exact):
                totally_bounded = False
        nets.append({
            "eps": eps.to_json(),
            "count": {a: len(net[a]) for a in A.atoms},
            "centers": {a: [encode_value(c) for c in net[a]] for a in A.atoms},
        })

    sequentially_compact = all(
        _subsequence_converges(T, space, s, convergent_subsequence(space, s)) for s in drawn
    )

    report = HeineBorelReport(
        cover_compact, complete, totally_bounded, sequentially_compact, nets, len(drawn), len(cauchy),
    )
    logger.debug(f"[HeineBorel] {report.to_dict()}")
    return report
