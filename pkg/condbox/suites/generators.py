"""
Seeded random builders for suite cases.

Every builder takes the case's random.Random and draws from it in a fixed
order, so a (content seed, sizes) pair always rebuilds the same case.
"""

import random
from fractions import Fraction
from typing import Dict, Hashable, List, Optional, Sequence, Tuple, Type

from ..boolalg import Algebra, Condition
from ..condfilter import CondFilterBase
from ..condlin import CondLinFunctional, PolyhedralSublinear, VPolytope
from ..condmap import CondFunction, make_function
from ..condnum import CauchySeqQ, CondNumber, CondReal, CondRealVec, FiniteMetricSpace, SeqDescriptor
from ..condset import CondElement, CondSet, CondSubset, _element, _subset
from ..condtop import CondTopology, generated_topology
from ..lp import Constraint, LPProblem

Dims = Dict[str, int]


def algebra(rng: random.Random, atoms: int) -> Algebra:
    return Algebra(tuple(f"w{i}" for i in range(1, atoms + 1)))


def condition(rng: random.Random, A: Algebra, nonzero: bool = False) -> Condition:
    members = [a for a in A.atoms if rng.random() < 0.5]
    if nonzero and not members:
        members = [rng.choice(A.atoms)]
    return A.condition(members)


def carrier(rng: random.Random, size_max: int) -> Tuple[int, ...]:
    size = rng.randint(1, size_max)
    return tuple(sorted(rng.sample(range(1, size_max + 3), size)))


def cond_set(rng: random.Random, A: Algebra, size_max: int, name: str = "X") -> CondSet:
    return CondSet(A, tuple(carrier(rng, size_max) for _ in A.atoms), name)


def values(rng: random.Random, pool: Sequence[Hashable]) -> frozenset:
    """A non-empty random subset of pool."""
    return frozenset(rng.sample(list(pool), rng.randint(1, len(pool))))


def subset(rng: random.Random, X: CondSet, on_one: bool = False) -> CondSubset:
    mapping = {}
    for a in X.algebra.atoms:
        if on_one or rng.random() < 0.75:
            mapping[a] = values(rng, X.carrier(a))
    return _subset(X, mapping)


def element(rng: random.Random, X: CondSet, on_one: bool = True) -> CondElement:
    mapping = {}
    for a in X.algebra.atoms:
        if on_one or rng.random() < 0.75:
            mapping[a] = rng.choice(X.carrier(a))
    return _element(X, mapping)


def function(rng: random.Random, X: CondSet, Y: CondSet, injective: bool = False) -> CondFunction:
    """Random per-atom tables; injective where the carriers allow it when asked."""
    tables = {}
    for a in X.algebra.atoms:
        dom, cod = X.carrier(a), Y.carrier(a)
        if injective and len(cod) >= len(dom):
            tables[a] = dict(zip(dom, rng.sample(list(cod), len(dom))))
        else:
            tables[a] = {u: rng.choice(cod) for u in dom}
    return make_function(X, Y, tables)


def topology(rng: random.Random, X: CondSet) -> CondTopology:
    """Topology generated by up to three random subsets per atom."""
    subbase = {}
    for a in X.algebra.atoms:
        subbase[a] = [values(rng, X.carrier(a)) for _ in range(rng.randint(0, 3))]
    return generated_topology(X, subbase)


def filter_base(rng: random.Random, X: CondSet, valid: Optional[bool] = None) -> CondFilterBase:
    """Supersets of a random kernel; an invalid base adds a generator disjoint from it."""
    if valid is None:
        valid = rng.random() < 0.8
    kernel = subset(rng, X, on_one=True)
    gens = [kernel]
    for _ in range(rng.randint(0, 2)):
        gens.append(_subset(X, {a: s | values(rng, X.carrier(a)) for a, s in kernel.pointwise}))
    if not valid:
        other = {}
        for a, s in kernel.pointwise:
            rest = X.carrier_set(a) - s
            other[a] = rest if rest else s
        gens.append(_subset(X, other))
    rng.shuffle(gens)
    return CondFilterBase(X, tuple(gens))


def rational(rng: random.Random, bound: int = 6, nonzero: bool = False) -> Fraction:
    while True:
        q = Fraction(rng.randint(-bound, bound), rng.randint(1, 4))
        if q != 0 or not nonzero:
            return q


def number(
    rng: random.Random,
    A: Algebra,
    cls: Type[CondNumber] = CondReal,
    support: Optional[Condition] = None,
    zero_rate: float = 0.15,
) -> CondNumber:
    atoms = A.atoms if support is None else support.atoms()
    vals = []
    for a in atoms:
        if cls.rank == 0:
            vals.append((a, rng.randint(1, 9)))
        elif cls.rank == 1:
            vals.append((a, 0 if rng.random() < zero_rate else rng.randint(-9, 9)))
        else:
            vals.append((a, Fraction(0) if rng.random() < zero_rate else rational(rng)))
    return cls(A, tuple(vals))


def dims(rng: random.Random, A: Algebra, dim_max: int, fixed: Optional[int] = None) -> Dims:
    return {a: fixed if fixed is not None else rng.randint(1, dim_max) for a in A.atoms}


def coords(rng: random.Random, n: int, bound: int = 4) -> Tuple[Fraction, ...]:
    return tuple(Fraction(rng.randint(-bound, bound), rng.choice((1, 1, 2))) for _ in range(n))


def vector(rng: random.Random, A: Algebra, d: Dims) -> CondRealVec:
    return CondRealVec(A, tuple((a, coords(rng, n)) for a, n in d.items()))


def functional(rng: random.Random, A: Algebra, d: Dims) -> CondLinFunctional:
    return CondLinFunctional(A, tuple((a, coords(rng, n, 3)) for a, n in d.items()))


def polytope(rng: random.Random, A: Algebra, d: Dims, kind: str = "hull", count: int = 3) -> VPolytope:
    gens = []
    for a, n in d.items():
        gens.append((a, tuple(coords(rng, n) for _ in range(rng.randint(1, count)))))
    return VPolytope(A, tuple(gens), kind)


def sublinear(rng: random.Random, A: Algebra, d: Dims) -> PolyhedralSublinear:
    """max over ±e_i plus a few random pieces; bounded below by |x|_∞."""
    pieces = []
    for a, n in d.items():
        units = [tuple(Fraction(s) if j == i else Fraction(0) for j in range(n)) for i in range(n) for s in (1, -1)]
        pieces.append((a, tuple(units) + tuple(coords(rng, n, 2) for _ in range(rng.randint(0, 2)))))
    return PolyhedralSublinear(A, tuple(pieces))


def metric_space(rng: random.Random, A: Algebra, size_max: int) -> FiniteMetricSpace:
    """ℓ² points on a line, or on the 3-4-5 diagonal of the plane; all distances rational."""
    carriers = []
    for _ in A.atoms:
        ticks = sorted(rng.sample(range(0, 2 * size_max + 2), rng.randint(1, size_max)))
        if rng.random() < 0.5:
            carriers.append(tuple((t,) for t in ticks))
        else:
            carriers.append(tuple((3 * t, 4 * t) for t in ticks))
    return FiniteMetricSpace.from_vectors(CondSet(A, tuple(carriers), "M"))


def descriptor(rng: random.Random) -> SeqDescriptor:
    prefix = tuple(rational(rng) for _ in range(rng.randint(0, 2)))
    terms = []
    for _ in range(rng.randint(0, 2)):
        s = Fraction(rng.choice((-3, -2, -1, 1, 2, 3)), 4)
        terms.append((rational(rng, 3, nonzero=True), s))
    return SeqDescriptor(rational(rng), tuple(terms), prefix)


def sequence(rng: random.Random, A: Algebra) -> CauchySeqQ:
    return CauchySeqQ(A, tuple((a, descriptor(rng)) for a in A.atoms))


def lp_problem(rng: random.Random, nvars: int, nrows: int) -> LPProblem:
    """Small LPs mixing all senses, operators and bound kinds."""
    rows = []
    for _ in range(nrows):
        rows.append(Constraint(
            tuple(Fraction(rng.randint(-3, 3)) for _ in range(nvars)),
            rng.choice(("<=", "<=", ">=", "=")),
            Fraction(rng.randint(-4, 6)),
        ))
    bounds = []
    for _ in range(nvars):
        kind = rng.random()
        if kind < 0.6:
            bounds.append((Fraction(0), None))
        elif kind < 0.75:
            bounds.append((None, None))
        elif kind < 0.9:
            bounds.append((Fraction(rng.randint(-2, 0)), Fraction(rng.randint(1, 3))))
        else:
            bounds.append((None, Fraction(rng.randint(0, 3))))
    objective = tuple(Fraction(rng.randint(-3, 3)) for _ in range(nvars))
    return LPProblem(objective, tuple(rows), rng.choice(("max", "min")), tuple(bounds))


SAMPLE_SCALES = (Fraction(1, 8), Fraction(1, 2), Fraction(1), Fraction(2))


def sample_points(rng: random.Random, A: Algebra, d: Dims, count: int) -> List[CondRealVec]:
    """Random points, each scaled by one of SAMPLE_SCALES so some land well inside a polytope and some outside."""
    points = []
    for _ in range(count):
        t = rng.choice(SAMPLE_SCALES)
        points.append(CondRealVec(A, tuple((a, tuple(t * c for c in v)) for a, v in vector(rng, A, d).entries)))
    return points
