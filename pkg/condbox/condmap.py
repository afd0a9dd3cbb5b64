"""
Conditional relations, orders and functions.

Functions are stored as one total table per atom, so they are stable by
construction: f(∑ a_i x_i) = ∑ a_i f(x_i). Images and preimages act
pointwise; the preimage lives on b★, the join of the atoms where it is
non-empty.
"""

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Dict, FrozenSet, Hashable, List, Mapping, Optional, Sequence, Tuple, Union

from .base import (
    CarrierMismatch,
    InvalidValue,
    NoBound,
    NotTotal,
    OrderInvalid,
    ParentMismatch,
    SupportMismatch,
    encode_value,
)
from .boolalg import Condition, Partition
from .condnum import CondNat
from .condset import (
    CondElement,
    CondSet,
    CondSubset,
    _element,
    _subset,
    cond_intersection,
    cond_union,
    elements,
    make_element,
    restrict,
)

logger = logging.getLogger(__name__)

Table = Union[Mapping[Hashable, Hashable], Callable[[Hashable], Hashable]]


@dataclass(frozen=True)
class CondFunction:
    """A conditional function X → Y: a total map per atom."""
    domain: CondSet = field(repr=False)
    codomain: CondSet = field(repr=False)
    tables: Tuple[Tuple[str, Tuple[Tuple[Hashable, Hashable], ...]], ...]
    name: str = field(default="", compare=False)

    @cached_property
    def _maps(self) -> Dict[str, Dict[Hashable, Hashable]]:
        return {a: dict(t) for a, t in self.tables}

    def at(self, atom: str) -> Dict[Hashable, Hashable]:
        return self._maps[atom]

    def __call__(self, x: CondElement) -> CondElement:
        return apply(self, x)

    def to_json(self) -> Dict[str, Any]:
        return {
            "tables": {
                a: [[encode_value(u), encode_value(v)] for u, v in t]
                for a, t in self.tables
            }
        }


def make_function(domain: CondSet, codomain: CondSet, per_atom: Mapping[str, Table], name: str = "") -> CondFunction:
    """Build a function from per-atom tables (dicts or callables)."""
    if domain.algebra != codomain.algebra:
        raise CarrierMismatch("domain and codomain use different algebras")
    tables = []
    for a in domain.algebra.atoms:
        if a not in per_atom:
            raise CarrierMismatch(f"no map at atom {a!r}")
        table = per_atom[a]
        rows = []
        for u in domain.carrier(a):
            try:
                v = table(u) if callable(table) else table[u]
            except KeyError:
                raise CarrierMismatch(f"map at {a!r} is undefined at {u!r}") from None
            if v not in codomain.carrier_set(a):
                raise CarrierMismatch(f"{v!r} is outside the codomain carrier at {a!r}")
            rows.append((u, v))
        tables.append((a, tuple(rows)))
    return CondFunction(domain, codomain, tuple(tables), name)


def function_from_json(domain: CondSet, codomain: CondSet, data: Mapping[str, Any]) -> CondFunction:
    tables = data.get("tables", data)
    per_atom = {}
    for a, rows in tables.items():
        if isinstance(rows, Mapping):
            rows = list(rows.items())
        per_atom[a] = {domain.decode(a, u): codomain.decode(a, v) for u, v in rows}
    return make_function(domain, codomain, per_atom)


def identity(X: CondSet) -> CondFunction:
    return make_function(X, X, {a: (lambda u: u) for a in X.algebra.atoms}, "id")


def generated_function(X: CondSet, Y: CondSet, fn: Callable[[Hashable], Hashable], name: str = "") -> CondFunction:
    """The function generated by one classical map, used at every atom."""
    return make_function(X, Y, {a: fn for a in X.algebra.atoms}, name)


def constant_function(X: CondSet, y: CondElement) -> CondFunction:
    if not y.lives_on_one:
        raise SupportMismatch("a constant must live on 1")
    return make_function(X, y.parent, {a: (lambda u, v=y.value(a): v) for a in X.algebra.atoms})


def projection(P: CondSet, factors: Sequence[CondSet], j: int) -> CondFunction:
    """The conditional j-th projection of a product."""
    return make_function(P, factors[j], {a: (lambda u: u[j]) for a in P.algebra.atoms}, f"pi{j + 1}")


def embedding(Y: CondSubset) -> CondFunction:
    """Y (living on 1) as its own conditional set, with the inclusion into its parent."""
    if not Y.lives_on_one:
        raise SupportMismatch("only subsets living on 1 are conditional sets")
    X = Y.parent
    sub = CondSet(X.algebra, tuple(tuple(X.sort_values(a, Y.at(a))) for a in X.algebra.atoms), X.name)
    return make_function(sub, X, {a: (lambda u: u) for a in X.algebra.atoms}, "incl")


def restrict_function(f: CondFunction, Z: CondSubset) -> CondFunction:
    """f^Z: f restricted to a conditional subset living on 1."""
    if Z.parent != f.domain:
        raise CarrierMismatch("subset is not in the domain")
    return compose(f, embedding(Z))


def _check_arg(f: CondFunction, x: Union[CondElement, CondSubset], side: str = "domain") -> None:
    parent = f.domain if side == "domain" else f.codomain
    if x.parent != parent:
        raise ParentMismatch(f"value is not from the {side} of the function")


def apply(f: CondFunction, x: CondElement) -> CondElement:
    """f(x) atomwise on the support of x."""
    if x.parent != f.domain:
        raise CarrierMismatch("element is not from the domain")
    return _element(f.codomain, {a: f.at(a)[v] for a, v in x.assignment})


def compose(f: CondFunction, g: CondFunction) -> CondFunction:
    """f ∘ g: apply g, then f."""
    if g.codomain != f.domain:
        raise CarrierMismatch("codomain of the inner map is not the domain of the outer one")
    return make_function(
        g.domain, f.codomain,
        {a: {u: f.at(a)[v] for u, v in g.at(a).items()} for a in g.domain.algebra.atoms},
    )


def image(f: CondFunction, U: CondSubset) -> CondSubset:
    """f(U) on the support of U."""
    _check_arg(f, U)
    return _subset(f.codomain, {a: {f.at(a)[u] for u in s} for a, s in U.pointwise})


def preimage(f: CondFunction, V: CondSubset) -> CondSubset:
    """f⁻¹(V), living on b★."""
    _check_arg(f, V, "codomain")
    result = {}
    for a, s in V.pointwise:
        pre = {u for u, v in f.at(a).items() if v in s}
        if pre:
            result[a] = pre
    return _subset(f.domain, result)


def is_injective(f: CondFunction) -> bool:
    return all(len(set(m.values())) == len(m) for m in f._maps.values())


def is_surjective(f: CondFunction) -> bool:
    return all(set(f.at(a).values()) == f.codomain.carrier_set(a) for a in f.domain.algebra.atoms)


def is_bijective(f: CondFunction) -> bool:
    return is_injective(f) and is_surjective(f)


def inverse(f: CondFunction) -> CondFunction:
    if not is_bijective(f):
        raise CarrierMismatch("only conditional bijections have inverses")
    return make_function(f.codomain, f.domain, {a: {v: u for u, v in m.items()} for a, m in f._maps.items()})


# Relations and orders
@dataclass(frozen=True)
class CondRelation:
    """R ⊑ X×Y given by non-empty pairs on the atoms of its support."""
    left: CondSet = field(repr=False)
    right: CondSet = field(repr=False)
    pairs: Tuple[Tuple[str, FrozenSet[Tuple[Hashable, Hashable]]], ...]

    @property
    def support(self) -> Condition:
        return self.left.algebra.condition(a for a, _ in self.pairs)

    @cached_property
    def _map(self) -> Dict[str, FrozenSet[Tuple[Hashable, Hashable]]]:
        return dict(self.pairs)

    def at(self, atom: str) -> FrozenSet[Tuple[Hashable, Hashable]]:
        return self._map.get(atom, frozenset())

    def holds(self, atom: str, u: Hashable, v: Hashable) -> bool:
        return (u, v) in self.at(atom)

    def to_json(self) -> Dict[str, Any]:
        return {a: sorted(([encode_value(u), encode_value(v)] for u, v in s), key=repr) for a, s in self.pairs}


def make_relation(left: CondSet, right: CondSet, per_atom: Mapping[str, Any]) -> CondRelation:
    pairs = []
    for a in left.algebra.atoms:
        if a not in per_atom:
            continue
        rel = frozenset((u, v) for u, v in per_atom[a])
        if not rel:
            raise InvalidValue(f"relation at {a!r} is empty")
        for u, v in rel:
            if u not in left.carrier_set(a) or v not in right.carrier_set(a):
                raise CarrierMismatch(f"pair {(u, v)!r} leaves the carriers at {a!r}")
        pairs.append((a, rel))
    return CondRelation(left, right, tuple(pairs))


def generated_relation(left: CondSet, right: CondSet, pred: Callable[[Hashable, Hashable], bool]) -> CondRelation:
    return make_relation(left, right, {
        a: [(u, v) for u in left.carrier(a) for v in right.carrier(a) if pred(u, v)]
        for a in left.algebra.atoms
    })


def graph(f: CondFunction) -> CondRelation:
    return make_relation(f.domain, f.codomain, {a: list(m.items()) for a, m in f._maps.items()})


def _square(R: CondRelation) -> None:
    if R.left != R.right:
        raise CarrierMismatch("property checks need a relation on X×X")


def is_reflexive(R: CondRelation) -> bool:
    _square(R)
    return all(all((u, u) in R.at(a) for u in R.left.carrier(a)) for a in R.support.atoms())


def is_symmetric(R: CondRelation) -> bool:
    _square(R)
    return all(all((v, u) in s for u, v in s) for _, s in R.pairs)


def is_antisymmetric(R: CondRelation) -> bool:
    _square(R)
    return all(all(u == v or (v, u) not in s for u, v in s) for _, s in R.pairs)


def is_transitive(R: CondRelation) -> bool:
    _square(R)
    for _, s in R.pairs:
        succ: Dict[Hashable, set] = {}
        for u, v in s:
            succ.setdefault(u, set()).add(v)
        for u, v in s:
            if not succ.get(v, set()) <= succ[u]:
                return False
    return True


def is_equivalence(R: CondRelation) -> bool:
    return is_reflexive(R) and is_symmetric(R) and is_transitive(R)


@dataclass(frozen=True)
class CondOrder:
    """A conditional partial order, tagged total when every atom is a chain."""
    relation: CondRelation
    kind: str = "partial"

    @property
    def space(self) -> CondSet:
        return self.relation.left

    def le(self, atom: str, u: Hashable, v: Hashable) -> bool:
        return self.relation.holds(atom, u, v)


def make_order(relation: CondRelation, kind: str = "partial") -> CondOrder:
    if kind not in ("partial", "total"):
        raise InvalidValue(f"unknown order kind {kind!r}")
    if not relation.support.is_one:
        raise OrderInvalid("an order must live on 1")
    if not (is_reflexive(relation) and is_antisymmetric(relation) and is_transitive(relation)):
        raise OrderInvalid("relation is not a partial order at every atom")
    if kind == "total":
        for a, s in relation.pairs:
            for u in relation.left.carrier(a):
                for v in relation.left.carrier(a):
                    if (u, v) not in s and (v, u) not in s:
                        raise NotTotal(f"{u!r} and {v!r} are incomparable at {a!r}")
    return CondOrder(relation, kind)


def generated_order(X: CondSet, le: Optional[Callable[[Hashable, Hashable], bool]] = None, kind: str = "total") -> CondOrder:
    """The order generated by a classical one; carrier order by default."""
    if le is None:
        relation = make_relation(X, X, {
            a: [(u, v) for i, u in enumerate(X.carrier(a)) for v in X.carrier(a)[i:]]
            for a in X.algebra.atoms
        })
        return make_order(relation, kind)
    return make_order(generated_relation(X, X, le), kind)


def compare_total(order: CondOrder, x: CondElement, y: CondElement) -> Partition:
    """(a, b, c) ∈ p(1) with x < y on a, y < x on b, x = y on c."""
    if order.kind != "total":
        raise NotTotal("compare_total needs a total order")
    if not (x.lives_on_one and y.lives_on_one):
        raise SupportMismatch("compared elements must live on 1")
    A = order.space.algebra
    lt, gt, eq = [], [], []
    for a in A.atoms:
        u, v = x.value(a), y.value(a)
        if u == v:
            eq.append(a)
        elif order.le(a, u, v):
            lt.append(a)
        elif order.le(a, v, u):
            gt.append(a)
        else:
            raise NotTotal(f"{u!r} and {v!r} are incomparable at {a!r}")
    return Partition.checked(A.one, (A.condition(lt), A.condition(gt), A.condition(eq)))


def primal_is_total(order: CondOrder) -> bool:
    """Whether X_1 with x ≤ y iff x ≤ y at every atom is a classical chain."""
    X = order.space
    pts = list(elements(X))
    for x, y in itertools.combinations(pts, 2):
        xy = all(order.le(a, x.value(a), y.value(a)) for a in X.algebra.atoms)
        yx = all(order.le(a, y.value(a), x.value(a)) for a in X.algebra.atoms)
        if not (xy or yx):
            return False
    return True


def _upper(order: CondOrder, a: str, values: FrozenSet[Hashable]) -> List[Hashable]:
    return [u for u in order.space.carrier(a) if all(order.le(a, v, u) for v in values)]


def _lower(order: CondOrder, a: str, values: FrozenSet[Hashable]) -> List[Hashable]:
    return [u for u in order.space.carrier(a) if all(order.le(a, u, v) for v in values)]


def _extreme(order: CondOrder, a: str, candidates: List[Hashable], least: bool) -> Optional[Hashable]:
    for c in candidates:
        if all(order.le(a, c, d) if least else order.le(a, d, c) for d in candidates):
            return c
    return None


def _check_on_one(order: CondOrder, Y: CondSubset) -> None:
    if Y.parent != order.space:
        raise ParentMismatch("subset is not from the ordered set")
    if not Y.lives_on_one:
        raise SupportMismatch("bounds are taken for subsets living on 1")


def cond_sup(order: CondOrder, Y: CondSubset) -> CondElement:
    """Least upper bound at every atom."""
    _check_on_one(order, Y)
    result = {}
    for a, s in Y.pointwise:
        v = _extreme(order, a, _upper(order, a, s), least=True)
        if v is None:
            raise NoBound(f"no supremum at {a!r}")
        result[a] = v
    return make_element(order.space, result)


def cond_inf(order: CondOrder, Y: CondSubset) -> CondElement:
    _check_on_one(order, Y)
    result = {}
    for a, s in Y.pointwise:
        v = _extreme(order, a, _lower(order, a, s), least=False)
        if v is None:
            raise NoBound(f"no infimum at {a!r}")
        result[a] = v
    return make_element(order.space, result)


def cond_max(order: CondOrder, Y: CondSubset) -> CondElement:
    """The supremum, required to lie in Y."""
    top = cond_sup(order, Y)
    if not all(top.value(a) in s for a, s in Y.pointwise):
        raise NoBound("Y has no conditional maximum")
    return top


def cond_min(order: CondOrder, Y: CondSubset) -> CondElement:
    bottom = cond_inf(order, Y)
    if not all(bottom.value(a) in s for a, s in Y.pointwise):
        raise NoBound("Y has no conditional minimum")
    return bottom


def cond_bounds(order: CondOrder, Y: CondSubset) -> Optional[Tuple[CondElement, CondElement]]:
    """A (lower, upper) pair of bounds, first in carrier order, or None."""
    _check_on_one(order, Y)
    lower, upper = {}, {}
    for a, s in Y.pointwise:
        lo, up = _lower(order, a, s), _upper(order, a, s)
        if not lo or not up:
            return None
        lower[a], upper[a] = lo[0], up[0]
    return make_element(order.space, lower), make_element(order.space, upper)


# Conditional finiteness
def interval_set(n: CondNat, start: Any = 1) -> CondSet:
    """{start ≤ k ≤ n} as a conditional set (carrier start..n_ω per atom)."""
    A = n.algebra
    if not n.lives_on_one:
        raise SupportMismatch("n must live on 1")
    if isinstance(start, int):
        starts = {a: start for a in A.atoms}
    else:
        starts = {a: int(start.value(a)) for a in A.atoms}
    carriers = []
    for a in A.atoms:
        top = int(n.value(a))
        if starts[a] > top:
            raise InvalidValue(f"empty interval at {a!r}")
        carriers.append(tuple(range(starts[a], top + 1)))
    return CondSet(A, tuple(carriers), "interval")


def cond_card(Y: CondSubset) -> CondNat:
    """The conditional natural number with n_ω = |Y_ω|."""
    if not Y.lives_on_one:
        raise SupportMismatch("cardinality is defined for subsets living on 1")
    return CondNat(Y.parent.algebra, tuple((a, len(s)) for a, s in Y.pointwise))


def cond_finite_bijection(Y: CondSubset) -> CondFunction:
    """Y → {1 ≤ l ≤ n}, sending the k-th value (carrier order) to k."""
    incl = embedding(Y)
    target = interval_set(cond_card(Y))
    return make_function(
        incl.domain, target,
        {a: {v: k for k, v in enumerate(incl.domain.carrier(a), start=1)} for a in target.algebra.atoms},
    )


def shift_bijection(m: CondNat, n: CondNat) -> CondFunction:
    """{1 ≤ l ≤ n − m + 1} → {m ≤ l ≤ n}, l ↦ l + m − 1."""
    A = n.algebra
    length = CondNat(A, tuple((a, int(n.value(a)) - int(m.value(a)) + 1) for a in A.atoms))
    source = interval_set(length)
    target = interval_set(n, start=m)
    return make_function(source, target, {a: (lambda l, s=int(m.value(a)): l + s - 1) for a in A.atoms})


# Families and choice
@dataclass(frozen=True)
class SubsetFamily:
    """(Y^i)_{i ∈ I}: a non-empty subset of the target per atom and index value."""
    index: CondSet = field(repr=False)
    target: CondSet = field(repr=False)
    tables: Tuple[Tuple[str, Tuple[Tuple[Hashable, FrozenSet[Hashable]], ...]], ...]

    @cached_property
    def _maps(self) -> Dict[str, Dict[Hashable, FrozenSet[Hashable]]]:
        return {a: dict(t) for a, t in self.tables}

    def at(self, atom: str, i: Hashable) -> FrozenSet[Hashable]:
        return self._maps[atom][i]

    def member(self, i: CondElement) -> CondSubset:
        """Y^i, living on the support of i."""
        if i.parent != self.index:
            raise ParentMismatch("index is not from the index set")
        return _subset(self.target, {a: self.at(a, v) for a, v in i.assignment})


def make_family(index: CondSet, target: CondSet, per_atom: Mapping[str, Mapping[Hashable, Any]]) -> SubsetFamily:
    tables = []
    for a in index.algebra.atoms:
        rows = []
        for i in index.carrier(a):
            values = frozenset(per_atom[a][i])
            if not values or not values <= target.carrier_set(a):
                raise InvalidValue(f"member {i!r} at {a!r} is empty or leaves the carrier")
            rows.append((i, values))
        tables.append((a, tuple(rows)))
    return SubsetFamily(index, target, tuple(tables))


def choice(family: SubsetFamily) -> CondFunction:
    """A conditional family of elements y^i ∈ Y^i, least carrier value first."""
    return make_function(family.index, family.target, {
        a: {i: family.target.sort_values(a, s)[0] for i, s in rows}
        for a, rows in family.tables
    }, "choice")


def _constant_index(index: CondSet, part: Condition, k: int) -> CondElement:
    return make_element(index, {a: k for a in part.atoms()})


def finite_union(family: SubsetFamily, n: CondNat) -> CondSubset:
    """⊔_{1≤k≤n} Y^k stitched over the normal form n = ∑ a_i n_i."""
    pieces = []
    for part, size in n.normal_form():
        pieces.append(cond_union([family.member(_constant_index(family.index, part, k)) for k in range(1, int(size) + 1)]))
    return cond_union(pieces, family.target)


def finite_intersection(family: SubsetFamily, n: CondNat) -> CondSubset:
    """⊓_{1≤k≤n} Y^k; each part contributes its finite meet restricted to it."""
    pieces = []
    for part, size in n.normal_form():
        members = [family.member(_constant_index(family.index, part, k)) for k in range(1, int(size) + 1)]
        pieces.append(restrict(cond_intersection(members), part))
    return cond_union(pieces, family.target)


def family_union_pointwise(family: SubsetFamily, n: CondNat) -> CondSubset:
    """Per-atom union of the first n_ω members."""
    return _subset(family.target, {
        a: frozenset().union(*(family.at(a, k) for k in range(1, int(n.value(a)) + 1)))
        for a in family.target.algebra.atoms
    })
