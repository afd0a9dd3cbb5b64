"""
Conditional sets, elements and subsets over a finite atomic algebra.

The canonical representation is per atom: an element assigns a carrier value
to each atom of its support, a subset assigns a non-empty set of carrier
values. AmalgamationExpr is the partition-indexed input language; its normal
form groups atoms carrying the same value. The *_formula functions compute
the power-set operations on normal forms through lattice calls only, which
makes them an independent cross-check of the pointwise operations.
"""

import itertools
import json
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import (
    Any, Dict, FrozenSet, Hashable, Iterable, Iterator, List, Mapping,
    Optional, Sequence, Tuple, Union,
)

from .base import (
    AlgebraMismatch,
    EmptyFamily,
    EmptyGround,
    EmptyInput,
    InvalidValue,
    NotMaterialized,
    ParentMismatch,
    PartitionInvalid,
    PickKindMismatch,
    PickSupportMismatch,
    SupportMismatch,
    decode_value,
    encode_value,
)
from .boolalg import (
    Algebra,
    Condition,
    Partition,
    complement,
    group_atoms,
    is_partition,
    join,
    meet,
    relative_algebra,
)
from .config import get_settings

logger = logging.getLogger(__name__)


def _json_key(value: Hashable) -> str:
    return json.dumps(encode_value(value), sort_keys=True)


@dataclass(frozen=True)
class CondSet:
    """A conditional set given by one non-empty finite carrier per atom."""
    algebra: Algebra
    carriers: Tuple[Tuple[Hashable, ...], ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        carriers = tuple(tuple(dict.fromkeys(c)) for c in self.carriers)
        object.__setattr__(self, "carriers", carriers)
        if len(carriers) != len(self.algebra.atoms):
            raise InvalidValue("one carrier per atom is required")
        for atom, carrier in zip(self.algebra.atoms, carriers):
            if not carrier:
                raise EmptyGround(f"carrier at {atom!r} is empty")

    @cached_property
    def _by_atom(self) -> Dict[str, Tuple[Hashable, ...]]:
        return dict(zip(self.algebra.atoms, self.carriers))

    @cached_property
    def _sets(self) -> Dict[str, FrozenSet[Hashable]]:
        return {a: frozenset(c) for a, c in self._by_atom.items()}

    @cached_property
    def _decoders(self) -> Dict[str, Dict[str, Hashable]]:
        return {a: {_json_key(v): v for v in c} for a, c in self._by_atom.items()}

    def carrier(self, atom: str) -> Tuple[Hashable, ...]:
        """Carrier values at an atom, in carrier order."""
        return self._by_atom[atom]

    def carrier_set(self, atom: str) -> FrozenSet[Hashable]:
        return self._sets[atom]

    def position(self, atom: str, value: Hashable) -> int:
        return self._by_atom[atom].index(value)

    def decode(self, atom: str, data: Any) -> Hashable:
        """Find the carrier value at `atom` whose JSON form is `data`."""
        key = _json_key(decode_value(data))
        try:
            return self._decoders[atom][key]
        except KeyError:
            raise InvalidValue(f"{data!r} is not in the carrier at {atom!r}") from None

    def sort_values(self, atom: str, values: Iterable[Hashable]) -> List[Hashable]:
        chosen = set(values)
        return [v for v in self._by_atom[atom] if v in chosen]

    @property
    def size(self) -> int:
        """Largest per-atom carrier."""
        return max(len(c) for c in self.carriers)

    def to_json(self) -> Dict[str, Any]:
        return {"carriers": {a: [encode_value(v) for v in c] for a, c in self._by_atom.items()}}


@dataclass(frozen=True)
class CondElement:
    """A conditional element living on `support`."""
    parent: CondSet = field(repr=False)
    support: Condition
    assignment: Tuple[Tuple[str, Hashable], ...]

    @cached_property
    def _map(self) -> Dict[str, Hashable]:
        return dict(self.assignment)

    def value(self, atom: str) -> Hashable:
        return self._map[atom]

    def as_dict(self) -> Dict[str, Hashable]:
        return dict(self._map)

    @property
    def lives_on_one(self) -> bool:
        return self.support.is_one

    def to_json(self) -> Dict[str, Any]:
        return {
            "support": self.support.to_json(),
            "assignment": {a: encode_value(v) for a, v in self.assignment},
        }


@dataclass(frozen=True)
class CondSubset:
    """A conditional subset living on `support`; support 0 is the empty set 𝟎."""
    parent: CondSet = field(repr=False)
    support: Condition
    pointwise: Tuple[Tuple[str, FrozenSet[Hashable]], ...]

    @cached_property
    def _map(self) -> Dict[str, FrozenSet[Hashable]]:
        return dict(self.pointwise)

    def at(self, atom: str) -> FrozenSet[Hashable]:
        """The pointwise set at an atom, empty off the support."""
        return self._map.get(atom, frozenset())

    def as_dict(self) -> Dict[str, FrozenSet[Hashable]]:
        return dict(self._map)

    @property
    def lives_on_one(self) -> bool:
        return self.support.is_one

    @property
    def is_empty(self) -> bool:
        return self.support.is_zero

    def to_json(self) -> Dict[str, Any]:
        return {
            "support": self.support.to_json(),
            "pointwise": {
                a: [encode_value(v) for v in self.parent.sort_values(a, s)]
                for a, s in self.pointwise
            },
        }


CondValue = Union[CondElement, CondSubset]


# Construction
def _element(parent: CondSet, mapping: Mapping[str, Hashable]) -> CondElement:
    atoms = [a for a in parent.algebra.atoms if a in mapping]
    return CondElement(parent, parent.algebra.condition(atoms), tuple((a, mapping[a]) for a in atoms))


def _subset(parent: CondSet, mapping: Mapping[str, Iterable[Hashable]]) -> CondSubset:
    atoms = [a for a in parent.algebra.atoms if a in mapping]
    return CondSubset(parent, parent.algebra.condition(atoms), tuple((a, frozenset(mapping[a])) for a in atoms))


def make_element(parent: CondSet, mapping: Mapping[str, Hashable]) -> CondElement:
    """Validated element from an atom -> value map; its atoms form the support."""
    for atom, value in mapping.items():
        if atom not in parent.algebra.atoms:
            raise InvalidValue(f"unknown atom {atom!r}")
        if value not in parent.carrier_set(atom):
            raise InvalidValue(f"{value!r} is not in the carrier at {atom!r}")
    return _element(parent, mapping)


def make_subset(parent: CondSet, mapping: Mapping[str, Iterable[Hashable]]) -> CondSubset:
    """Validated subset from an atom -> values map; its atoms form the support."""
    clean: Dict[str, FrozenSet[Hashable]] = {}
    for atom, values in mapping.items():
        if atom not in parent.algebra.atoms:
            raise InvalidValue(f"unknown atom {atom!r}")
        values = frozenset(values)
        if not values:
            raise InvalidValue(f"pointwise set at {atom!r} must be non-empty")
        if not values <= parent.carrier_set(atom):
            raise InvalidValue(f"values at {atom!r} leave the carrier")
        clean[atom] = values
    return _subset(parent, clean)


def full(parent: CondSet) -> CondSubset:
    """X as a subset of itself."""
    return _subset(parent, {a: parent.carrier(a) for a in parent.algebra.atoms})


def empty(parent: CondSet) -> CondSubset:
    """The empty conditional set 𝟎."""
    return CondSubset(parent, parent.algebra.zero, ())


def singleton(x: CondElement) -> CondSubset:
    return CondSubset(x.parent, x.support, tuple((a, frozenset([v])) for a, v in x.assignment))


def element_from_json(parent: CondSet, data: Mapping[str, Any]) -> CondElement:
    assignment = data.get("assignment", data)
    return make_element(parent, {a: parent.decode(a, v) for a, v in assignment.items()})


def subset_from_json(parent: CondSet, data: Mapping[str, Any]) -> CondSubset:
    pointwise = data.get("pointwise", {})
    result = make_subset(parent, {a: [parent.decode(a, v) for v in vs] for a, vs in pointwise.items()})
    if "support" in data and set(data["support"]) != set(result.support.members):
        raise InvalidValue("support does not match the pointwise atoms")
    return result


def generate(E: Iterable[Hashable], algebra: Algebra, name: str = "") -> CondSet:
    """The conditional set generated by a finite ground set E."""
    ground = tuple(dict.fromkeys(E))
    if not ground:
        raise EmptyGround("the ground set is empty")
    return CondSet(algebra, tuple(ground for _ in algebra.atoms), name)


def alg_as_condset(algebra: Algebra) -> CondSet:
    """The algebra as a conditional set: the carrier at ω is A_ω = {0, ω}."""
    return CondSet(
        algebra,
        tuple((algebra.zero, algebra.atom(a)) for a in algebra.atoms),
        "A",
    )


def condition_as_element(X: CondSet, b: Condition) -> CondElement:
    """The element of alg_as_condset(A) corresponding to the condition b."""
    A = X.algebra
    return _element(X, {a: (A.atom(a) if a in b.members else A.zero) for a in A.atoms})


def element_as_condition(x: CondElement) -> Condition:
    A = x.parent.algebra
    return A.condition(a for a, v in x.assignment if not v.is_zero)


def product(family: Sequence[CondSet]) -> CondSet:
    """Conditional product: per-atom cartesian products of the carriers."""
    if not family:
        raise EmptyFamily("the product of an empty family is not a conditional set here")
    algebra = family[0].algebra
    for X in family:
        if X.algebra != algebra:
            raise AlgebraMismatch("product factors use different algebras")
    carriers = tuple(
        tuple(itertools.product(*(X.carrier(a) for X in family)))
        for a in algebra.atoms
    )
    return CondSet(algebra, carriers, "×".join(X.name for X in family))


def pair(P: CondSet, parts: Sequence[CondElement]) -> CondElement:
    """The element of a product with the given coordinates (common support)."""
    support = parts[0].support
    for x in parts:
        if x.support != support:
            raise SupportMismatch("coordinates live on different conditions")
    return make_element(P, {a: tuple(x.value(a) for x in parts) for a in support.atoms()})


def restrict_set(X: CondSet, b: Condition) -> CondSet:
    """The restriction bX as a conditional set over the relative algebra A_b."""
    algebra = relative_algebra(b)
    return CondSet(algebra, tuple(X.carrier(a) for a in algebra.atoms), X.name)


def transport(value: CondValue, target: CondSet) -> CondValue:
    """Move a value living below target's atoms into the restricted set."""
    if not value.support.members <= set(target.algebra.atoms):
        raise SupportMismatch("value does not live inside the restricted set")
    if isinstance(value, CondElement):
        return make_element(target, value.as_dict())
    return make_subset(target, value.as_dict())


# Amalgamation
@dataclass(frozen=True)
class Lit:
    """A classical value used as a constant pick on its part."""
    value: Hashable
    subset: bool = False


Pick = Union[CondElement, CondSubset, "AmalgamationExpr", Lit, None]


@dataclass(frozen=True)
class AmalgamationExpr:
    """∑ a_i x_i: one pick per part of the partition; None only for zero parts."""
    parent: CondSet = field(repr=False)
    partition: Partition
    picks: Tuple[Pick, ...]

    def __post_init__(self):
        object.__setattr__(self, "picks", tuple(self.picks))


def _pick_value(parent: CondSet, part: Condition, pick: Pick) -> Optional[CondValue]:
    if pick is None:
        if not part.is_zero:
            raise PickSupportMismatch(f"missing pick on non-zero part {part}")
        return None
    if isinstance(pick, Lit):
        if pick.subset:
            return make_subset(parent, {a: pick.value for a in part.atoms()})
        return make_element(parent, {a: pick.value for a in part.atoms()})
    if isinstance(pick, AmalgamationExpr):
        pick = amalgamate(pick)
    if pick.parent != parent:
        raise ParentMismatch("pick comes from another conditional set")
    if pick.support != part:
        raise PickSupportMismatch(f"pick lives on {pick.support}, part is {part}")
    return pick


def amalgamate(expr: AmalgamationExpr) -> CondValue:
    """Glue the picks along the partition into one value living on its base."""
    if not is_partition(expr.partition):
        raise PartitionInvalid(f"not a partition of {expr.partition.base}")
    if len(expr.picks) != len(expr.partition.parts):
        raise PickSupportMismatch("one pick per part is required")
    values = [_pick_value(expr.parent, part, pick) for part, pick in zip(expr.partition, expr.picks)]
    present = [v for v in values if v is not None]
    kinds = {type(v) for v in present}
    if len(kinds) > 1:
        raise PickKindMismatch("cannot amalgamate elements with subsets")
    if kinds == {CondSubset}:
        merged: Dict[str, FrozenSet[Hashable]] = {}
        for v in present:
            merged.update(v.as_dict())
        return _subset(expr.parent, merged)
    merged_e: Dict[str, Hashable] = {}
    for v in present:
        merged_e.update(v.as_dict())
    return _element(expr.parent, merged_e)


def from_atoms(value: CondValue) -> AmalgamationExpr:
    """Normal form: one part per distinct value, parts ordered by first atom."""
    A = value.parent.algebra
    groups = group_atoms(A, value.as_dict(), within=value.support)
    subset = isinstance(value, CondSubset)
    return AmalgamationExpr(
        value.parent,
        Partition(value.support, tuple(c for c, _ in groups)),
        tuple(Lit(v, subset) for _, v in groups),
    )


def to_atoms(expr: AmalgamationExpr) -> CondValue:
    return amalgamate(expr)


def restrict(x: CondValue, a: Condition) -> CondValue:
    """ax: the data of x on the atoms of a ∧ support(x)."""
    if a.algebra != x.parent.algebra:
        raise AlgebraMismatch("condition from another algebra")
    keep = meet(a, x.support)
    if isinstance(x, CondElement):
        return CondElement(x.parent, keep, tuple((at, v) for at, v in x.assignment if at in keep.members))
    return CondSubset(x.parent, keep, tuple((at, s) for at, s in x.pointwise if at in keep.members))


# Pointwise power-set operations
def stable_hull(b: Condition, Y: Iterable[CondElement]) -> CondSubset:
    """cond(Y): the pointwise union of a set of elements living on b."""
    Y = list(Y)
    if not Y:
        raise EmptyInput("the stable hull needs at least one element")
    parent = Y[0].parent
    for y in Y:
        if y.parent != parent:
            raise ParentMismatch("elements from different conditional sets")
        if y.support != b:
            raise SupportMismatch(f"element lives on {y.support}, expected {b}")
    return _subset(parent, {a: {y.value(a) for y in Y} for a in b.atoms()})


def _common_parent(family: Sequence[CondSubset], parent: Optional[CondSet]) -> CondSet:
    if parent is None:
        if not family:
            raise EmptyFamily("an empty family needs an explicit parent")
        parent = family[0].parent
    for Y in family:
        if Y.parent != parent:
            raise ParentMismatch("subsets of different conditional sets")
    return parent


def cond_union(family: Sequence[CondSubset], parent: Optional[CondSet] = None) -> CondSubset:
    """⊔Y^i: support is the join of supports, pointwise union where present."""
    parent = _common_parent(family, parent)
    merged: Dict[str, set] = {}
    for Y in family:
        for a, s in Y.pointwise:
            merged.setdefault(a, set()).update(s)
    return _subset(parent, merged)


def cond_intersection(family: Sequence[CondSubset], parent: Optional[CondSet] = None) -> CondSubset:
    """⊓Y^i: atoms under every support whose pointwise intersection is non-empty."""
    parent = _common_parent(family, parent)
    if not family:
        return full(parent)
    merged: Dict[str, FrozenSet[Hashable]] = {}
    for a in parent.algebra.atoms:
        sets = [Y.at(a) for Y in family]
        if all(sets):
            common = frozenset.intersection(*sets)
            if common:
                merged[a] = common
    return _subset(parent, merged)


def cond_complement(Y: CondSubset) -> CondSubset:
    """Y^⊏: the pointwise relative complement where non-empty, the carrier off support."""
    X = Y.parent
    merged: Dict[str, FrozenSet[Hashable]] = {}
    for a in X.algebra.atoms:
        rest = X.carrier_set(a) - Y.at(a)
        if rest:
            merged[a] = rest
    return _subset(X, merged)


def subset_leq(Y: CondSubset, Z: CondSubset) -> bool:
    """Y ⊑ Z."""
    if Y.parent != Z.parent:
        raise ParentMismatch("subsets of different conditional sets")
    return Y.support <= Z.support and all(s <= Z.at(a) for a, s in Y.pointwise)


def contains(Y: CondSubset, x: CondElement) -> bool:
    """x ∈ Y: x lives on 1 and its values sit inside Y pointwise."""
    return x.lives_on_one and subset_leq(singleton(x), Y)


def primal(Y: CondSubset) -> List[CondElement]:
    """Y_1: the elements of Y living on 1 (empty unless Y lives on 1)."""
    if not Y.lives_on_one:
        return []
    return list(elements(Y))


# Formula side: normal forms and lattice calls only
_ABSENT = object()


def _tagged_parts(expr: AmalgamationExpr) -> List[Tuple[Condition, Any]]:
    parts = [(c, p.value) for c, p in zip(expr.partition.parts, expr.picks) if isinstance(p, Lit)]
    if len(parts) != len(expr.picks):
        raise InvalidValue("formula operations need normal forms")
    one = expr.parent.algebra.one
    return parts + [(complement(expr.partition.base), _ABSENT)] if expr.partition.base != one else parts


def _cells(parent: CondSet, operands: Sequence[AmalgamationExpr]) -> List[Tuple[Condition, Tuple[Any, ...]]]:
    cells: List[Tuple[Condition, Tuple[Any, ...]]] = [(parent.algebra.one, ())]
    for expr in operands:
        refined = []
        for c, labels in cells:
            for d, label in _tagged_parts(expr):
                cd = meet(c, d)
                if not cd.is_zero:
                    refined.append((cd, labels + (label,)))
        cells = refined
    return cells


def _normal_form(parent: CondSet, cells: Sequence[Tuple[Condition, FrozenSet[Hashable]]]) -> AmalgamationExpr:
    groups: Dict[FrozenSet[Hashable], Condition] = {}
    for c, value in cells:
        groups[value] = join(groups[value], c) if value in groups else c
    ordered = sorted(groups.items(), key=lambda kv: parent.algebra.index(kv[1].atoms()[0]))
    base = parent.algebra.zero
    for _, c in ordered:
        base = join(base, c)
    return AmalgamationExpr(
        parent,
        Partition(base, tuple(c for _, c in ordered)),
        tuple(Lit(v, True) for v, _ in ordered),
    )


def carrier_form(X: CondSet) -> AmalgamationExpr:
    """X in normal form: atoms grouped by equal carriers."""
    return from_atoms(full(X))


def union_formula(parent: CondSet, operands: Sequence[AmalgamationExpr]) -> AmalgamationExpr:
    """⊔ via ∑ b_i y_i over the common refinement of the operands."""
    result = []
    for c, labels in _cells(parent, operands):
        present = [s for s in labels if s is not _ABSENT]
        if present:
            result.append((c, frozenset().union(*present)))
    return _normal_form(parent, result)


def intersection_formula(parent: CondSet, operands: Sequence[AmalgamationExpr]) -> AmalgamationExpr:
    """⊓ on a★, the join of the cells below every support with non-empty meet."""
    if not operands:
        return carrier_form(parent)
    result = []
    for c, labels in _cells(parent, operands):
        if any(s is _ABSENT for s in labels):
            continue
        common = frozenset.intersection(*labels)
        if common:
            result.append((c, common))
    return _normal_form(parent, result)


def complement_formula(expr: AmalgamationExpr) -> AmalgamationExpr:
    """Y^⊏ as the largest Z with Y ⊓ Z = 𝟎, cell by cell against the carrier form."""
    parent = expr.parent
    result = []
    for c, (s, carrier) in _cells(parent, [expr, carrier_form(parent)]):
        rest = carrier if s is _ABSENT else carrier - s
        if rest:
            result.append((c, rest))
    return _normal_form(parent, result)


# Enumeration
def check_materializable(X: CondSet) -> None:
    settings = get_settings()
    if len(X.algebra.atoms) > settings.materialize_atoms or X.size > settings.materialize_carrier:
        raise NotMaterialized(
            f"{len(X.algebra.atoms)} atoms with carriers up to {X.size} exceed "
            f"{settings.materialize_atoms}/{settings.materialize_carrier}"
        )


def elements(Y: Union[CondSet, CondSubset]) -> Iterator[CondElement]:
    """Every element living on the support of Y (or on 1 for a CondSet)."""
    if isinstance(Y, CondSet):
        Y = full(Y)
    atoms = Y.support.atoms()
    choices = [Y.parent.sort_values(a, Y.at(a)) for a in atoms]
    for combo in itertools.product(*choices):
        yield CondElement(Y.parent, Y.support, tuple(zip(atoms, combo)))


def _nonempty_subsets(values: Sequence[Hashable]) -> List[FrozenSet[Hashable]]:
    out = []
    for r in range(1, len(values) + 1):
        out.extend(frozenset(c) for c in itertools.combinations(values, r))
    return out


def subsets(X: CondSet) -> List[CondSubset]:
    """S(X): every conditional subset living on 1."""
    check_materializable(X)
    atoms = X.algebra.atoms
    options = [_nonempty_subsets(X.carrier(a)) for a in atoms]
    return [CondSubset(X, X.algebra.one, tuple(zip(atoms, combo))) for combo in itertools.product(*options)]


def powerset(X: CondSet) -> List[CondSubset]:
    """P(X): every conditional subset, 𝟎 first."""
    check_materializable(X)
    atoms = X.algebra.atoms
    options = [[None] + _nonempty_subsets(X.carrier(a)) for a in atoms]
    result = []
    for combo in itertools.product(*options):
        kept = [(a, s) for a, s in zip(atoms, combo) if s is not None]
        result.append(CondSubset(X, X.algebra.condition(a for a, _ in kept), tuple(kept)))
    return result


def powerset_atoms(X: CondSet) -> List[CondSubset]:
    """Atoms of P(X): the singletons bx with b an atom of the algebra."""
    result = []
    for a in X.algebra.atoms:
        for v in X.carrier(a):
            result.append(CondSubset(X, X.algebra.atom(a), ((a, frozenset([v])),)))
    return result


def is_stable(b: Condition, Y: Iterable[CondElement]) -> bool:
    """Whether a set of elements on b is closed under amalgamation."""
    Y = set(Y)
    if not Y:
        return True
    return set(elements(stable_hull(b, Y))) == Y
