"""
Finite atomic Boolean algebras.

A condition is the set of atoms below it, so every lattice operation is a
set operation on atoms. Partitions keep their parts in order and may carry
zero parts.
"""

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from .base import (
    AlgebraMismatch,
    DifferentBase,
    EmptyFamily,
    InvalidValue,
    PartitionInvalid,
    format_fraction,
    to_fraction,
)


@dataclass(frozen=True)
class Algebra:
    """The power set of a finite ordered list of atoms."""
    atoms: Tuple[str, ...]
    weights: Tuple[Tuple[str, Fraction], ...] = ()

    def __post_init__(self):
        atoms = tuple(self.atoms)
        object.__setattr__(self, "atoms", atoms)
        if not atoms:
            raise InvalidValue("an algebra needs at least one atom")
        if len(set(atoms)) != len(atoms):
            raise InvalidValue(f"duplicate atoms in {atoms}")
        weights = tuple((a, to_fraction(w)) for a, w in self.weights)
        for atom, weight in weights:
            if atom not in atoms:
                raise InvalidValue(f"weight for unknown atom {atom!r}")
            if weight <= 0:
                raise InvalidValue(f"weight of {atom!r} must be positive")
        object.__setattr__(self, "weights", weights)

    @property
    def one(self) -> "Condition":
        return Condition(self, frozenset(self.atoms))

    @property
    def zero(self) -> "Condition":
        return Condition(self, frozenset())

    def condition(self, atoms: Iterable[str]) -> "Condition":
        members = frozenset(atoms)
        unknown = members - set(self.atoms)
        if unknown:
            raise InvalidValue(f"unknown atoms {sorted(unknown)}")
        return Condition(self, members)

    def atom(self, name: str) -> "Condition":
        return self.condition([name])

    def index(self, atom: str) -> int:
        return self.atoms.index(atom)

    def weight(self, atom: str) -> Optional[Fraction]:
        return dict(self.weights).get(atom)

    def conditions(self) -> Iterator["Condition"]:
        """Every condition, ordered by size then by atom order."""
        for r in range(len(self.atoms) + 1):
            for combo in itertools.combinations(self.atoms, r):
                yield Condition(self, frozenset(combo))

    def to_json(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"atoms": list(self.atoms)}
        if self.weights:
            data["weights"] = {a: format_fraction(w) for a, w in self.weights}
        return data

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "Algebra":
        if not isinstance(data, Mapping) or "atoms" not in data:
            raise InvalidValue("algebra descriptor needs an 'atoms' list")
        weights = data.get("weights") or {}
        return cls(tuple(str(a) for a in data["atoms"]), tuple(weights.items()))


@dataclass(frozen=True)
class Condition:
    """An element of a finite atomic Boolean algebra."""
    algebra: Algebra = field(repr=False)
    members: FrozenSet[str]

    def __and__(self, other: "Condition") -> "Condition":
        return meet(self, other)

    def __or__(self, other: "Condition") -> "Condition":
        return join(self, other)

    def __invert__(self) -> "Condition":
        return complement(self)

    def __le__(self, other: "Condition") -> bool:
        return leq(self, other)

    def __contains__(self, atom: str) -> bool:
        return atom in self.members

    def __iter__(self) -> Iterator[str]:
        return iter(self.atoms())

    def __len__(self) -> int:
        return len(self.members)

    @property
    def is_zero(self) -> bool:
        return not self.members

    @property
    def is_one(self) -> bool:
        return len(self.members) == len(self.algebra.atoms)

    def atoms(self) -> List[str]:
        """Member atoms in algebra order."""
        return [a for a in self.algebra.atoms if a in self.members]

    def to_json(self) -> List[str]:
        return self.atoms()

    def __str__(self) -> str:
        return "{" + ",".join(self.atoms()) + "}"


def _check(a: Condition, b: Condition) -> None:
    if a.algebra != b.algebra:
        raise AlgebraMismatch("conditions come from different algebras")


def meet(a: Condition, b: Condition) -> Condition:
    _check(a, b)
    return Condition(a.algebra, a.members & b.members)


def join(a: Condition, b: Condition) -> Condition:
    _check(a, b)
    return Condition(a.algebra, a.members | b.members)


def complement(a: Condition) -> Condition:
    return Condition(a.algebra, frozenset(a.algebra.atoms) - a.members)


def leq(a: Condition, b: Condition) -> bool:
    _check(a, b)
    return a.members <= b.members


def join_all(algebra: Algebra, family: Iterable[Condition]) -> Condition:
    result = algebra.zero
    for c in family:
        result = join(result, c)
    return result


def meet_all(algebra: Algebra, family: Iterable[Condition]) -> Condition:
    result = algebra.one
    for c in family:
        result = meet(result, c)
    return result


@dataclass(frozen=True)
class Partition:
    """An ordered family of conditions meant to decompose `base`.

    Construction does not validate; use is_partition or checked().
    """
    base: Condition
    parts: Tuple[Condition, ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))

    @classmethod
    def checked(cls, base: Condition, parts: Sequence[Condition]) -> "Partition":
        p = cls(base, tuple(parts))
        if not is_partition(p):
            raise PartitionInvalid(f"{[str(c) for c in parts]} is not a partition of {base}")
        return p

    def nonzero(self) -> "Partition":
        return Partition(self.base, tuple(c for c in self.parts if not c.is_zero))

    def __iter__(self) -> Iterator[Condition]:
        return iter(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __getitem__(self, i: int) -> Condition:
        return self.parts[i]

    def to_json(self) -> Dict[str, Any]:
        return {"base": self.base.to_json(), "parts": [c.to_json() for c in self.parts]}


def is_partition(p: Partition) -> bool:
    """Parts pairwise disjoint, inside one algebra, joining to the base."""
    seen: set = set()
    for part in p.parts:
        if part.algebra != p.base.algebra:
            return False
        if seen & part.members:
            return False
        seen |= part.members
    return seen == set(p.base.members)


def disjointify(family: Sequence[Condition]) -> Partition:
    """b_i = a_i ∧ (b_1 ∨ ... ∨ b_{i-1})ᶜ, taking the input order as well-order."""
    if not family:
        raise EmptyFamily("disjointify needs at least one condition")
    algebra = family[0].algebra
    covered = algebra.zero
    parts = []
    for a in family:
        b = meet(a, complement(covered))
        parts.append(b)
        covered = join(covered, b)
    return Partition(covered, tuple(parts))


def refine(p: Partition, q: Partition) -> Partition:
    """Common refinement: every p_i ∧ q_j, p-major order, zeros kept."""
    _check(p.base, q.base)
    if p.base != q.base:
        raise DifferentBase(f"bases {p.base} and {q.base} differ")
    return Partition(p.base, tuple(meet(a, b) for a in p.parts for b in q.parts))


def trichotomy(a: Condition, b: Condition, c: Condition) -> Partition:
    """The partition (a, b, c) of 1 used by total-order comparisons."""
    return Partition.checked(a.algebra.one, (a, b, c))


def relative_algebra(a: Condition) -> Algebra:
    """The relative algebra A_a, as an algebra over the atoms of a."""
    if a.is_zero:
        raise InvalidValue("the relative algebra of 0 is degenerate")
    weights = tuple((atom, w) for atom, w in a.algebra.weights if atom in a.members)
    return Algebra(tuple(a.atoms()), weights)


def group_atoms(algebra: Algebra, key: Mapping[str, Any], within: Optional[Condition] = None) -> List[Tuple[Condition, Any]]:
    """Group atoms with equal key values into conditions, first-seen order."""
    groups: Dict[Any, List[str]] = {}
    order: List[Any] = []
    for atom in algebra.atoms:
        if within is not None and atom not in within.members:
            continue
        k = key[atom]
        if k not in groups:
            groups[k] = []
            order.append(k)
        groups[k].append(atom)
    return [(algebra.condition(groups[k]), k) for k in order]
