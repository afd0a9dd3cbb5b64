"""
Conditional filters on finite conditional sets.

Every classical filter on a finite set is principal, so a conditional filter
is fixed by its kernel: the per-atom intersection of its members. Membership
is decided against the kernel; members() enumerates S(X) when the space is
within the materialization bound, and the ultrafilter characterizations run
on that enumeration.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Hashable, List, Optional, Sequence, Tuple

from .base import (
    CarrierMismatch,
    DegenerateSystem,
    EmptyInput,
    InvalidBase,
    InvalidValue,
    NotMaterialized,
    ParentMismatch,
)
from .boolalg import Condition, complement, meet_all
from .condmap import CondFunction, image
from .condset import (
    CondElement,
    CondSet,
    CondSubset,
    _subset,
    check_materializable,
    cond_complement,
    cond_intersection,
    cond_union,
    elements,
    full,
    powerset,
    primal,
    restrict,
    restrict_set,
    singleton,
    subset_leq,
    subsets,
    transport,
)

logger = logging.getLogger(__name__)

CHARACTERIZATIONS = ("i", "ii", "iii", "iv")

# Above this many pairs, clause (ii) pairs each Y¹ with a sample of partners.
PAIR_LIMIT = 9216


@dataclass(frozen=True)
class CondFilterBase:
    """A generator list living on 1 whose stable hull should be a filter base."""
    space: CondSet = field(repr=False)
    generators: Tuple[CondSubset, ...]

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))

    def traces(self, atom: str) -> List[FrozenSet[Hashable]]:
        seen: Dict[FrozenSet[Hashable], None] = {}
        for Y in self.generators:
            seen.setdefault(Y.at(atom), None)
        return list(seen)

    def hull(self) -> List[CondSubset]:
        """The stable hull of the generators: every per-atom combination of traces."""
        atoms = self.space.algebra.atoms
        options = [self.traces(a) for a in atoms]
        return [
            CondSubset(self.space, self.space.algebra.one, tuple(zip(atoms, combo)))
            for combo in itertools.product(*options)
        ]

    def problems(self) -> List[str]:
        issues = []
        if not self.generators:
            return ["a filter base needs at least one generator"]
        for Y in self.generators:
            if Y.parent != self.space:
                issues.append("generator from another conditional set")
            elif not Y.lives_on_one:
                issues.append(f"generator lives on {Y.support}, not on 1")
        if issues:
            return issues
        for a in self.space.algebra.atoms:
            traces = self.traces(a)
            for s, t in itertools.combinations_with_replacement(traces, 2):
                if not any(r <= (s & t) for r in traces):
                    issues.append(f"traces at {a!r} have no member inside {sorted(map(repr, s & t))}")
        return issues

    def is_valid(self) -> bool:
        return not self.problems()

    def validate(self) -> None:
        issues = self.problems()
        if issues:
            raise InvalidBase("; ".join(issues))


@dataclass(frozen=True)
class CondFilter:
    """A conditional filter on `space`, represented by its kernel."""
    space: CondSet = field(repr=False)
    kernel: CondSubset
    generators: Tuple[CondSubset, ...] = ()

    def contains(self, Y: CondSubset) -> bool:
        if Y.parent != self.space:
            raise ParentMismatch("subset of another conditional set")
        return Y.lives_on_one and subset_leq(self.kernel, Y)

    def __contains__(self, Y: CondSubset) -> bool:
        return self.contains(Y)

    @property
    def is_materialized(self) -> bool:
        try:
            check_materializable(self.space)
        except NotMaterialized:
            return False
        return True

    def members(self) -> List[CondSubset]:
        """Every member, in S(X) enumeration order."""
        return [Z for Z in subsets(self.space) if self.contains(Z)]

    @property
    def is_ultra(self) -> bool:
        """Structural test: every kernel slice is a single point."""
        return all(len(s) == 1 for _, s in self.kernel.pointwise)

    def to_json(self) -> Dict[str, object]:
        gens = self.generators or (self.kernel,)
        return {"generators": [Y.to_json() for Y in gens], "kernel": self.kernel.to_json()}


def generate_filter(B: CondFilterBase) -> CondFilter:
    """F^B = {Z : Y ⊑ Z for some Y in the stable hull of B}."""
    B.validate()
    kernel = cond_intersection(list(B.generators))
    if not kernel.lives_on_one:
        raise InvalidBase("the generators have empty intersection at some atom")
    return CondFilter(B.space, kernel, B.generators)


def principal_filter(x: CondElement) -> CondFilter:
    """All Z with x ∈ Z."""
    if not x.lives_on_one:
        raise InvalidValue("principal filters need an element living on 1")
    return CondFilter(x.parent, singleton(x), (singleton(x),))


def trivial_filter(X: CondSet) -> CondFilter:
    return CondFilter(X, full(X), (full(X),))


def filter_leq(F: CondFilter, G: CondFilter) -> bool:
    """F ⊆ G, i.e. G is finer than F."""
    if F.space != G.space:
        raise ParentMismatch("filters on different conditional sets")
    return subset_leq(G.kernel, F.kernel)


def brute_force_filter(B: CondFilterBase) -> List[CondSubset]:
    """Upward closure of the stable hull by enumerating S(X)."""
    hull = B.hull()
    return [Z for Z in subsets(B.space) if any(subset_leq(Y, Z) for Y in hull)]


def is_filter_base_brute(B: CondFilterBase) -> bool:
    """The pairwise base axiom over the stable hull of B."""
    if not B.generators or any(not Y.lives_on_one or Y.parent != B.space for Y in B.generators):
        return False
    hull = B.hull()
    for Y1, Y2 in itertools.combinations_with_replacement(hull, 2):
        meet12 = cond_intersection([Y1, Y2])
        if not any(subset_leq(Y3, meet12) for Y3 in hull):
            return False
    return True


def primal_family_is_base(B: CondFilterBase) -> bool:
    """Whether the primal sets {Y_1 : Y in the hull} form a classical filter base."""
    if not B.generators:
        return False
    family = [frozenset(primal(Y)) for Y in B.hull()]
    if any(not s for s in family):
        return False
    return all(any(r <= (s & t) for r in family) for s, t in itertools.combinations_with_replacement(family, 2))


def min_condition(system: Sequence[CondSubset]) -> Condition:
    """m_F: the meet of the conditions the members live on."""
    if not system:
        raise EmptyInput("the system has no members")
    m = meet_all(system[0].parent.algebra, (Y.support for Y in system))
    if m.is_zero:
        raise DegenerateSystem("members share no common condition")
    return m


def localize(system: Sequence[CondSubset]) -> CondFilter:
    """m_F F as a filter on m_F X."""
    m = min_condition(system)
    target = restrict_set(system[0].parent, m)
    members = [transport(restrict(Y, m), target) for Y in system]
    return CondFilter(target, cond_intersection(members), tuple(members))


def restrict_filter(F: CondFilter, a: Condition) -> CondFilter:
    """aF as a filter on aX."""
    target = restrict_set(F.space, a)
    kernel = transport(restrict(F.kernel, a), target)
    return CondFilter(target, kernel, (kernel,))


def ultrafilter_extend(F: CondFilter) -> CondFilter:
    """The principal ultrafilter at the least kernel point of every atom."""
    X = F.space
    point = _subset(X, {a: [X.sort_values(a, s)[0]] for a, s in F.kernel.pointwise})
    x = next(iter(elements(point)))
    U = principal_filter(x)
    logger.debug(f"[Filter] extended to the principal ultrafilter at {x.as_dict()}")
    return U


def ultrafilters(X: CondSet) -> List[CondFilter]:
    """Every conditional ultrafilter: one principal filter per element."""
    return [principal_filter(x) for x in elements(X)]


def _least_member(members: Sequence[CondSubset]) -> CondSubset:
    return cond_intersection(list(members))


def _split(Y1: CondSubset, Y2: CondSubset, a: Condition) -> CondSubset:
    """a Y¹_a + aᶜ Y²_{aᶜ}."""
    return cond_union([restrict(Y1, a), restrict(Y2, complement(a))], Y1.parent)


def _stitches(U: CondFilter, Y1: CondSubset, Y2: CondSubset, first: Sequence[Condition]) -> bool:
    """Whether a Y¹ + aᶜ Y² is in U for some condition a; `first` is tried before the rest."""
    tried = set()
    for a in itertools.chain(first, U.space.algebra.conditions()):
        if a in tried:
            continue
        tried.add(a)
        if U.contains(_split(Y1, Y2, a)):
            return True
    return False


def _partner(Y: CondSubset) -> CondSubset:
    """The relative complement of Y at each atom, the carrier where that is empty."""
    comp = cond_complement(Y)
    X = Y.parent
    return cond_union([comp, restrict(full(X), complement(comp.support))], X)


def _clause_i(U: CondFilter, members: List[CondSubset]) -> bool:
    least = _least_member(members)
    for Z in subsets(U.space):
        if subset_leq(Z, least) and Z != least:
            return False
    return True


def _clause_ii(U: CondFilter, P: List[CondSubset]) -> bool:
    exhaustive = len(P) * len(P) <= PAIR_LIMIT
    stride = max(1, len(P) // 32)
    sample = P if exhaustive else P[::stride]
    for Y1 in P:
        partners = sample if exhaustive else sample + [cond_complement(Y1), _partner(Y1)]
        for Y2 in partners:
            if not U.contains(cond_union([Y1, Y2])):
                continue
            if not _stitches(U, Y1, Y2, (Y1.support, complement(Y2.support))):
                return False
    return True


def _clause_iii(U: CondFilter, P: List[CondSubset]) -> bool:
    for Y in P:
        Yc = cond_complement(Y)
        if not _stitches(U, Y, Yc, (Y.support, complement(Yc.support))):
            return False
    return True


def _clause_iv(U: CondFilter, members: List[CondSubset]) -> bool:
    for Y in subsets(U.space):
        if all(cond_intersection([Y, V]).lives_on_one for V in members) and not U.contains(Y):
            return False
    return True


def is_ultrafilter(U: CondFilter, characterization: str = "i") -> bool:
    """Decide ultra-ness through one of the four characterizations by enumeration."""
    if characterization not in CHARACTERIZATIONS:
        raise InvalidValue(f"unknown characterization {characterization!r}")
    check_materializable(U.space)
    if characterization == "i":
        return _clause_i(U, U.members())
    if characterization == "ii":
        return _clause_ii(U, powerset(U.space))
    if characterization == "iii":
        return _clause_iii(U, powerset(U.space))
    return _clause_iv(U, U.members())


def ultrafilter_clauses(U: CondFilter) -> Dict[str, bool]:
    return {c: is_ultrafilter(U, c) for c in CHARACTERIZATIONS}


def pushforward(f: CondFunction, F: CondFilter) -> CondFilterBase:
    """f(F) = {f(U) : U in F}; generator images when F is too large to enumerate."""
    if f.domain != F.space:
        raise CarrierMismatch("the filter does not live on the domain of f")
    source = F.members() if F.is_materialized else list(F.generators) + [F.kernel]
    seen: Dict[CondSubset, None] = {}
    for Y in source:
        seen.setdefault(image(f, Y), None)
    return CondFilterBase(f.codomain, tuple(seen))
