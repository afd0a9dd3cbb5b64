"""
Conditional topologies on finite conditional sets.

A conditional topology is one classical topology per atom. A conditional
subset is open when each of its slices is open at its atom; interior and
closure act slice by slice. Compactness checks enumerate, except for the
symbolic DiscreteNaturals space, which is decided structurally.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .base import (
    CarrierMismatch,
    InvalidBase,
    InvalidValue,
    NotACover,
    NotFinite,
    ParentMismatch,
    TopologyInvalid,
)
from .boolalg import Algebra, Partition, group_atoms
from .condfilter import CondFilter, ultrafilters
from .condmap import CondFunction, apply, embedding, image, preimage
from .condnum import CondNat
from .condset import (
    CondElement,
    CondSet,
    CondSubset,
    _subset,
    cond_complement,
    cond_intersection,
    cond_union,
    elements,
    full,
    powerset,
    product,
    restrict,
    subset_leq,
    subsets,
)

logger = logging.getLogger(__name__)

Family = FrozenSet[FrozenSet[Hashable]]


def _close(carrier: FrozenSet[Hashable], family: Iterable[FrozenSet[Hashable]]) -> Family:
    """Smallest classical topology on carrier containing family."""
    sets = {frozenset(), carrier} | {frozenset(s) for s in family}
    changed = True
    while changed:
        changed = False
        for s, t in itertools.combinations(list(sets), 2):
            for u in (s | t, s & t):
                if u not in sets:
                    sets.add(u)
                    changed = True
    return frozenset(sets)


def _is_topology(carrier: FrozenSet[Hashable], family: Family) -> bool:
    if frozenset() not in family or carrier not in family:
        return False
    if any(not s <= carrier for s in family):
        return False
    return all((s | t) in family and (s & t) in family for s, t in itertools.combinations(family, 2))


@dataclass(frozen=True)
class CondTopology:
    """One classical topology per atom of the space."""
    space: CondSet = field(repr=False)
    opens: Tuple[Tuple[str, Family], ...]

    def at(self, atom: str) -> Family:
        return dict(self.opens)[atom]

    def is_open_at(self, atom: str, s: FrozenSet[Hashable]) -> bool:
        return frozenset(s) in self.at(atom)

    def minimal_open(self, atom: str, v: Hashable) -> FrozenSet[Hashable]:
        """The smallest open set containing v at an atom."""
        result = self.space.carrier_set(atom)
        for s in self.at(atom):
            if v in s:
                result = result & s
        return result

    def to_json(self) -> Dict[str, object]:
        from .base import encode_value

        return {
            "opens": {
                a: sorted(
                    ([encode_value(v) for v in self.space.sort_values(a, s)] for s in fam),
                    key=lambda vs: (len(vs), repr(vs)),
                )
                for a, fam in self.opens
            }
        }


def from_opens(space: CondSet, per_atom: Mapping[str, Iterable[Iterable[Hashable]]]) -> CondTopology:
    """Validated topology from explicit per-atom open families."""
    opens = []
    for a in space.algebra.atoms:
        carrier = space.carrier_set(a)
        family = frozenset(frozenset(s) for s in per_atom.get(a, ()))
        if not _is_topology(carrier, family):
            raise TopologyInvalid(f"family at {a!r} is not a topology on the carrier")
        opens.append((a, family))
    return CondTopology(space, tuple(opens))


def generated_topology(space: CondSet, per_atom: Mapping[str, Iterable[Iterable[Hashable]]]) -> CondTopology:
    """Per-atom topology generated by a subbase."""
    return CondTopology(space, tuple(
        (a, _close(space.carrier_set(a), (frozenset(s) for s in per_atom.get(a, ()))))
        for a in space.algebra.atoms
    ))


def discrete(space: CondSet) -> CondTopology:
    return generated_topology(space, {a: [[v] for v in space.carrier(a)] for a in space.algebra.atoms})


def indiscrete(space: CondSet) -> CondTopology:
    return generated_topology(space, {})


def _check_space(T: CondTopology, Y: Union[CondSubset, CondElement]) -> None:
    if Y.parent != T.space:
        raise ParentMismatch("value is not from the topological space")


def is_open(T: CondTopology, O: CondSubset) -> bool:
    _check_space(T, O)
    return all(T.is_open_at(a, s) for a, s in O.pointwise)


def is_closed(T: CondTopology, C: CondSubset) -> bool:
    _check_space(T, C)
    return is_open(T, cond_complement(C))


def open_sets(T: CondTopology) -> List[CondSubset]:
    """Every conditionally open subset, 𝟎 included."""
    atoms = T.space.algebra.atoms
    options = [[None] + sorted((s for s in T.at(a) if s), key=lambda s: (len(s), repr(sorted(map(repr, s))))) for a in atoms]
    result = []
    for combo in itertools.product(*options):
        result.append(_subset(T.space, {a: s for a, s in zip(atoms, combo) if s is not None}))
    return result


def closed_sets_on_one(T: CondTopology) -> List[CondSubset]:
    """Closed subsets living on 1."""
    atoms = T.space.algebra.atoms
    options = []
    for a in atoms:
        carrier = T.space.carrier_set(a)
        options.append([carrier - s for s in T.at(a) if carrier - s])
    return [_subset(T.space, dict(zip(atoms, combo))) for combo in itertools.product(*options)]


# Bases
@dataclass(frozen=True)
class CondTopoBase:
    """A stable family of conditional subsets generating a topology."""
    space: CondSet = field(repr=False)
    generators: Tuple[CondSubset, ...]

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))

    def traces(self, atom: str) -> List[FrozenSet[Hashable]]:
        seen: Dict[FrozenSet[Hashable], None] = {}
        for O in self.generators:
            if atom in O.support.members:
                seen.setdefault(O.at(atom), None)
        return list(seen)

    def problems(self) -> List[str]:
        issues = []
        for O in self.generators:
            if O.parent != self.space:
                return ["generator from another conditional set"]
        for a in self.space.algebra.atoms:
            traces = self.traces(a)
            if frozenset().union(*traces) != self.space.carrier_set(a):
                issues.append(f"generators do not cover the carrier at {a!r}")
                continue
            for s, t in itertools.combinations(traces, 2):
                for v in s & t:
                    if not any(v in r and r <= (s & t) for r in traces):
                        issues.append(f"no generator refines the overlap at {a!r} around {v!r}")
        return issues

    def is_valid(self) -> bool:
        return not self.problems()

    def hull(self) -> List[CondSubset]:
        """Stable hull members living on 1."""
        atoms = self.space.algebra.atoms
        options = [self.traces(a) for a in atoms]
        return [_subset(self.space, dict(zip(atoms, combo))) for combo in itertools.product(*options)]


def topology_from_base(B: CondTopoBase) -> CondTopology:
    """Per-atom topology of unions of the base traces."""
    issues = B.problems()
    if issues:
        raise InvalidBase("; ".join(issues))
    opens = []
    for a in B.space.algebra.atoms:
        traces = B.traces(a)
        unions = {frozenset()} | set(traces)
        frontier = set(traces)
        while frontier:
            grown = {s | t for s in frontier for t in traces} - unions
            unions |= grown
            frontier = grown
        opens.append((a, frozenset(unions)))
    return CondTopology(B.space, tuple(opens))


def basis_closure_brute(B: CondTopoBase) -> List[CondSubset]:
    """{a ⊔ O^i}: restrictions of hull members closed under conditional unions."""
    A = B.space.algebra
    sets = {restrict(O, a) for O in B.hull() for a in A.conditions()}
    frontier = set(sets)
    while frontier:
        new = set()
        for P in frontier:
            for Q in list(sets):
                U = cond_union([P, Q])
                if U not in sets:
                    new.add(U)
        sets |= new
        frontier = new
    return sorted(sets, key=lambda Y: repr(Y.to_json()))


# Interior and closure
def interior(T: CondTopology, Y: CondSubset) -> CondSubset:
    """Slice interiors; lives on the atoms where the interior is non-empty."""
    _check_space(T, Y)
    result = {}
    for a, s in Y.pointwise:
        inner = frozenset().union(*(o for o in T.at(a) if o <= s))
        if inner:
            result[a] = inner
    return _subset(T.space, result)


def closure(T: CondTopology, Y: CondSubset) -> CondSubset:
    """Slice closures; the support is kept."""
    _check_space(T, Y)
    result = {}
    for a, s in Y.pointwise:
        carrier = T.space.carrier_set(a)
        closed = [carrier - o for o in T.at(a) if s <= carrier - o]
        result[a] = frozenset.intersection(*closed)
    return _subset(T.space, result)


def is_dense(T: CondTopology, Y: CondSubset) -> bool:
    return closure(T, Y) == full(T.space)


def is_separable(T: CondTopology) -> bool:
    """Finite spaces are their own conditionally finite dense subset."""
    return is_dense(T, full(T.space))


def is_second_countable(T: CondTopology) -> bool:
    """Finitely many opens per atom form a conditionally finite base."""
    return topology_from_base(CondTopoBase(T.space, tuple(o for o in open_sets(T) if o.lives_on_one))) == T


# Neighborhoods and continuity
def neighborhood_filter(T: CondTopology, x: CondElement) -> CondFilter:
    """U(x), kernel = minimal open set around x at every atom."""
    _check_space(T, x)
    if not x.lives_on_one:
        raise InvalidValue("neighborhoods are taken at elements living on 1")
    kernel = _subset(T.space, {a: T.minimal_open(a, v) for a, v in x.assignment})
    return CondFilter(T.space, kernel, (kernel,))


def _check_map(f: CondFunction, T_dom: CondTopology, T_cod: CondTopology) -> None:
    if f.domain != T_dom.space or f.codomain != T_cod.space:
        raise CarrierMismatch("topologies do not sit on the domain and codomain of f")


def continuity_witness(f: CondFunction, T_dom: CondTopology, T_cod: CondTopology) -> Optional[Tuple[str, FrozenSet[Hashable]]]:
    """First (atom, open set) whose preimage is not open, or None."""
    _check_map(f, T_dom, T_cod)
    for a in f.domain.algebra.atoms:
        table = f.at(a)
        for o in sorted(T_cod.at(a), key=lambda s: (len(s), repr(sorted(map(repr, s))))):
            pre = frozenset(u for u, v in table.items() if v in o)
            if not T_dom.is_open_at(a, pre):
                return a, o
    return None


def is_continuous(f: CondFunction, T_dom: CondTopology, T_cod: CondTopology) -> bool:
    """Per-atom classical continuity."""
    witness = continuity_witness(f, T_dom, T_cod)
    if witness is not None:
        logger.debug(f"[Topology] discontinuous at {witness[0]}")
    return witness is None


def is_continuous_by_preimage(f: CondFunction, T_dom: CondTopology, T_cod: CondTopology) -> bool:
    """Preimages of all conditionally open sets are open."""
    _check_map(f, T_dom, T_cod)
    return all(is_open(T_dom, preimage(f, O)) for O in open_sets(T_cod))


def is_continuous_by_closed(f: CondFunction, T_dom: CondTopology, T_cod: CondTopology) -> bool:
    """Preimages of closed sets living on 1 are closed."""
    _check_map(f, T_dom, T_cod)
    return all(is_closed(T_dom, preimage(f, C)) for C in closed_sets_on_one(T_cod))


def is_continuous_by_closure(f: CondFunction, T_dom: CondTopology, T_cod: CondTopology) -> bool:
    """f(cl Y) ⊑ cl f(Y) for every Y."""
    _check_map(f, T_dom, T_cod)
    return all(subset_leq(image(f, closure(T_dom, Y)), closure(T_cod, image(f, Y))) for Y in powerset(f.domain))


def is_continuous_by_interior(f: CondFunction, T_dom: CondTopology, T_cod: CondTopology) -> bool:
    """f⁻¹(int V) ⊑ int f⁻¹(V) for every V."""
    _check_map(f, T_dom, T_cod)
    return all(subset_leq(preimage(f, interior(T_cod, V)), interior(T_dom, preimage(f, V))) for V in powerset(f.codomain))


def is_continuous_at(f: CondFunction, T_dom: CondTopology, T_cod: CondTopology, x: CondElement) -> bool:
    """f⁻¹(V) ∈ U(x) for every V ∈ U(f(x))."""
    _check_map(f, T_dom, T_cod)
    Ux = neighborhood_filter(T_dom, x)
    V = neighborhood_filter(T_cod, apply(f, x)).kernel
    return Ux.contains(preimage(f, V))


def is_continuous_at_by_filters(f: CondFunction, T_dom: CondTopology, T_cod: CondTopology, x: CondElement) -> bool:
    """Every filter converging to x is pushed to a filter converging to f(x)."""
    _check_map(f, T_dom, T_cod)
    fx = apply(f, x)
    Nx = neighborhood_filter(T_dom, x).kernel
    for Z in subsets(f.domain):
        if not subset_leq(Z, Nx):
            continue
        # the filter generated by f(F_Z) has kernel f(Z)
        fZ = image(f, Z)
        if not converges(T_cod, CondFilter(f.codomain, fZ, (fZ,)), fx):
            return False
    return True


# Initial and product topologies
def initial_topology(maps: Sequence[CondFunction], topologies: Sequence[CondTopology]) -> CondTopology:
    """Coarsest topology on the shared domain making every map continuous."""
    if not maps or len(maps) != len(topologies):
        raise CarrierMismatch("one topology per map is required")
    X = maps[0].domain
    subbase: Dict[str, List[FrozenSet[Hashable]]] = {a: [] for a in X.algebra.atoms}
    for f, T in zip(maps, topologies):
        if f.domain != X or f.codomain != T.space:
            raise CarrierMismatch("maps must share a domain and match their topologies")
        for a in X.algebra.atoms:
            table = f.at(a)
            for o in T.at(a):
                subbase[a].append(frozenset(u for u, v in table.items() if v in o))
    return generated_topology(X, subbase)


def product_topology(topologies: Sequence[CondTopology]) -> CondTopology:
    """Initial topology of the projections on the conditional product."""
    from .condmap import projection

    spaces = [T.space for T in topologies]
    P = product(spaces)
    return initial_topology([projection(P, spaces, j) for j in range(len(spaces))], topologies)


def product_base(topologies: Sequence[CondTopology]) -> CondTopoBase:
    """Open rectangles living on 1, one choice of factor opens per atom."""
    spaces = [T.space for T in topologies]
    P = product(spaces)
    atoms = P.algebra.atoms
    per_atom = []
    for a in atoms:
        choices = [[o for o in T.at(a) if o] for T in topologies]
        per_atom.append([frozenset(itertools.product(*rect)) for rect in itertools.product(*choices)])
    return CondTopoBase(P, tuple(_subset(P, dict(zip(atoms, combo))) for combo in itertools.product(*per_atom)))


def relative_topology(T: CondTopology, Y: CondSubset) -> CondTopology:
    """Initial topology of the embedding of Y (living on 1)."""
    _check_space(T, Y)
    return initial_topology([embedding(Y)], [T])


# Convergence
def converges(T: CondTopology, F: CondFilter, x: CondElement) -> bool:
    """U(x) ⊆ F."""
    if F.space != T.space:
        raise ParentMismatch("filter lives on another space")
    return subset_leq(F.kernel, neighborhood_filter(T, x).kernel)


def limit_set(T: CondTopology, F: CondFilter) -> CondSubset:
    """Lim F = ⊓{cl(Y) : Y ∈ F}."""
    if F.space != T.space:
        raise ParentMismatch("filter lives on another space")
    return cond_intersection([closure(T, Y) for Y in F.members()], T.space)


def cluster_points_pointwise(T: CondTopology, F: CondFilter) -> CondSubset:
    """Classical cluster points per atom: the closure of the kernel."""
    return closure(T, F.kernel)


def finer_converging_filter(T: CondTopology, F: CondFilter, x: CondElement) -> Optional[CondFilter]:
    """The filter generated by {V ⊓ U : V ∈ U(x), U ∈ F}, or None if some meet leaves S(X)."""
    V = neighborhood_filter(T, x).kernel
    meet = cond_intersection([V, F.kernel])
    if not meet.lives_on_one:
        return None
    return CondFilter(T.space, meet, (meet,))


# Compactness
@dataclass(frozen=True)
class StitchedSubcover:
    """X ⊑ ∑ a_i ⊔_{j ∈ J^i} O^j."""
    partition: Partition
    index_sets: Tuple[Tuple[int, ...], ...]
    count: CondNat

    def covers(self, space: CondSet, cover: Sequence[CondSubset]) -> bool:
        pieces = []
        for part, indices in zip(self.partition, self.index_sets):
            pieces.append(restrict(cond_union([cover[j] for j in indices], space), part))
        return subset_leq(full(space), cond_union(pieces, space))

    def to_json(self) -> Dict[str, object]:
        return {
            "parts": [p.to_json() for p in self.partition],
            "index_sets": [list(s) for s in self.index_sets],
            "count": self.count.to_json(),
        }


@dataclass(frozen=True)
class NoSubcoverWitness:
    """An atom at which the cover trace has no finite subcover."""
    atom: str
    reason: str

    def to_json(self) -> Dict[str, str]:
        return {"atom": self.atom, "reason": self.reason}


@dataclass(frozen=True)
class SingletonCover:
    """The cover of DiscreteNaturals by its conditional singletons."""
    algebra: Algebra = field(repr=False)


@dataclass(frozen=True)
class DiscreteNaturals:
    """Conditional 𝐍 with the discrete topology, handled symbolically."""
    algebra: Algebra = field(repr=False)

    def singleton_cover(self) -> SingletonCover:
        return SingletonCover(self.algebra)


def find_finite_subcover(T: Union[CondTopology, DiscreteNaturals], cover) -> Union[StitchedSubcover, NoSubcoverWitness]:
    """Greedy first-fit subcover per atom, atoms grouped by equal index sets."""
    if isinstance(T, DiscreteNaturals):
        if isinstance(cover, SingletonCover) and cover.algebra == T.algebra:
            return NoSubcoverWitness(
                T.algebra.atoms[0],
                "the singleton cover of conditional N has no conditionally finite subcover",
            )
        raise NotFinite("only the singleton cover of conditional N is supported")
    cover = list(cover)
    X = T.space
    for O in cover:
        if O.parent != X or not is_open(T, O):
            raise NotACover("cover members must be open subsets of the space")
    chosen: Dict[str, Tuple[int, ...]] = {}
    for a in X.algebra.atoms:
        picked: List[int] = []
        covered: set = set()
        for v in X.carrier(a):
            if v in covered:
                continue
            for j, O in enumerate(cover):
                if v in O.at(a):
                    picked.append(j)
                    covered |= O.at(a)
                    break
            else:
                raise NotACover(f"{v!r} at {a!r} is not covered")
        chosen[a] = tuple(sorted(picked))
    groups = group_atoms(X.algebra, chosen)
    partition = Partition.checked(X.algebra.one, tuple(c for c, _ in groups))
    count = CondNat(X.algebra, tuple((a, len(chosen[a])) for a in X.algebra.atoms))
    return StitchedSubcover(partition, tuple(s for _, s in groups), count)


# Up to this many non-empty open sets, every subfamily that covers X is tried.
COVER_FULL_OPENS = 8


def _covers_space(X: CondSet, cover: Sequence[CondSubset]) -> bool:
    return bool(cover) and subset_leq(full(X), cond_union(list(cover), X))


def _cover_compact(T: CondTopology) -> bool:
    """Stitched finite subcovers for open covers of the space.

    Always tries the cover by all open sets, by neighbourhood kernels and by
    minimal opens. When the space has at most COVER_FULL_OPENS non-empty open
    sets, every covering subfamily of them is tried as well.
    """
    X = T.space
    nonempty = [O for O in open_sets(T) if not O.is_empty]
    covers = [
        nonempty,
        [neighborhood_filter(T, x).kernel for x in elements(X)],
        [_subset(X, {a: T.minimal_open(a, v)}) for a in X.algebra.atoms for v in X.carrier(a)],
    ]
    if len(nonempty) <= COVER_FULL_OPENS:
        for r in range(1, len(nonempty) + 1):
            covers.extend(list(c) for c in itertools.combinations(nonempty, r) if _covers_space(X, c))
    for cover in covers:
        result = find_finite_subcover(T, cover)
        if not isinstance(result, StitchedSubcover) or not result.covers(X, cover):
            return False
    return True


# Closed families of at most FIP_FAMILY_SIZE members drawn from the first
# FIP_POOL closed sets; pools of at most FIP_FULL_POOL sets are enumerated whole.
FIP_FAMILY_SIZE = 3
FIP_POOL = 24
FIP_FULL_POOL = 8


def _fip_compact(T: CondTopology) -> bool:
    """No family of closed sets on 1 has the intersection property and an empty meet.

    Exhaustive when there are at most FIP_FULL_POOL closed sets on 1.
    Otherwise only families of up to FIP_FAMILY_SIZE sets from the first
    FIP_POOL closed sets are tried.
    """
    closed = closed_sets_on_one(T)
    if len(closed) <= FIP_FULL_POOL:
        pool, largest = closed, len(closed)
    else:
        pool, largest = closed[:FIP_POOL], FIP_FAMILY_SIZE
        logger.debug(f"[Topology] FIP check bounded to families of {largest} from {len(pool)} of {len(closed)} closed sets")
    for r in range(1, largest + 1):
        for family in itertools.combinations(pool, r):
            has_fip = all(
                cond_intersection(list(sub)).lives_on_one
                for k in range(1, r + 1) for sub in itertools.combinations(family, k)
            )
            if has_fip and cond_intersection(list(family)).is_empty:
                return False
    return True


def _ultrafilter_compact(T: CondTopology) -> bool:
    candidates = list(elements(T.space))
    return all(any(converges(T, U, x) for x in candidates) for U in ultrafilters(T.space))


def is_compact(T: Union[CondTopology, DiscreteNaturals], which: str = "cover") -> bool:
    """Compactness by open covers, the intersection property, or ultrafilters."""
    if which not in ("cover", "fip", "ultrafilter"):
        raise InvalidValue(f"unknown compactness test {which!r}")
    if isinstance(T, DiscreteNaturals):
        # discrete spaces are compact iff conditionally finite, and N is not
        return False
    if not isinstance(T, CondTopology):
        raise NotFinite(f"unsupported space {type(T).__name__}")
    if which == "cover":
        return _cover_compact(T)
    if which == "fip":
        return _fip_compact(T)
    return _ultrafilter_compact(T)


def is_compact_subset(T: CondTopology, Y: CondSubset, which: str = "cover") -> bool:
    return is_compact(relative_topology(T, Y), which)


# Separation
def is_hausdorff(T: CondTopology) -> bool:
    """Per-atom classical Hausdorff: distinct points have disjoint minimal opens."""
    for a in T.space.algebra.atoms:
        for u, v in itertools.combinations(T.space.carrier(a), 2):
            if T.minimal_open(a, u) & T.minimal_open(a, v):
                return False
    return True


def is_hausdorff_pairwise(T: CondTopology) -> bool:
    """x ⊓ y = 𝟎 implies disjoint neighborhoods U ⊓ V = 𝟎."""
    pts = list(elements(T.space))
    for x, y in itertools.combinations(pts, 2):
        if any(x.value(a) == y.value(a) for a in T.space.algebra.atoms):
            continue
        Nx = neighborhood_filter(T, x).kernel
        Ny = neighborhood_filter(T, y).kernel
        if not cond_intersection([Nx, Ny]).is_empty:
            return False
    return True
