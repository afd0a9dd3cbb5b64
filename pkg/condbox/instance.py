"""
Instance files: one JSON document naming every object an evaluation needs.

    {
      "algebra": {"atoms": ["w1", "w2"]},
      "conditions": {"a": ["w1"]},
      "sets": {"X": {"carriers": {"w1": [1, 2], "w2": [1, 2, 3]}}, "E": {"ground": [1, 2]}},
      "elements": {"x": {"set": "X", "assignment": {"w1": 1, "w2": 3}}},
      "subsets": {"Y": {"set": "X", "pointwise": {"w1": [1], "w2": [2, 3]}}},
      "functions": {"f": {"domain": "X", "codomain": "X", "tables": {"w1": [[1, 2], [2, 2]], ...}}},
      "topologies": {"T": {"set": "X", "opens": {"w1": [[1]], ...}}, "D": {"set": "X", "kind": "discrete"}},
      "filters": {"F": {"set": "X", "generators": ["Y"]}},
      "numbers": {"r": {"w1": "1/2", "w2": "3"}},
      "vectors": {"v": {"w1": ["1", "0"], "w2": ["2"]}},
      "functionals": {...}, "sublinear": {...}, "matrices": {...},
      "polytopes": {"P": {"kind": "circled", "generators": {"w1": [["1", "0"]], ...}}},
      "lps": {"p": {"objective": ["1"], "constraints": [...]}}
    }

Names share one namespace. References resolve on load and every object is
validated by its own constructor.
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Union

from .base import CondError, InstanceError
from .boolalg import Algebra
from .condfilter import CondFilterBase, generate_filter
from .condlin import CondLinFunctional, CondMatrix, PolyhedralSublinear, VPolytope
from .condmap import function_from_json
from .condnum import CondReal, CondRealVec
from .condset import CondSet, element_from_json, generate, subset_from_json
from .condtop import discrete, from_opens, indiscrete
from .lp import LPProblem

logger = logging.getLogger(__name__)

SECTIONS = (
    "conditions", "sets", "elements", "subsets", "functions", "topologies", "filters",
    "numbers", "vectors", "functionals", "sublinear", "matrices", "polytopes", "lps",
)


@dataclass
class Instance:
    algebra: Algebra
    objects: Dict[str, Any] = field(default_factory=dict)
    kinds: Dict[str, str] = field(default_factory=dict)

    def add(self, kind: str, name: str, value: Any) -> None:
        if name in self.objects:
            raise InstanceError(f"name {name!r} is defined twice")
        self.objects[name] = value
        self.kinds[name] = kind

    def get(self, name: str, kind: Optional[str] = None) -> Any:
        if name not in self.objects:
            raise InstanceError(f"unknown name {name!r}")
        if kind is not None and self.kinds[name] != kind:
            raise InstanceError(f"{name!r} is a {self.kinds[name]}, not a {kind}")
        return self.objects[name]

    def __contains__(self, name: str) -> bool:
        return name in self.objects

    def names(self, kind: str) -> List[str]:
        return [n for n, k in self.kinds.items() if k == kind]


def _load_set(algebra: Algebra, name: str, data: Mapping[str, Any]) -> CondSet:
    if "ground" in data:
        return generate([_hashable(v) for v in data["ground"]], algebra, name)
    carriers = data.get("carriers", {})
    missing = [a for a in algebra.atoms if a not in carriers]
    if missing:
        raise InstanceError(f"set {name!r} has no carrier at {missing}")
    return CondSet(algebra, tuple(tuple(_hashable(v) for v in carriers[a]) for a in algebra.atoms), name)


def _hashable(value: Any) -> Any:
    if isinstance(value, list):
        return tuple(_hashable(v) for v in value)
    return value


def load_instance(data: Mapping[str, Any]) -> Instance:
    """Build and validate every object of an instance document."""
    if not isinstance(data, Mapping) or "algebra" not in data:
        raise InstanceError("an instance needs an 'algebra'")
    unknown = set(data) - set(SECTIONS) - {"algebra"}
    if unknown:
        raise InstanceError(f"unknown sections {sorted(unknown)}")
    try:
        algebra = Algebra.from_json(data["algebra"])
        inst = Instance(algebra)
        for name, atoms in data.get("conditions", {}).items():
            inst.add("condition", name, algebra.condition(atoms))
        for name, entry in data.get("sets", {}).items():
            inst.add("set", name, _load_set(algebra, name, entry))
        for name, entry in data.get("elements", {}).items():
            inst.add("element", name, element_from_json(inst.get(entry["set"], "set"), entry))
        for name, entry in data.get("subsets", {}).items():
            inst.add("subset", name, subset_from_json(inst.get(entry["set"], "set"), entry))
        for name, entry in data.get("functions", {}).items():
            dom, cod = inst.get(entry["domain"], "set"), inst.get(entry["codomain"], "set")
            inst.add("function", name, function_from_json(dom, cod, entry))
        for name, entry in data.get("topologies", {}).items():
            X = inst.get(entry["set"], "set")
            kind = entry.get("kind", "opens")
            if kind == "discrete":
                T = discrete(X)
            elif kind == "indiscrete":
                T = indiscrete(X)
            else:
                opens = {a: [[X.decode(a, v) for v in s] for s in fam] for a, fam in entry.get("opens", {}).items()}
                T = from_opens(X, opens)
            inst.add("topology", name, T)
        for name, entry in data.get("filters", {}).items():
            X = inst.get(entry["set"], "set")
            gens = tuple(inst.get(g, "subset") for g in entry.get("generators", ()))
            inst.add("filter", name, generate_filter(CondFilterBase(X, gens)))
        for name, entry in data.get("numbers", {}).items():
            inst.add("number", name, CondReal.from_json(algebra, entry))
        for name, entry in data.get("vectors", {}).items():
            inst.add("vector", name, CondRealVec.from_json(algebra, entry))
        for name, entry in data.get("functionals", {}).items():
            inst.add("functional", name, CondLinFunctional.from_json(algebra, entry))
        for name, entry in data.get("sublinear", {}).items():
            inst.add("sublinear", name, PolyhedralSublinear.from_json(algebra, entry))
        for name, entry in data.get("matrices", {}).items():
            inst.add("matrix", name, CondMatrix(algebra, tuple(entry.items())))
        for name, entry in data.get("polytopes", {}).items():
            inst.add("polytope", name, VPolytope.from_json(algebra, entry))
        for name, entry in data.get("lps", {}).items():
            inst.add("lp", name, LPProblem.from_json(entry))
    except InstanceError:
        raise
    except CondError as e:
        raise InstanceError(f"invalid instance: {type(e).__name__}: {e}") from e
    except (KeyError, TypeError, AttributeError) as e:
        raise InstanceError(f"malformed instance: {e}") from e
    logger.info(f"[Instance] loaded {len(inst.objects)} objects over {len(algebra.atoms)} atoms")
    return inst


def read_instance(path: Union[str, Path]) -> Instance:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise InstanceError(f"cannot read instance {path}: {e}") from e
    return load_instance(data)
