"""
Named mutants: deliberately broken operations the suites must catch.

A mutant swaps one module attribute for the duration of a run. Suites call
the mutable operations through their module (condset.cond_complement, not a
from-import), so the swap is visible to them.
"""

import logging
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Callable, Dict, Iterator, List, Optional
from unittest import mock

from .. import condmap, condnum, condset
from ..base import UnknownSuite
from ..boolalg import Partition

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Mutant:
    name: str
    module: object
    attribute: str
    replacement: Callable
    suite: str
    description: str

    def to_dict(self) -> Dict[str, str]:
        return {"name": self.name, "target": f"{self.module.__name__}.{self.attribute}", "suite": self.suite, "description": self.description}


def _complement_no_support_fix(Y: condset.CondSubset) -> condset.CondSubset:
    # relative complement on the support only; atoms off the support get nothing
    X = Y.parent
    merged = {}
    for a, s in Y.pointwise:
        rest = X.carrier_set(a) - s
        if rest:
            merged[a] = rest
    return condset._subset(X, merged)


def _preimage_on_one(f: condmap.CondFunction, V: condset.CondSubset) -> condset.CondSubset:
    # keeps atoms with an empty preimage by substituting the whole carrier
    X = f.domain
    merged = {}
    for a in X.algebra.atoms:
        s = V.at(a)
        pre = {u for u, v in f.at(a).items() if v in s}
        merged[a] = pre or set(X.carrier(a))
    return condset._subset(X, merged)


def _compare_swapped_ties(x: condnum.CondNumber, y: condnum.CondNumber) -> Partition:
    # ties reported as "less than"
    p = _ORIGINAL_COMPARE(x, y)
    return Partition(p.base, (p[0] | p[2], p[1], x.algebra.zero))


_ORIGINAL_COMPARE = condnum.compare

MUTANTS: Dict[str, Mutant] = {
    m.name: m for m in (
        Mutant("complement-no-support-fix", condset, "cond_complement", _complement_no_support_fix, "powerset",
               "complement skips the atoms off the support"),
        Mutant("preimage-on-one", condmap, "preimage", _preimage_on_one, "functions",
               "preimage always lives on 1"),
        Mutant("compare-swapped-ties", condnum, "compare", _compare_swapped_ties, "numbers",
               "trichotomy puts equality into the first part"),
    )
}


def list_mutants() -> List[str]:
    return sorted(MUTANTS)


def get_mutant(name: str) -> Mutant:
    try:
        return MUTANTS[name]
    except KeyError:
        raise UnknownSuite(f"no mutant named {name!r} (known: {', '.join(list_mutants())})") from None


@contextmanager
def applied(name: Optional[str]) -> Iterator[Optional[Mutant]]:
    """Swap in the named mutant for the body of the with block (no-op for None)."""
    if name is None:
        yield None
        return
    mutant = get_mutant(name)
    logger.info(f"[Mutant] applying {mutant.name} to {mutant.module.__name__}.{mutant.attribute}")
    with mock.patch.object(mutant.module, mutant.attribute, mutant.replacement):
        yield mutant
