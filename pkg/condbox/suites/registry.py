"""
Suite Registry for Cond Box law suites.

Provides registration and lookup of randomized law suites.
Uses decorator pattern for clean registration syntax.
"""

import logging
import random
import threading
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, Iterator, List, Optional, Tuple, Type

from ..base import UnknownSuite

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CaseParams:
    """Size knobs and the content seed of one generated case.

    Minimisation shrinks the sizes while the content seed stays fixed, so a
    smaller case is drawn from the same random stream.
    """
    content_seed: str
    atoms: int
    carrier: int
    dim: int

    def rng(self) -> random.Random:
        return random.Random(self.content_seed)

    def shrink(self, **changes: int) -> "CaseParams":
        return replace(self, **changes)

    def to_dict(self) -> Dict[str, Any]:
        return {"content_seed": self.content_seed, "atoms": self.atoms, "carrier": self.carrier, "dim": self.dim}


Law = Tuple[str, bool]


class LawSuite:
    """
    Base class for a randomized law suite.

    Subclasses build a case from CaseParams and yield (law name, holds) pairs.
    Any exception raised while building or checking counts as a failure.
    """

    name: str = ""

    def clamp(self, params: CaseParams) -> CaseParams:
        """Bring params inside the sizes this suite can enumerate."""
        return params

    def build(self, params: CaseParams) -> Any:
        raise NotImplementedError

    def laws(self, case: Any) -> Iterator[Law]:
        raise NotImplementedError

    def check(self, case: Any) -> List[str]:
        """Names of the laws that fail on the case, in check order."""
        return [name for name, holds in self.laws(case) if not holds]

    def describe(self, case: Any) -> Dict[str, Any]:
        """JSON form of the case, enough to rebuild it by hand."""
        return {}


@dataclass
class SuiteInfo:
    """Metadata about a registered suite."""
    name: str
    cls: Type[LawSuite]
    description: str = ""
    laws: List[str] = field(default_factory=list)
    order: int = 100

    def to_dict(self) -> Dict[str, Any]:
        """Convert to JSON-serializable dict."""
        return {
            'name': self.name,
            'description': self.description,
            'laws': list(self.laws),
        }


class SuiteRegistry:
    """
    Central registry for law suites.

    Thread-safe for concurrent access.

    Usage:
        @SuiteRegistry.register(
            "powerset",
            description="Boolean algebra laws of P(X)",
            laws=["complement_meet", ...],
        )
        class PowersetSuite(LawSuite):
            ...
    """

    _suites: Dict[str, SuiteInfo] = {}
    _load_errors: Dict[str, str] = {}
    _lock = threading.RLock()

    @classmethod
    def register(
        cls,
        name: str,
        description: str = "",
        laws: Optional[List[str]] = None,
        order: int = 100,
    ) -> Callable[[Type[LawSuite]], Type[LawSuite]]:
        """
        Decorator to register a suite class.

        Args:
            name: Unique suite name used on the command line
            description: One line summary
            laws: Names of the laws the suite checks
            order: Position in the `all` run (lower runs first)
        """
        def decorator(suite_cls: Type[LawSuite]) -> Type[LawSuite]:
            cls.register_class(name, suite_cls, description, laws, order)
            return suite_cls
        return decorator

    @classmethod
    def register_class(
        cls,
        name: str,
        suite_cls: Type[LawSuite],
        description: str = "",
        laws: Optional[List[str]] = None,
        order: int = 100,
    ) -> None:
        """Register a suite class directly (non-decorator version)."""
        with cls._lock:
            suite_cls.name = name
            cls._suites[name] = SuiteInfo(name, suite_cls, description, list(laws or []), order)
            logger.debug(f"[Registry] Registered suite: {name}")

    @classmethod
    def unregister(cls, name: str) -> bool:
        with cls._lock:
            if name in cls._suites:
                del cls._suites[name]
                logger.debug(f"[Registry] Unregistered suite: {name}")
                return True
            return False

    @classmethod
    def record_load_error(cls, module: str, error: str) -> None:
        """Remember a suite module that failed to import."""
        with cls._lock:
            cls._load_errors[module] = error

    @classmethod
    def clear_load_error(cls, module: str) -> bool:
        with cls._lock:
            return cls._load_errors.pop(module, None) is not None

    @classmethod
    def load_errors(cls) -> Dict[str, str]:
        """Suite modules that failed to import, by module name."""
        with cls._lock:
            return dict(sorted(cls._load_errors.items()))

    @classmethod
    def get(cls, name: str) -> Optional[SuiteInfo]:
        """Get suite info by name. Returns None if not found."""
        with cls._lock:
            return cls._suites.get(name)

    @classmethod
    def get_or_raise(cls, name: str) -> SuiteInfo:
        """Get suite info by name. Raises UnknownSuite if not found."""
        info = cls.get(name)
        if info is None:
            raise UnknownSuite(f"no suite named {name!r} (known: {', '.join(cls.list_all())})")
        return info

    @classmethod
    def list_all(cls) -> List[str]:
        """Registered suite names in run order."""
        with cls._lock:
            return [info.name for info in sorted(cls._suites.values(), key=lambda i: (i.order, i.name))]

    @classmethod
    def create_instance(cls, name: str) -> LawSuite:
        return cls.get_or_raise(name).cls()

    @classmethod
    def get_all_info(cls) -> Dict[str, Dict[str, Any]]:
        with cls._lock:
            return {name: cls._suites[name].to_dict() for name in cls.list_all()}
