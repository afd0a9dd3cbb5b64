# Cond Box
# Exact conditional set theory, topology, numbers and convex duality over finite atomic Boolean algebras

from .base import (
    CondError,
    InvalidValue,
    NotInvertible,
    NotDisjoint,
    NotMaterialized,
    UnknownSuite,
    InstanceError,
    ConfigError,
    ParseError,
    EvalError,
)
from .boolalg import Algebra, Condition, Partition
from .condset import CondSet, CondSubset, CondElement
from .condmap import CondFunction
from .condfilter import CondFilter, CondFilterBase
from .condtop import CondTopology
from .condnum import CondNat, CondInt, CondRat, CondReal, CondRealVec
from .condlin import CondLinFunctional, VPolytope
from .lp import LPProblem, lp_solve
from .config import Settings, get_settings

__version__ = '0.1.0'

__all__ = [
    # Errors
    'CondError',
    'InvalidValue',
    'NotInvertible',
    'NotDisjoint',
    'NotMaterialized',
    'UnknownSuite',
    'InstanceError',
    'ConfigError',
    'ParseError',
    'EvalError',
    # Core types
    'Algebra',
    'Condition',
    'Partition',
    'CondSet',
    'CondSubset',
    'CondElement',
    'CondFunction',
    'CondFilter',
    'CondFilterBase',
    'CondTopology',
    'CondNat',
    'CondInt',
    'CondRat',
    'CondReal',
    'CondRealVec',
    'CondLinFunctional',
    'VPolytope',
    'LPProblem',
    'lp_solve',
    # Configuration
    'Settings',
    'get_settings',
]
