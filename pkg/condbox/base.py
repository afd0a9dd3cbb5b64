"""
Base vocabulary for Cond Box.

Holds the exception hierarchy shared by every module plus the small codecs
used to move exact rationals and carrier values in and out of JSON.
"""

from fractions import Fraction
from typing import Any, Hashable, Optional, Union


Rational = Union[int, Fraction, str]


# Exception hierarchy
class CondError(Exception):
    """Base exception for conditional structures."""
    pass


class InvalidValue(CondError):
    """Input data does not describe a well-formed value."""
    pass


class AlgebraMismatch(CondError):
    """Operands belong to different Boolean algebras."""
    pass


class EmptyFamily(CondError):
    """A non-empty family was required."""
    pass


class DifferentBase(CondError):
    """Partitions do not share the same base condition."""
    pass


class PartitionInvalid(CondError):
    """Parts are not pairwise disjoint or do not join to the base."""
    pass


class PickSupportMismatch(CondError):
    """An amalgamation pick does not live on its part."""
    pass


class PickKindMismatch(CondError):
    """An amalgamation mixes elements and subsets."""
    pass


class EmptyGround(CondError):
    """A generated conditional set needs a non-empty ground set."""
    pass


class EmptyInput(CondError):
    """An operation received no data to work on."""
    pass


class EmptyGenerators(EmptyInput):
    """A finitely generated set needs at least one generator."""
    pass


class SupportMismatch(CondError):
    """Values live on different conditions where equal ones are required."""
    pass


class ParentMismatch(CondError):
    """Values come from different conditional sets."""
    pass


class CarrierMismatch(CondError):
    """A function does not fit the carriers it is applied to."""
    pass


class NotTotal(CondError):
    """The order is not conditionally total."""
    pass


class OrderInvalid(CondError):
    """A relation is not a partial order at some atom."""
    pass


class NoBound(CondError):
    """A required bound, supremum or infimum does not exist at some atom."""
    pass


class InvalidBase(CondError):
    """A filter base or topological base violates its axioms."""
    pass


class TopologyInvalid(CondError):
    """A per-atom family is not a classical topology."""
    pass


class DegenerateSystem(CondError):
    """The members of a system share no common condition."""
    pass


class NotMaterialized(CondError):
    """The structure is too large to enumerate."""
    pass


class NotACover(CondError):
    """The family does not cover the space or has non-open members."""
    pass


class NotFinite(CondError):
    """The carrier is not supported by a finite check."""
    pass


class NotInvertible(CondError):
    """Division by a value that vanishes on a non-zero condition."""

    def __init__(self, condition: Any):
        self.condition = condition
        super().__init__(f"not invertible on {condition}")


class EpsNotPositive(CondError):
    """A radius must be strictly positive at every atom."""
    pass


class DimMismatch(CondError):
    """Vector dimensions do not agree."""
    pass


class MalformedDescriptor(CondError):
    """A Cauchy sequence descriptor is not well formed."""
    pass


class MetricAxiomViolation(CondError):
    """Distances violate a metric axiom."""
    pass


class NotDisjoint(CondError):
    """Convex sets meet on a non-zero condition."""

    def __init__(self, condition: Any):
        self.condition = condition
        super().__init__(f"sets overlap on {condition}")


class DominationViolated(CondError):
    """The functional exceeds the dominating function on its subspace."""
    pass


class BallNotAbsorbing(CondError):
    """A norm ball must contain the origin in its interior."""
    pass


class BallNotCircled(CondError):
    """A norm ball must be symmetric about the origin."""
    pass


class MalformedProblem(CondError):
    """Linear program data has inconsistent shapes or senses."""
    pass


class UnknownSuite(CondError):
    """No law suite is registered under that name."""
    pass


class InstanceError(CondError):
    """An instance file is malformed or has unresolved references."""
    pass


class ConfigError(CondError):
    """A CONDBOX_* setting cannot be parsed."""
    pass


class ParseError(CondError):
    """Expression text could not be parsed."""

    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"{message} at line {line}, column {column}")


class EvalError(CondError):
    """Evaluating an expression failed."""

    def __init__(self, message: str, cause: Optional[BaseException] = None):
        self.cause = cause
        super().__init__(message)


# Rational codec
def to_fraction(value: Rational) -> Fraction:
    """Parse an int, Fraction or "p/q" string into a Fraction."""
    if isinstance(value, bool):
        raise InvalidValue(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise InvalidValue(f"not a rational: {value!r}") from e
    raise InvalidValue(f"not a rational: {value!r}")


def format_fraction(value: Fraction) -> str:
    """Render a Fraction as "p/q", or "n" for integers."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


# Carrier value codec
def encode_value(value: Hashable) -> Any:
    """JSON form of a carrier value: tuples become lists, Fractions strings."""
    if isinstance(value, tuple):
        return [encode_value(v) for v in value]
    if isinstance(value, Fraction):
        return format_fraction(value)
    if hasattr(value, "to_json"):
        return value.to_json()
    return value


def decode_value(data: Any) -> Hashable:
    """Inverse of encode_value for plain JSON (lists become tuples)."""
    if isinstance(data, list):
        return tuple(decode_value(v) for v in data)
    if isinstance(data, dict):
        raise InvalidValue(f"objects are not carrier values: {data!r}")
    return data


def value_key(value: Hashable) -> str:
    """Deterministic sort key for carrier values of mixed type."""
    return repr(encode_value(value))
