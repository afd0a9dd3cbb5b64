"""
A small s-expression language over the objects of an instance.

    ; comments run to the end of the line
    (inter Y1 Y2)
    (compare x y)
    (let ((Z (union Y1 Y2))) (closure T Z))

Symbols name instance objects, numbers are exact rationals ("3", "-1/2"),
(atoms w1 w2) builds a condition and (list ...) a sequence. Operators are
registered with OperatorRegistry.register and receive evaluated arguments.
"""

import logging
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from . import condfilter, condlin, condmap, condnum, condset, condtop, lp
from .base import CondError, EvalError, ParseError, encode_value, format_fraction
from .boolalg import Condition, complement, join, meet
from .config import get_settings
from .instance import Instance

logger = logging.getLogger(__name__)


# Parsing
@dataclass(frozen=True)
class Symbol:
    name: str
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Expr:
    items: Tuple[Any, ...]
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


def _tokens(source: str):
    line, col, i = 1, 1, 0
    while i < len(source):
        c = source[i]
        if c == "\n":
            line, col, i = line + 1, 1, i + 1
            continue
        if c.isspace():
            col, i = col + 1, i + 1
            continue
        if c == ";":
            while i < len(source) and source[i] != "\n":
                i += 1
            continue
        if c in "()":
            yield c, line, col
            col, i = col + 1, i + 1
            continue
        if c == '"':
            j = source.find('"', i + 1)
            if j < 0:
                raise ParseError("unterminated string", line, col)
            yield source[i:j + 1], line, col
            col, i = col + j + 1 - i, j + 1
            continue
        j = i
        while j < len(source) and not source[j].isspace() and source[j] not in '();"':
            j += 1
        yield source[i:j], line, col
        col, i = col + j - i, j


def _atom(token: str, line: int, col: int) -> Any:
    if token.startswith('"'):
        return token[1:-1]
    try:
        return Fraction(token)
    except ValueError:
        return Symbol(token, line, col)


def parse(source: str) -> List[Any]:
    """All top-level forms of a program."""
    stack: List[Tuple[List[Any], int, int]] = []
    forms: List[Any] = []
    for token, line, col in _tokens(source):
        if token == "(":
            stack.append(([], line, col))
        elif token == ")":
            if not stack:
                raise ParseError("unexpected ')'", line, col)
            items, l0, c0 = stack.pop()
            expr = Expr(tuple(items), l0, c0)
            (stack[-1][0] if stack else forms).append(expr)
        else:
            value = _atom(token, line, col)
            (stack[-1][0] if stack else forms).append(value)
    if stack:
        _, line, col = stack[-1]
        raise ParseError("unclosed '('", line, col)
    return forms


# Operators
@dataclass
class OperatorInfo:
    name: str
    fn: Callable[..., Any]
    arity: Optional[Tuple[int, Optional[int]]] = None
    description: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "arity": list(self.arity) if self.arity else None, "description": self.description}


class OperatorRegistry:
    """Name → operator table shared by every evaluator."""

    _ops: Dict[str, OperatorInfo] = {}
    _lock = threading.RLock()

    @classmethod
    def register(cls, name: str, arity: Optional[Tuple[int, Optional[int]]] = None, description: str = ""):
        def decorator(fn: Callable[..., Any]) -> Callable[..., Any]:
            with cls._lock:
                cls._ops[name] = OperatorInfo(name, fn, arity, description or (fn.__doc__ or "").strip())
            return fn
        return decorator

    @classmethod
    def get(cls, name: str) -> Optional[OperatorInfo]:
        with cls._lock:
            return cls._ops.get(name)

    @classmethod
    def list_all(cls) -> List[str]:
        with cls._lock:
            return sorted(cls._ops)


op = OperatorRegistry.register


@op("atoms", (1, None))
def _atoms(inst: Instance, *names: Symbol) -> Condition:
    return inst.algebra.condition(n.name if isinstance(n, Symbol) else str(n) for n in names)


@op("list")
def _list(inst: Instance, *items: Any) -> List[Any]:
    return list(items)


@op("meet", (2, 2))
def _meet(inst, a, b):
    return meet(a, b)


@op("join", (2, 2))
def _join(inst, a, b):
    return join(a, b)


@op("not", (1, 1))
def _not(inst, a):
    return complement(a)


@op("union", (1, None))
def _union(inst, *Ys):
    """Conditional union ⊔."""
    return condset.cond_union(list(Ys))


@op("inter", (1, None))
def _inter(inst, *Ys):
    """Conditional intersection ⊓."""
    return condset.cond_intersection(list(Ys))


@op("compl", (1, 1))
def _compl(inst, Y):
    return condset.cond_complement(Y)


@op("subset?", (2, 2))
def _subset_leq(inst, Y, Z):
    return condset.subset_leq(Y, Z)


@op("in?", (2, 2))
def _contains(inst, Y, x):
    return condset.contains(Y, x)


@op("hull", (2, None))
def _hull(inst, b, *xs):
    """Stable hull of elements on a condition."""
    return condset.stable_hull(b, xs)


@op("restrict", (2, 2))
def _restrict(inst, value, a):
    if isinstance(value, condnum.CondNumber):
        return value.restrict(a)
    return condset.restrict(value, a)


@op("apply", (2, 2))
def _apply(inst, f, x):
    return condmap.apply(f, x)


@op("compose", (2, 2))
def _compose(inst, f, g):
    return condmap.compose(f, g)


@op("image", (2, 2))
def _image(inst, f, Y):
    return condmap.image(f, Y)


@op("preimage", (2, 2))
def _preimage(inst, f, V):
    return condmap.preimage(f, V)


@op("injective?", (1, 1))
def _injective(inst, f):
    return condmap.is_injective(f)


@op("surjective?", (1, 1))
def _surjective(inst, f):
    return condmap.is_surjective(f)


@op("card", (1, 1))
def _card(inst, Y):
    return condmap.cond_card(Y)


@op("interior", (2, 2))
def _interior(inst, T, Y):
    return condtop.interior(T, Y)


@op("closure", (2, 2))
def _closure(inst, T, Y):
    return condtop.closure(T, Y)


@op("open?", (2, 2))
def _is_open(inst, T, Y):
    return condtop.is_open(T, Y)


@op("closed?", (2, 2))
def _is_closed(inst, T, Y):
    return condtop.is_closed(T, Y)


@op("continuous?", (3, 3))
def _continuous(inst, f, T, S):
    return condtop.is_continuous(f, T, S)


@op("neighborhoods", (2, 2))
def _neighborhoods(inst, T, x):
    return condtop.neighborhood_filter(T, x)


@op("limit", (2, 2))
def _limit(inst, T, F):
    return condtop.limit_set(T, F)


@op("converges?", (3, 3))
def _converges(inst, T, F, x):
    return condtop.converges(T, F, x)


@op("subcover", (2, None))
def _subcover(inst, T, *cover):
    return condtop.find_finite_subcover(T, list(cover))


@op("compact?", (1, 2))
def _compact(inst, T, which: Any = "cover"):
    if isinstance(which, Symbol):
        which = which.name
    return condtop.is_compact(T, which)


@op("ultrafilter", (1, 1))
def _ultrafilter(inst, F):
    return condfilter.ultrafilter_extend(F)


@op("ultra?", (1, 2))
def _is_ultra(inst, U, clause: Any = "i"):
    if isinstance(clause, Symbol):
        clause = clause.name
    return condfilter.is_ultrafilter(U, clause)


@op("compare", (2, 2))
def _compare(inst, x, y):
    """Trichotomy partition (x < y, x > y, x = y)."""
    if isinstance(x, condset.CondElement):
        raise EvalError("compare takes conditional numbers; use an order for elements")
    return condnum.compare(x, y)


@op("+", (2, 2))
def _add(inst, x, y):
    return condnum.add(x, y)


@op("-", (2, 2))
def _sub(inst, x, y):
    return condnum.sub(x, y)


@op("*", (2, 2))
def _mul(inst, x, y):
    return condnum.mul(x, y)


@op("/", (2, 2))
def _div(inst, x, y):
    return condnum.div(x, y)


@op("abs", (1, 1))
def _abs(inst, x):
    return condnum.cabs(x)


@op("const", (1, 1))
def _const(inst, q):
    return condnum.constant(inst.algebra, q)


@op("sup", (1, None))
def _sup(inst, *xs):
    return condnum.cond_sup(list(xs))


@op("inf", (1, None))
def _inf(inst, *xs):
    return condnum.cond_inf(list(xs))


@op("dist", (2, 2))
def _dist(inst, x, y):
    """ℓ² distance as decimals with the configured digits."""
    return condnum.distance_decimal(x, y, get_settings().digits)


@op("dist2", (2, 2))
def _dist2(inst, x, y):
    return condnum.distance_sq(x, y)


@op("eval", (2, 2))
def _eval_functional(inst, f, x):
    return f.value(x)


@op("span", (2, 2))
def _span(inst, ys, x):
    return condlin.span_membership(list(ys), x)


@op("dual", (2, 2))
def _dual(inst, f, fs):
    return condlin.duality_coeffs(f, list(fs))


@op("minkowski", (2, 2))
def _minkowski(inst, Y, Z):
    return condlin.minkowski_add(Y, Z)


@op("scale", (2, 2))
def _scale(inst, lam, Y):
    return condlin.scale(lam, Y)


@op("conv", (1, 1))
def _conv(inst, Y):
    return condlin.conv_hull(Y)


@op("polar", (1, 2))
def _polar(inst, Y, mode: Any = None):
    one_sided = isinstance(mode, Symbol) and mode.name == "one-sided"
    return condlin.polar(Y, one_sided)


@op("separate", (2, 2))
def _separate(inst, C1, C2):
    return condlin.separate(C1, C2)


@op("extend", (3, 3))
def _extend(inst, basis, values, k):
    """Hahn-Banach extension: (extend (list v ...) (list r ...) k)."""
    return condlin.hb_extend(list(basis), list(values), k)


@op("norm", (2, 2))
def _norm(inst, ball, x):
    return condlin.norm_eval(ball, x)


@op("opnorm", (3, 3))
def _opnorm(inst, T, dom, cod):
    return condlin.operator_norm(T, dom, cod)


@op("lp", (1, 1))
def _lp(inst, problem):
    return lp.lp_solve(problem)


# Evaluation
class Evaluator:
    """Evaluates parsed forms against an instance."""

    def __init__(self, instance: Instance):
        self.instance = instance

    def evaluate(self, form: Any, scope: Optional[Dict[str, Any]] = None) -> Any:
        scope = scope or {}
        if isinstance(form, Symbol):
            if form.name in scope:
                return scope[form.name]
            if form.name in self.instance:
                return self.instance.get(form.name)
            raise EvalError(f"unknown name {form.name!r} at {form.line}:{form.column}")
        if not isinstance(form, Expr):
            return form
        if not form.items:
            raise EvalError(f"empty form at {form.line}:{form.column}")
        head, *args = form.items
        if not isinstance(head, Symbol):
            raise EvalError(f"operator expected at {form.line}:{form.column}")
        if head.name == "let":
            return self._let(form, args, scope)
        info = OperatorRegistry.get(head.name)
        if info is None:
            raise EvalError(f"unknown operator {head.name!r} at {head.line}:{head.column}")
        if info.arity is not None:
            lo, hi = info.arity
            if len(args) < lo or (hi is not None and len(args) > hi):
                raise EvalError(f"{head.name} takes {lo}..{hi if hi is not None else 'n'} arguments, got {len(args)}")
        if head.name == "atoms":
            values = list(args)
        else:
            values = [self._argument(a, scope) for a in args]
        try:
            return info.fn(self.instance, *values)
        except EvalError:
            raise
        except CondError as e:
            raise EvalError(f"{head.name} at {head.line}:{head.column}: {type(e).__name__}: {e}", e) from e

    def _argument(self, form: Any, scope: Dict[str, Any]) -> Any:
        # bare mode keywords such as one-sided or fip stay symbols
        if isinstance(form, Symbol) and form.name not in scope and form.name not in self.instance:
            if form.name in ("one-sided", "cover", "fip", "ultrafilter", "i", "ii", "iii", "iv"):
                return form
        return self.evaluate(form, scope)

    def _let(self, form: Expr, args: Sequence[Any], scope: Dict[str, Any]) -> Any:
        if len(args) != 2 or not isinstance(args[0], Expr):
            raise EvalError(f"let needs bindings and a body at {form.line}:{form.column}")
        inner = dict(scope)
        for binding in args[0].items:
            if not isinstance(binding, Expr) or len(binding.items) != 2 or not isinstance(binding.items[0], Symbol):
                raise EvalError(f"malformed binding at {form.line}:{form.column}")
            inner[binding.items[0].name] = self.evaluate(binding.items[1], inner)
        return self.evaluate(args[1], inner)


def render(value: Any) -> Any:
    """JSON form of a result, with the condition it lives on where there is one."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, Fraction):
        return format_fraction(value)
    if isinstance(value, Condition):
        return value.to_json()
    if isinstance(value, (list, tuple)):
        return [render(v) for v in value]
    if isinstance(value, dict):
        return {str(k): render(v) for k, v in value.items()}
    if hasattr(value, "to_json"):
        out = {"type": type(value).__name__, "value": value.to_json()}
        support = getattr(value, "support", None)
        if isinstance(support, Condition):
            out["lives_on"] = support.to_json()
        return out
    if hasattr(value, "to_dict"):
        return value.to_dict()
    return encode_value(value)


def evaluate_source(source: str, instance: Instance) -> List[Any]:
    """Parse and evaluate every top-level form; returns rendered results."""
    ev = Evaluator(instance)
    results = [render(ev.evaluate(form)) for form in parse(source)]
    logger.debug(f"[DSL] evaluated {len(results)} forms")
    return results
