"""
Exact rational linear programming.

Two-phase tableau simplex over Fractions held in numpy object arrays, with
Bland's rule for both the entering and the leaving variable so degenerate
problems terminate. Every result carries a certificate: the dual vector of an
optimal basis, a Farkas vector for infeasible problems, or an improving ray
for unbounded ones. Certificates refer to the internal standard form
(max c·x, Ax = b, x ≥ 0, b ≥ 0), which is kept on the result.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .base import MalformedProblem, format_fraction, to_fraction

logger = logging.getLogger(__name__)

SENSES = ("max", "min")
OPS = ("<=", ">=", "=")

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class Constraint:
    coeffs: Tuple[Fraction, ...]
    op: str
    rhs: Fraction

    def to_json(self) -> Dict[str, Any]:
        return {"coeffs": [format_fraction(c) for c in self.coeffs], "op": self.op, "rhs": format_fraction(self.rhs)}


Bound = Tuple[Optional[Fraction], Optional[Fraction]]


@dataclass(frozen=True)
class LPProblem:
    """Optimize objective·x subject to constraints and per-variable bounds.

    Bounds default to [0, ∞); None on either side means unbounded there.
    """
    objective: Tuple[Fraction, ...]
    constraints: Tuple[Constraint, ...] = ()
    sense: str = "max"
    bounds: Optional[Tuple[Bound, ...]] = None

    def __post_init__(self):
        n = len(self.objective)
        if n == 0:
            raise MalformedProblem("the objective has no variables")
        if self.sense not in SENSES:
            raise MalformedProblem(f"unknown sense {self.sense!r}")
        object.__setattr__(self, "objective", tuple(to_fraction(c) for c in self.objective))
        rows = []
        for row in self.constraints:
            if row.op not in OPS:
                raise MalformedProblem(f"unknown constraint operator {row.op!r}")
            if len(row.coeffs) != n:
                raise MalformedProblem(f"constraint has {len(row.coeffs)} coefficients, expected {n}")
            rows.append(Constraint(tuple(to_fraction(c) for c in row.coeffs), row.op, to_fraction(row.rhs)))
        object.__setattr__(self, "constraints", tuple(rows))
        bounds = self.bounds if self.bounds is not None else tuple((ZERO, None) for _ in range(n))
        if len(bounds) != n:
            raise MalformedProblem(f"{len(bounds)} bounds for {n} variables")
        clean = []
        for lo, hi in bounds:
            lo = None if lo is None else to_fraction(lo)
            hi = None if hi is None else to_fraction(hi)
            if lo is not None and hi is not None and lo > hi:
                raise MalformedProblem(f"empty bound [{format_fraction(lo)}, {format_fraction(hi)}]")
            clean.append((lo, hi))
        object.__setattr__(self, "bounds", tuple(clean))

    @property
    def size(self) -> int:
        return len(self.objective)

    def value(self, x: Sequence[Fraction]) -> Fraction:
        return sum((c * v for c, v in zip(self.objective, x)), ZERO)

    def is_feasible(self, x: Sequence[Fraction]) -> bool:
        for (lo, hi), v in zip(self.bounds, x):
            if (lo is not None and v < lo) or (hi is not None and v > hi):
                return False
        for row in self.constraints:
            lhs = sum((c * v for c, v in zip(row.coeffs, x)), ZERO)
            if (row.op == "<=" and lhs > row.rhs) or (row.op == ">=" and lhs < row.rhs) or (row.op == "=" and lhs != row.rhs):
                return False
        return True

    def to_json(self) -> Dict[str, Any]:
        def bound(v):
            return None if v is None else format_fraction(v)

        return {
            "sense": self.sense,
            "objective": [format_fraction(c) for c in self.objective],
            "constraints": [row.to_json() for row in self.constraints],
            "bounds": [[bound(lo), bound(hi)] for lo, hi in self.bounds],
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "LPProblem":
        if not isinstance(data, Mapping) or "objective" not in data:
            raise MalformedProblem("an LP problem is an object with an 'objective'")
        try:
            rows = tuple(
                Constraint(tuple(row["coeffs"]), row.get("op", "<="), row["rhs"])
                for row in data.get("constraints", ())
            )
            bounds = data.get("bounds")
            if bounds is not None:
                bounds = tuple((None if lo is None else lo, None if hi is None else hi) for lo, hi in bounds)
            return cls(tuple(data["objective"]), rows, data.get("sense", "max"), bounds)
        except (KeyError, TypeError, ValueError) as e:
            raise MalformedProblem(f"malformed LP problem: {e}") from e


def maximize(objective: Sequence[Any], rows: Sequence[Tuple[Sequence[Any], str, Any]] = (), bounds=None) -> LPProblem:
    return LPProblem(tuple(objective), tuple(Constraint(tuple(c), op, r) for c, op, r in rows), "max", bounds)


def minimize(objective: Sequence[Any], rows: Sequence[Tuple[Sequence[Any], str, Any]] = (), bounds=None) -> LPProblem:
    return LPProblem(tuple(objective), tuple(Constraint(tuple(c), op, r) for c, op, r in rows), "min", bounds)


@dataclass(frozen=True)
class StandardForm:
    """max c·x + offset, Ax = b, x ≥ 0, b ≥ 0, with the map back to the original variables."""
    A: Tuple[Tuple[Fraction, ...], ...]
    b: Tuple[Fraction, ...]
    c: Tuple[Fraction, ...]
    offset: Fraction
    # per original variable: (kind, column(s), constant)
    recover: Tuple[Tuple[str, Tuple[int, ...], Fraction], ...]
    negated: bool

    def original(self, xs: Sequence[Fraction], with_constant: bool = True) -> Tuple[Fraction, ...]:
        out = []
        for kind, cols, k in self.recover:
            base = k if with_constant else ZERO
            if kind == "shift":
                out.append(base + xs[cols[0]])
            elif kind == "mirror":
                out.append(base - xs[cols[0]])
            else:
                out.append(xs[cols[0]] - xs[cols[1]])
        return tuple(out)


def to_standard(p: LPProblem) -> StandardForm:
    sign = ONE if p.sense == "max" else -ONE
    columns = 0
    recover = []
    extra_rows: List[Tuple[Dict[int, Fraction], str, Fraction]] = []
    for lo, hi in p.bounds:
        if lo is not None:
            recover.append(("shift", (columns,), lo))
            if hi is not None:
                extra_rows.append(({columns: ONE}, "<=", hi - lo))
            columns += 1
        elif hi is not None:
            recover.append(("mirror", (columns,), hi))
            columns += 1
        else:
            recover.append(("split", (columns, columns + 1), ZERO))
            columns += 2

    def substitute(coeffs: Sequence[Fraction]) -> Tuple[Dict[int, Fraction], Fraction]:
        row: Dict[int, Fraction] = {}
        const = ZERO
        for a, (kind, cols, k) in zip(coeffs, recover):
            if kind == "shift":
                row[cols[0]] = row.get(cols[0], ZERO) + a
                const += a * k
            elif kind == "mirror":
                row[cols[0]] = row.get(cols[0], ZERO) - a
                const += a * k
            else:
                row[cols[0]] = row.get(cols[0], ZERO) + a
                row[cols[1]] = row.get(cols[1], ZERO) - a
        return row, const

    rows = []
    for con in p.constraints:
        row, const = substitute(con.coeffs)
        rows.append((row, con.op, con.rhs - const))
    rows.extend(extra_rows)
    slacks = sum(1 for _, op, _ in rows if op != "=")
    width = columns + slacks
    A, b = [], []
    s = columns
    for row, op, rhs in rows:
        line = [ZERO] * width
        for j, v in row.items():
            line[j] = v
        if op == "<=":
            line[s] = ONE
            s += 1
        elif op == ">=":
            line[s] = -ONE
            s += 1
        if rhs < 0:
            line = [-v for v in line]
            rhs = -rhs
        A.append(tuple(line))
        b.append(rhs)
    obj, offset = substitute(p.objective)
    c = [ZERO] * width
    for j, v in obj.items():
        c[j] = sign * v
    return StandardForm(tuple(A), tuple(b), tuple(c), sign * offset, tuple(recover), p.sense == "min")


@dataclass(frozen=True)
class LPResult:
    status: str
    x: Optional[Tuple[Fraction, ...]] = None
    objective: Optional[Fraction] = None
    duals: Optional[Tuple[Fraction, ...]] = None
    farkas: Optional[Tuple[Fraction, ...]] = None
    ray: Optional[Tuple[Fraction, ...]] = None
    iterations: int = 0
    standard: Optional[StandardForm] = field(default=None, repr=False, compare=False)

    @property
    def is_optimal(self) -> bool:
        return self.status == OPTIMAL

    def to_json(self) -> Dict[str, Any]:
        def vec(v):
            return None if v is None else [format_fraction(c) for c in v]

        out: Dict[str, Any] = {"status": self.status, "iterations": self.iterations}
        if self.status == OPTIMAL:
            out.update(x=vec(self.x), objective=format_fraction(self.objective), duals=vec(self.duals))
        elif self.status == INFEASIBLE:
            out["farkas"] = vec(self.farkas)
        else:
            out["ray"] = vec(self.ray)
        return out


class _Tableau:
    """Rows [A | I | b] with a basis list; artificial columns track B⁻¹."""

    def __init__(self, sf: StandardForm):
        m, n = len(sf.A), len(sf.c)
        self.m, self.n = m, n
        T = np.empty((m, n + m + 1), dtype=object)
        T.fill(ZERO)
        for i in range(m):
            T[i, :n] = sf.A[i]
            T[i, n + i] = ONE
            T[i, -1] = sf.b[i]
        self.T = T
        self.basis = [n + i for i in range(m)]
        self.iterations = 0

    def pivot(self, r: int, col: int) -> None:
        T = self.T
        T[r, :] = T[r, :] / T[r, col]
        for i in range(self.m):
            if i != r and T[i, col] != 0:
                T[i, :] = T[i, :] - T[i, col] * T[r, :]
        self.basis[r] = col
        self.iterations += 1

    def reduced_costs(self, costs: Sequence[Fraction]) -> List[Fraction]:
        cb = [costs[j] for j in self.basis]
        return [costs[j] - sum((cb[i] * self.T[i, j] for i in range(self.m)), ZERO) for j in range(self.n + self.m)]

    def prices(self, costs: Sequence[Fraction]) -> Tuple[Fraction, ...]:
        """c_B B⁻¹, read from the artificial columns."""
        cb = [costs[j] for j in self.basis]
        return tuple(sum((cb[i] * self.T[i, self.n + k] for i in range(self.m)), ZERO) for k in range(self.m))

    def value(self, costs: Sequence[Fraction]) -> Fraction:
        return sum((costs[j] * self.T[i, -1] for i, j in enumerate(self.basis)), ZERO)

    def solution(self) -> List[Fraction]:
        xs = [ZERO] * (self.n + self.m)
        for i, j in enumerate(self.basis):
            xs[j] = self.T[i, -1]
        return xs

    def run(self, costs: Sequence[Fraction], allowed: int) -> Optional[int]:
        """Pivot to optimality; returns the entering column of an unbounded edge, else None."""
        while True:
            rc = self.reduced_costs(costs)
            entering = next((j for j in range(allowed) if rc[j] > 0), None)
            if entering is None:
                return None
            best: Optional[Tuple[Fraction, int, int]] = None
            for i in range(self.m):
                a = self.T[i, entering]
                if a > 0:
                    key = (self.T[i, -1] / a, self.basis[i], i)
                    if best is None or key < best:
                        best = key
            if best is None:
                return entering
            self.pivot(best[2], entering)


def lp_solve(p: LPProblem) -> LPResult:
    """Solve p exactly; the status is optimal, infeasible or unbounded."""
    sf = to_standard(p)
    tab = _Tableau(sf)
    n, m = tab.n, tab.m
    phase1 = [ZERO] * n + [-ONE] * m
    tab.run(phase1, n)
    if tab.value(phase1) < 0:
        farkas = tab.prices(phase1)
        logger.debug(f"[LP] infeasible after {tab.iterations} pivots")
        return LPResult(INFEASIBLE, farkas=farkas, iterations=tab.iterations, standard=sf)
    # drive zero-level artificials out of the basis where a real column allows it
    for i in range(m):
        if tab.basis[i] >= n:
            col = next((j for j in range(n) if tab.T[i, j] != 0), None)
            if col is not None:
                tab.pivot(i, col)
    phase2 = list(sf.c) + [ZERO] * m
    entering = tab.run(phase2, n)
    if entering is not None:
        direction = [ZERO] * (n + m)
        direction[entering] = ONE
        for i, j in enumerate(tab.basis):
            direction[j] = -tab.T[i, entering]
        ray = sf.original(direction[:n], with_constant=False)
        logger.debug(f"[LP] unbounded after {tab.iterations} pivots")
        return LPResult(UNBOUNDED, ray=ray, iterations=tab.iterations, standard=sf)
    xs = tab.solution()[:n]
    value = tab.value(phase2) + sf.offset
    if sf.negated:
        value = -value
    return LPResult(
        OPTIMAL,
        x=sf.original(xs),
        objective=value,
        duals=tab.prices(phase2),
        iterations=tab.iterations,
        standard=sf,
    )


def verify_farkas(result: LPResult) -> bool:
    """yᵀA ≥ 0 and yᵀb < 0 on the standard form: Ax = b, x ≥ 0 has no solution."""
    sf, y = result.standard, result.farkas
    if sf is None or y is None:
        return False
    cols = len(sf.c)
    yA = [sum((y[i] * sf.A[i][j] for i in range(len(sf.A))), ZERO) for j in range(cols)]
    yb = sum((yi * bi for yi, bi in zip(y, sf.b)), ZERO)
    return all(v >= 0 for v in yA) and yb < 0


def verify_optimal(p: LPProblem, result: LPResult) -> bool:
    """Primal feasibility, dual feasibility and a zero duality gap."""
    sf, y = result.standard, result.duals
    if sf is None or y is None or result.x is None:
        return False
    if not p.is_feasible(result.x) or p.value(result.x) != result.objective:
        return False
    for j in range(len(sf.c)):
        if sum((y[i] * sf.A[i][j] for i in range(len(sf.A))), ZERO) < sf.c[j]:
            return False
    dual_value = sum((yi * bi for yi, bi in zip(y, sf.b)), ZERO) + sf.offset
    return dual_value == (-result.objective if sf.negated else result.objective)


def verify_ray(p: LPProblem, result: LPResult) -> bool:
    """The ray keeps feasibility from the origin of the recession cone and improves the objective."""
    d = result.ray
    if d is None:
        return False
    for (lo, hi), v in zip(p.bounds, d):
        if (lo is not None and v < 0) or (hi is not None and v > 0):
            return False
    for row in p.constraints:
        lhs = sum((c * v for c, v in zip(row.coeffs, d)), ZERO)
        if (row.op == "<=" and lhs > 0) or (row.op == ">=" and lhs < 0) or (row.op == "=" and lhs != 0):
            return False
    gain = p.value(d)
    return gain > 0 if p.sense == "max" else gain < 0


def verify(p: LPProblem, result: LPResult) -> bool:
    if result.status == OPTIMAL:
        return verify_optimal(p, result)
    if result.status == INFEASIBLE:
        return verify_farkas(result)
    return verify_ray(p, result)
