"""Exact rational linear programming: two-phase tableau simplex.

All variables are non-negative.  Every optimal result carries a dual solution
that has been checked for feasibility and for an objective exactly equal to
the primal one.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Dict, List, Optional

SENSES = (">=", "<=", "=")


@dataclass
class Constraint:
    coeffs: Dict[str, Fraction]
    sense: str
    rhs: Fraction
    name: str


@dataclass
class LinearProgramInstance:
    variables: List[str] = field(default_factory=list)
    constraints: List[Constraint] = field(default_factory=list)
    objective: Dict[str, Fraction] = field(default_factory=dict)
    maximize: bool = False

    def add_variable(self, name: str) -> str:
        if name in self._declared():
            raise ValueError(f"variable {name!r} declared twice")
        self.variables.append(name)
        self._names = None
        return name

    def _declared(self) -> set:
        names = getattr(self, "_names", None)
        if names is None or len(names) != len(self.variables):
            names = set(self.variables)
            self._names = names
        return names

    def add_constraint(self, coeffs: Dict[str, object], sense: str, rhs, name: Optional[str] = None) -> str:
        if sense not in SENSES:
            raise ValueError(f"unknown constraint sense {sense!r}")
        name = name or f"r{len(self.constraints) + 1}"
        row = {v: Fraction(c) for v, c in coeffs.items() if Fraction(c) != 0}
        self.constraints.append(Constraint(row, sense, Fraction(rhs), name))
        return name

    def set_objective(self, coeffs: Dict[str, object], maximize: bool = False) -> None:
        self.objective = {v: Fraction(c) for v, c in coeffs.items() if Fraction(c) != 0}
        self.maximize = maximize

    def validate(self) -> None:
        declared = self._declared()
        for row in self.constraints:
            missing = set(row.coeffs) - declared
            if missing:
                raise ValueError(f"row {row.name} uses undeclared variables {sorted(missing)}")
        missing = set(self.objective) - declared
        if missing:
            raise ValueError(f"objective uses undeclared variables {sorted(missing)}")

    def to_lp_text(self) -> str:
        """CPLEX-style LP text.  Each row is scaled to integer coefficients (the
        objective too, by the factor noted in the header comment)."""
        self.validate()

        def ident(s: str) -> str:
            return re.sub(r"[^A-Za-z0-9_.]", "_", s)

        def terms(coeffs: Dict[str, Fraction], scale: int) -> str:
            parts = []
            for v in self.variables:
                if v in coeffs:
                    c = coeffs[v] * scale
                    parts.append(f"{'-' if c < 0 else '+'} {abs(c.numerator)} {ident(v)}")
            s = " ".join(parts) or "0 " + ident(self.variables[0])
            return s[2:] if s.startswith("+ ") else s

        obj_scale = lcm(*[c.denominator for c in self.objective.values()]) if self.objective else 1
        lines = [f"\\ objective multiplied by {obj_scale}", "Maximize" if self.maximize else "Minimize",
                 f" obj: {terms(self.objective, obj_scale)}", "Subject To"]
        for row in self.constraints:
            scale = lcm(row.rhs.denominator, *[c.denominator for c in row.coeffs.values()])
            rhs = row.rhs * scale
            lines.append(f" {ident(row.name)}: {terms(row.coeffs, scale)} {row.sense} {rhs.numerator}")
        lines.append("Bounds")
        lines.extend(f" {ident(v)} >= 0" for v in self.variables)
        lines.append("End")
        return "\n".join(lines) + "\n"


@dataclass
class SimplexResult:
    status: str  # optimal, infeasible, unbounded
    optimum: Optional[Fraction] = None
    primal: Dict[str, Fraction] = field(default_factory=dict)
    dual: Dict[str, Fraction] = field(default_factory=dict)
    pivots: int = 0


class DualCheckError(AssertionError):
    pass


def _pivot(T: List[List[Fraction]], obj: List[Fraction], r: int, c: int) -> None:
    row = T[r]
    piv = row[c]
    if piv != 1:
        inv = 1 / piv
        for j, x in enumerate(row):
            if x:
                row[j] = x * inv
    nz = [(j, x) for j, x in enumerate(row) if x]
    for i, other in enumerate(T):
        if i != r:
            f = other[c]
            if f:
                for j, x in nz:
                    other[j] -= f * x
    f = obj[c]
    if f:
        for j, x in nz:
            obj[j] -= f * x


BLAND_AFTER = 50  # consecutive degenerate pivots before switching to Bland's rule


def _run(T, obj, basis, allowed, counter) -> str:
    """Minimize with reduced-cost row `obj` (last entry = -objective value).

    Entering column by most negative reduced cost; after a streak of
    degenerate pivots Bland's smallest-index rule takes over, which rules
    out cycling.
    """
    ncols = len(obj) - 1
    stall = 0
    while True:
        if stall < BLAND_AFTER:
            enter, low = None, 0
            for j in range(ncols):
                if allowed[j] and obj[j] < low:
                    enter, low = j, obj[j]
        else:
            enter = next((j for j in range(ncols) if allowed[j] and obj[j] < 0), None)
        if enter is None:
            return "optimal"
        best = None
        leave = None
        for i, row in enumerate(T):
            a = row[enter]
            if a > 0:
                ratio = row[-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            return "unbounded"
        stall = stall + 1 if best == 0 else 0
        _pivot(T, obj, leave, enter)
        basis[leave] = enter
        counter[0] += 1


class IncrementalLP:
    """Tableau kept between solves so that columns can be appended (column generation).

    The columns of the initial basis (slacks of <= rows, artificials of the
    others) hold B^-1 at every step, which is what a new column needs.
    """

    def __init__(self, lp: LinearProgramInstance):
        lp.validate()
        self.lp = lp
        self.var_index = {v: i for i, v in enumerate(lp.variables)}
        self.sign = -1 if lp.maximize else 1
        self.counter = [0]
        self._build()

    def _build(self) -> None:
        lp = self.lp
        n = len(lp.variables)
        self.m = m = len(lp.constraints)
        rows, self.flips, senses = [], [], []
        for con in lp.constraints:
            coeffs, rhs, sense = dict(con.coeffs), con.rhs, con.sense
            flip = rhs < 0
            if flip:
                coeffs = {v: -c for v, c in coeffs.items()}
                rhs = -rhs
                sense = {">=": "<=", "<=": ">=", "=": "="}[sense]
            rows.append((coeffs, rhs))
            self.flips.append(flip)
            senses.append(sense)
        # column layout: slacks | artificials | structural (so structural columns can be appended)
        col = 0
        slack_of, art_of = {}, {}
        for i, s in enumerate(senses):
            if s != "=":
                slack_of[i] = col
                col += 1
        for i, s in enumerate(senses):
            if s != "<=":
                art_of[i] = col
                col += 1
        self.n_aux = col
        self.struct_col = {v: col + j for j, v in enumerate(lp.variables)}
        ncols = col + n
        self.kind = ["aux"] * self.n_aux + ["x"] * n
        self.is_art = [False] * ncols
        for c in art_of.values():
            self.is_art[c] = True
        T, basis, init_col = [], [], []
        for i, (coeffs, rhs) in enumerate(rows):
            row = [Fraction(0)] * (ncols + 1)
            for v, c in coeffs.items():
                row[self.struct_col[v]] = c
            if i in slack_of:
                row[slack_of[i]] = Fraction(1 if senses[i] == "<=" else -1)
            if i in art_of:
                row[art_of[i]] = Fraction(1)
                basis.append(art_of[i])
            else:
                basis.append(slack_of[i])
            init_col.append(basis[-1])
            row[-1] = rhs
            T.append(row)
        self.T, self.basis, self.init_col = T, basis, init_col
        self.cost = [Fraction(0)] * ncols
        for v, c in lp.objective.items():
            self.cost[self.struct_col[v]] = self.sign * c
        self.alive = [True] * m
        self.row_pos = list(range(m))
        self.status = None
        self.obj: Optional[List[Fraction]] = None

    def _phase_one(self) -> bool:
        T, ncols = self.T, len(self.cost)
        obj = [Fraction(0)] * (ncols + 1)
        for i, b in enumerate(self.basis):
            if self.is_art[b]:
                for j, x in enumerate(T[i]):
                    if x and not (j < ncols and self.is_art[j]):
                        obj[j] -= x
        _run(T, obj, self.basis, [True] * ncols, self.counter)
        if -obj[-1] != 0:
            return False
        for i in range(len(T)):
            if self.is_art[self.basis[i]]:
                j = next((j for j in range(ncols) if not self.is_art[j] and T[i][j] != 0), None)
                if j is None:
                    self.alive[self.row_pos.index(i)] = False
                else:
                    _pivot(T, obj, i, j)
                    self.basis[i] = j
        keep = [i for i in range(len(T)) if not self.is_art[self.basis[i]]]
        if len(keep) != len(T):
            self.T = [T[i] for i in keep]
            self.basis = [self.basis[i] for i in keep]
            self.row_pos = [r for r in range(self.m) if self.alive[r]]
        return True

    def _phase_two(self) -> str:
        T = self.T
        obj = self.cost + [Fraction(0)]
        for i, b in enumerate(self.basis):
            cb = self.cost[b]
            if cb:
                for j, x in enumerate(T[i]):
                    if x:
                        obj[j] -= cb * x
        self.obj = obj
        return _run(T, obj, self.basis, [not a for a in self.is_art], self.counter)

    def solve(self, check: bool = True) -> SimplexResult:
        if self.status is None:
            if not self._phase_one():
                self.status = "infeasible"
            else:
                self.status = self._phase_two()
        elif self.status == "optimal":
            self.status = _run(self.T, self.obj, self.basis, [not a for a in self.is_art], self.counter)
        if self.status != "optimal":
            return SimplexResult(self.status, pivots=self.counter[0])
        return self._result(check)

    def _result(self, check: bool) -> SimplexResult:
        lp = self.lp
        x = {v: Fraction(0) for v in lp.variables}
        name_of = {c: v for v, c in self.struct_col.items()}
        for i, b in enumerate(self.basis):
            if b in name_of:
                x[name_of[b]] = self.T[i][-1]
        value = sum((self.sign * c * x[v] for v, c in lp.objective.items()), Fraction(0))
        dual = {}
        for r, con in enumerate(lp.constraints):
            if not self.alive[r]:
                dual[con.name] = Fraction(0)
                continue
            y = -self.obj[self.init_col[r]]
            dual[con.name] = self.sign * (-y if self.flips[r] else y)
        res = SimplexResult("optimal", self.sign * value, x, dual, self.counter[0])
        if check:
            check_duality(lp, res)
        return res

    def add_column(self, name: str, coeffs: Dict[str, object], cost) -> None:
        """Append a non-negative variable with the given row coefficients (by row name)."""
        lp = self.lp
        lp.add_variable(name)
        if self.status not in (None, "optimal") or not all(self.alive):
            # no usable warm start (failed solve, or redundant rows were dropped)
            for rname, c in coeffs.items():
                if Fraction(c):
                    next(con for con in lp.constraints if con.name == rname).coeffs[name] = Fraction(c)
            if Fraction(cost):
                lp.objective[name] = Fraction(cost)
            self._build()
            return
        row_index = {con.name: r for r, con in enumerate(lp.constraints)}
        a = [Fraction(0)] * self.m
        for rname, c in coeffs.items():
            c = Fraction(c)
            if c:
                r = row_index[rname]
                lp.constraints[r].coeffs[name] = c
                a[r] = -c if self.flips[r] else c
        cost = Fraction(cost)
        if cost:
            lp.objective[name] = cost
        ncols = len(self.cost)
        # tableau column = B^-1 a, read off the initial-basis columns
        newcol = [Fraction(0)] * len(self.T)
        for r in range(self.m):
            if a[r]:
                c0 = self.init_col[r]
                for i, row in enumerate(self.T):
                    if row[c0]:
                        newcol[i] += row[c0] * a[r]
        for i, row in enumerate(self.T):
            row.insert(ncols, newcol[i])
        self.cost.append(self.sign * cost)
        self.is_art.append(False)
        self.struct_col[name] = ncols
        self.var_index[name] = len(lp.variables) - 1
        if self.obj is not None:
            red = self.sign * cost
            for r in range(self.m):
                if a[r]:
                    red += self.obj[self.init_col[r]] * a[r]
            self.obj.insert(ncols, red)


def simplex_solve(lp: LinearProgramInstance, check: bool = True) -> SimplexResult:
    return IncrementalLP(lp).solve(check)


def check_duality(lp: LinearProgramInstance, res: SimplexResult) -> None:
    """Exact primal feasibility, dual feasibility and equal objectives."""
    x = res.primal
    for con in lp.constraints:
        lhs = sum((c * x[v] for v, c in con.coeffs.items()), Fraction(0))
        ok = {">=": lhs >= con.rhs, "<=": lhs <= con.rhs, "=": lhs == con.rhs}[con.sense]
        if not ok:
            raise DualCheckError(f"primal row {con.name} violated")
    if any(v < 0 for v in x.values()):
        raise DualCheckError("negative primal variable")
    sign = -1 if lp.maximize else 1
    # work in minimisation form
    reduced = {v: sign * lp.objective.get(v, Fraction(0)) for v in lp.variables}
    dual_obj = Fraction(0)
    for con in lp.constraints:
        y = sign * res.dual[con.name]
        if (con.sense == ">=" and y < 0) or (con.sense == "<=" and y > 0):
            raise DualCheckError(f"dual sign wrong on row {con.name}")
        for v, c in con.coeffs.items():
            reduced[v] -= y * c
        dual_obj += y * con.rhs
    bad = [v for v, r in reduced.items() if r < 0]
    if bad:
        raise DualCheckError(f"dual infeasible on columns {bad[:5]}")
    if sign * dual_obj != res.optimum:
        raise DualCheckError(f"dual objective {sign * dual_obj} != primal {res.optimum}")
