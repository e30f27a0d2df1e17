"""Per-ray extension programs and the threshold search built on them.

A ray of length P = floor(d/2) has its base (level P) colored by a fixed
base coloring.  The color mass of [0, k+eps) splits into boundary classes:
the flag says whether the point lies in the special vertex's color, and the
footprint says which base vertices use the point.  Every footprint with
positive mass is a star {A : a in A} or empty.  The program covers every
interior vertex with independent sets of the ray, and each class receives
exactly its mass from sets with that flag and footprint.  The precoloring
extends iff the optimum equals k+eps.

Columns are independent sets generated by exact maximum-weight pricing.  The
reduced program works on orbits of the symmetry group Sym([q]) x Sym([p]\\[q]);
the full program keeps one row per vertex and one class per star.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from ..graphs import Graph, standard_ray
from ..measure import as_fraction
from .mwis import DEFAULT_NODE_BUDGET, independent_set_above, milp_candidate, mwis_bitset, scale_weights
from .simplex import LinearProgramInstance, simplex_solve

log = logging.getLogger(__name__)

FLAGS = ("d", "e")


@dataclass(frozen=True)
class BoundaryClass:
    flag: str  # "d": inside the special vertex's color; "e": outside
    footprint: Optional[int]  # 0-based element a for star(a), None for the empty footprint
    mass: Fraction


@dataclass
class ExtensionInstance:
    p: int
    q: int
    d: int
    eps: Fraction
    ray: Graph
    interior: List[int]
    classes: List[BoundaryClass]

    @property
    def k(self) -> Fraction:
        return Fraction(self.p, self.q)

    @property
    def length(self) -> int:
        return self.d // 2


def class_masses(p: int, q: int, d: int, eps) -> Dict[Tuple[str, str], Fraction]:
    """Masses keyed by (flag, "star"|"empty"); a star mass is per element."""
    eps = as_fraction(eps)
    k = Fraction(p, q)
    if d % 2 == 0:
        ds = 1 / (p + q * eps)
        return {("d", "star"): ds, ("e", "star"): Fraction(1, q) - ds,
                ("d", "empty"): eps / (k + eps), ("e", "empty"): eps - eps / (k + eps)}
    if d % 4 == 1:
        return {("d", "star"): Fraction(1, p), ("e", "star"): Fraction(1, q) - Fraction(1, p),
                ("d", "empty"): Fraction(0), ("e", "empty"): eps}
    ds = (1 - eps) / p
    return {("d", "star"): ds, ("e", "star"): Fraction(1, q) - ds,
            ("d", "empty"): eps, ("e", "empty"): Fraction(0)}


def _check_params(p: int, q: int, d: int) -> None:
    if q < 1 or p < 2 * q:
        raise ValueError(f"need p >= 2q >= 2, got p={p}, q={q}")
    if d < 4:
        raise ValueError(f"need d >= 4, got d={d}")


def build_extension_instance(p: int, q: int, d: int, eps) -> ExtensionInstance:
    _check_params(p, q, d)
    eps = as_fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if d % 4 == 3 and eps > 1:
        raise ValueError("the d = 3 mod 4 base coloring needs eps <= 1")
    ray = standard_ray(p, q, d // 2)
    s = ray.special[0]
    interior = [v.id for v in ray.vertices if v.level < d // 2 and v.id != s]
    m = class_masses(p, q, d, eps)
    classes = []
    for flag in FLAGS:
        for a in range(p):
            classes.append(BoundaryClass(flag, a, m[(flag, "star")]))
        classes.append(BoundaryClass(flag, None, m[(flag, "empty")]))
    total = sum(c.mass for c in classes)
    if total != Fraction(p, q) + eps:
        raise AssertionError(f"class masses sum to {total}, not k+eps")
    return ExtensionInstance(p, q, d, eps, ray, interior, classes)


# ---------------------------------------------------------------- the model

@dataclass
class _ClassModel:
    flag: str
    footprint: Optional[int]
    mult: int
    items: List[int]  # ray vertex ids allowed in this class
    adj: List[int]  # conflict bitsets over positions in `items`
    orbit_of: List[int]  # orbit index per item position


class ExtensionModel:
    """Rows, classes and pricing structures for one (p, q, d); independent of eps."""

    def __init__(self, p: int, q: int, d: int, reduced: bool = True):
        _check_params(p, q, d)
        self.p, self.q, self.d, self.reduced = p, q, d, reduced
        self.P = d // 2
        self.ray = standard_ray(p, q, self.P)
        R = self.ray
        s = R.special[0]
        qmask = (1 << q) - 1
        self.interior = [v.id for v in R.vertices if v.level < self.P and v.id != s]
        if reduced:
            keys = sorted({(R.vertices[v].level, bin(R.vertices[v].label & qmask).count("1"))
                           for v in self.interior})
        else:
            keys = [("v", v) for v in self.interior]
        self.orbit_keys = keys
        okey = {key: i for i, key in enumerate(keys)}
        self.orbit_of_vertex: Dict[int, int] = {}
        for v in self.interior:
            vx = R.vertices[v]
            key = (vx.level, bin(vx.label & qmask).count("1")) if reduced else ("v", v)
            self.orbit_of_vertex[v] = okey[key]
        self.orbit_size = [0] * len(keys)
        for v in self.interior:
            self.orbit_size[self.orbit_of_vertex[v]] += 1
        s_nbrs = R.adj[s]
        if reduced:
            feet = [(0, q), (q, p - q), (None, 1)]
        else:
            feet = [(a, 1) for a in range(p)] + [(None, 1)]
        self.classes: List[_ClassModel] = []
        for flag in FLAGS:
            for a, mult in feet:
                items = []
                for v in self.interior:
                    vx = R.vertices[v]
                    if flag == "d" and v in s_nbrs:
                        continue
                    if a is not None and vx.level == self.P - 1 and not vx.label >> a & 1:
                        continue
                    items.append(v)
                pos = {v: i for i, v in enumerate(items)}
                adj = []
                for v in items:
                    m = 0
                    for u in R.adj[v]:
                        j = pos.get(u)
                        if j is not None:
                            m |= 1 << j
                    adj.append(m)
                self.classes.append(_ClassModel(flag, a, mult, items, adj,
                                                [self.orbit_of_vertex[v] for v in items]))

    def class_mass(self, t: int, eps: Fraction) -> Fraction:
        c = self.classes[t]
        m = class_masses(self.p, self.q, self.d, eps)
        return m[(c.flag, "empty" if c.footprint is None else "star")]

    def active_classes(self, eps: Fraction) -> List[int]:
        return [t for t in range(len(self.classes)) if self.class_mass(t, eps) > 0]

    def coverage(self, t: int, members: int) -> Dict[int, Fraction]:
        """Coverage coefficient per orbit for a column given as an item bitmask of class t."""
        c = self.classes[t]
        counts: Dict[int, int] = {}
        for i in _bits(members):
            o = c.orbit_of[i]
            counts[o] = counts.get(o, 0) + 1
        return {o: Fraction(n, self.orbit_size[o]) for o, n in counts.items()}

    def extend_maximal(self, t: int, members: int) -> int:
        c = self.classes[t]
        blocked = members
        for i in _bits(members):
            blocked |= c.adj[i]
        for i in range(len(c.items)):
            if not blocked >> i & 1:
                members |= 1 << i
                blocked |= c.adj[i] | 1 << i
        return members

    def seed_columns(self, eps: Fraction) -> List[Tuple[int, int]]:
        """Enough maximal columns that every orbit and every active class is covered."""
        active = self.active_classes(eps)
        cols = [(t, self.extend_maximal(t, 0)) for t in active]
        covered = set()
        for t, m in cols:
            covered.update(self.coverage(t, m))
        for o in range(len(self.orbit_keys)):
            if o in covered:
                continue
            for t in active:
                c = self.classes[t]
                i = next((i for i, oo in enumerate(c.orbit_of) if oo == o), None)
                if i is not None:
                    m = self.extend_maximal(t, 1 << i)
                    cols.append((t, m))
                    covered.update(self.coverage(t, m))
                    break
        return cols

    def price(self, t: int, per_orbit: Sequence[Fraction], threshold: Fraction,
              budget: int) -> Optional[Tuple[Fraction, int]]:
        """An item set of class t with weight above threshold, or None (exact)."""
        c = self.classes[t]
        w = [per_orbit[o] for o in c.orbit_of]
        return independent_set_above(c.adj, w, threshold, budget)

    def price_float(self, t: int, per_orbit: Sequence[float]) -> Tuple[float, int]:
        c = self.classes[t]
        w = [per_orbit[o] for o in c.orbit_of]
        mask = milp_candidate(c.adj, w)
        if mask is None:
            ints, den = scale_weights([Fraction(max(x, 0.0)).limit_denominator(10**9) for x in w])
            mask = mwis_bitset(c.adj, ints, DEFAULT_NODE_BUDGET)[1]
        return sum(w[i] for i in _bits(mask)), mask


def _bits(m: int) -> Iterator[int]:
    while m:
        low = m & -m
        yield low.bit_length() - 1
        m ^= low


# ---------------------------------------------------------------- solving

@dataclass
class ExtensionSolution:
    optimum: Optional[Fraction]  # None when the program is infeasible
    extendable: bool
    eps: Fraction
    target: Fraction
    columns: List[Tuple[int, int]] = field(default_factory=list)
    weights: List[Fraction] = field(default_factory=list)
    orbit_duals: List[Fraction] = field(default_factory=list)
    class_duals: Dict[int, Fraction] = field(default_factory=dict)
    pricing_values: Dict[int, Optional[Fraction]] = field(default_factory=dict)  # None: proven <= 1 - z
    rounds: int = 0

    def __iter__(self):
        yield self.optimum
        yield self.extendable


def _exact_lp(model: ExtensionModel, eps: Fraction, cols: List[Tuple[int, int]], active: List[int]):
    lp = LinearProgramInstance()
    names = [lp.add_variable(f"w{i}") for i in range(len(cols))]
    covs = [model.coverage(t, m) for t, m in cols]
    for o in range(len(model.orbit_keys)):
        lp.add_constraint({names[i]: cv[o] for i, cv in enumerate(covs) if o in cv}, ">=", 1, f"cover{o}")
    for t in active:
        lp.add_constraint({names[i]: 1 for i, (tt, _) in enumerate(cols) if tt == t}, ">=",
                          model.classes[t].mult * model.class_mass(t, eps), f"class{t}")
    lp.set_objective({n: 1 for n in names})
    return lp


def solve_extension_exact(model: ExtensionModel, eps, columns: Optional[List[Tuple[int, int]]] = None,
                          budget: int = DEFAULT_NODE_BUDGET, max_rounds: int = 500) -> ExtensionSolution:
    """Exact column generation: exact simplex, then exact pricing until no column improves."""
    eps = as_fraction(eps)
    k = Fraction(model.p, model.q)
    target = k + eps
    active = model.active_classes(eps)
    cols = list(dict.fromkeys([c for c in (columns or []) if c[0] in active] + model.seed_columns(eps)))
    for rnd in range(1, max_rounds + 1):
        lp = _exact_lp(model, eps, cols, active)
        res = simplex_solve(lp)
        if res.status != "optimal":
            # coverage and class rows are always satisfiable by scaling seed columns
            raise AssertionError(f"restricted extension program is {res.status}")
        y = [res.dual[f"cover{o}"] for o in range(len(model.orbit_keys))]
        z = {t: res.dual[f"class{t}"] for t in active}
        per_vertex = [y[o] / model.orbit_size[o] for o in range(len(y))]
        added = 0
        values = {}
        for t in active:
            found = model.price(t, per_vertex, 1 - z[t], budget)
            values[t] = None if found is None else found[0]
            if found is not None:
                col = (t, model.extend_maximal(t, found[1]))
                if col not in cols:
                    cols.append(col)
                    added += 1
        if not added:
            opt = res.optimum
            if opt < target:
                raise AssertionError(f"optimum {opt} below k+eps = {target}")
            weights = [res.primal[f"w{i}"] for i in range(len(cols))]
            return ExtensionSolution(opt, opt == target, eps, target, cols, weights, y, z, values, rnd)
    raise RuntimeError("column generation did not converge")


def _float_solve(model: ExtensionModel, eps: Fraction, pool: List[Tuple[int, int]],
                 budget: int, max_rounds: int = 200) -> bool:
    """Heuristic float column generation; extends `pool` in place.  Returns extendable?"""
    import numpy as np
    from scipy.optimize import linprog

    k = model.p / model.q
    e = float(eps)
    active = model.active_classes(eps)
    aset = set(active)
    nO = len(model.orbit_keys)
    have = set(pool)
    for c in model.seed_columns(eps):
        if c not in have:
            pool.append(c)
            have.add(c)
    cov_cache: Dict[Tuple[int, int], Dict[int, float]] = {}
    for _ in range(max_rounds):
        cols = [c for c in pool if c[0] in aset]
        A = np.zeros((nO + len(active), len(cols)))
        for j, c in enumerate(cols):
            cv = cov_cache.get(c)
            if cv is None:
                cv = {o: float(x) for o, x in model.coverage(*c).items()}
                cov_cache[c] = cv
            for o, x in cv.items():
                A[o, j] = -x
            A[nO + active.index(c[0]), j] = -1.0
        b = np.concatenate([-np.ones(nO), [-float(model.classes[t].mult * model.class_mass(t, eps)) for t in active]])
        r = linprog(np.ones(len(cols)), A_ub=A, b_ub=b, method="highs")
        if r.status != 0:
            raise RuntimeError(f"float LP failed: {r.message}")
        if r.fun <= k + e + 1e-9:
            return True
        duals = -r.ineqlin.marginals
        per_vertex = [max(duals[o], 0.0) / model.orbit_size[o] for o in range(nO)]
        added = 0
        for i, t in enumerate(active):
            val, mask = model.price_float(t, per_vertex)
            if val + duals[nO + i] > 1 + 1e-9:
                col = (t, model.extend_maximal(t, mask))
                if col not in have:
                    pool.append(col)
                    have.add(col)
                    added += 1
        if not added:
            return False
    return r.fun <= k + e + 1e-9


@lru_cache(maxsize=32)
def get_model(p: int, q: int, d: int, reduced: bool = True) -> ExtensionModel:
    return ExtensionModel(p, q, d, reduced)


def solve_extension(inst: ExtensionInstance, eps=None, reduced: bool = True,
                    budget: int = DEFAULT_NODE_BUDGET) -> ExtensionSolution:
    eps = inst.eps if eps is None else as_fraction(eps)
    if eps != inst.eps:
        raise ValueError("instance was built at a different eps")
    model = get_model(inst.p, inst.q, inst.d, reduced)
    return solve_extension_exact(model, eps, budget=budget)


@dataclass
class ThresholdBracket:
    p: int
    q: int
    d: int
    lo: Fraction
    hi: Fraction
    lo_solution: ExtensionSolution
    hi_solution: ExtensionSolution
    probes: int

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def csv_row(self, closed_form: str = "", source: str = "lp") -> str:
        return f"{self.p},{self.q},{self.d},{float(self.lo):.8f},{float(self.hi):.8f},{closed_form},{source}"


def minimal_extension_epsilon(p: int, q: int, d: int, tol=Fraction(1, 10**6), reduced: bool = True,
                              budget: int = DEFAULT_NODE_BUDGET, exact_probes: bool = False) -> ThresholdBracket:
    """Bisection over dyadic eps in [0, 1]; the returned endpoints are certified exactly.

    Probes use a floating-point LP to steer the search unless exact_probes is
    set; the two final endpoints are always re-solved exactly.
    """
    tol = as_fraction(tol) if not isinstance(tol, float) else Fraction(tol).limit_denominator(10**12)
    if tol <= 0:
        raise ValueError("tol must be positive")
    model = get_model(p, q, d, reduced)
    pool: List[Tuple[int, int]] = []
    lo, hi = Fraction(0), Fraction(1)
    probes = 0

    def probe(eps: Fraction) -> bool:
        nonlocal probes
        probes += 1
        if exact_probes:
            sol = solve_extension_exact(model, eps, pool, budget)
            pool[:] = sol.columns
            return sol.extendable
        return _float_solve(model, eps, pool, budget)

    def bisect(lo: Fraction, hi: Fraction) -> Tuple[Fraction, Fraction]:
        while hi - lo > tol:
            mid = (lo + hi) / 2
            if probe(mid):
                hi = mid
            else:
                lo = mid
        return lo, hi

    lo, hi = bisect(lo, hi)
    for _ in range(60):
        hi_sol = solve_extension_exact(model, hi, pool, budget)
        pool.extend(c for c in hi_sol.columns if c not in pool)
        if not hi_sol.extendable:
            # the float search was too optimistic: the threshold lies above hi
            log.info("exact re-check rejected hi=%s", hi)
            lo, hi = bisect(hi, min(Fraction(1), hi + 2 * (hi - lo) + tol))
            continue
        if lo == 0:
            lo_sol = ExtensionSolution(None, False, lo, Fraction(p, q), rounds=0)
            break
        lo_sol = solve_extension_exact(model, lo, pool, budget)
        pool.extend(c for c in lo_sol.columns if c not in pool)
        if lo_sol.extendable:
            log.info("exact re-check accepted lo=%s", lo)
            lo, hi = bisect(max(Fraction(0), lo - 2 * (hi - lo) - tol), lo)
            continue
        break
    else:
        raise RuntimeError("threshold certification did not settle")
    return ThresholdBracket(p, q, d, lo, hi, lo_sol, hi_sol, probes)
