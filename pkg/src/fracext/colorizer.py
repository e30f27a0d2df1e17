"""Constructive fractional-coloring extensions on universal graphs.

Each case colors one ray at a time.  Vertices are grouped by their distance
to the special vertex; a layer gets the staged sets of its case, and any
missing measure (a staged carve or a layer falling below measure one)
raises CarveError.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from . import graphs
from .algebraic import AlgebraicNumber, quadratic_positive_root
from .graphs import Graph, build_universal, distance_layers, label_elements, standard_ray
from .measure import CarveError, CellGrid, EMPTY, IntervalSet, as_fraction, carve, equipartition, union_all
from .partitions import (Precoloring, PseudoRandomPartition, build_pseudorandom,
                         canonical_precoloring, restrict_fo)


class CaseTag(str, Enum):
    D0 = "D0"
    D1 = "D1"
    D2 = "D2"
    D3 = "D3"
    D6_HIGH = "D6_HIGH"
    D7_HIGH = "D7_HIGH"


class InapplicableCase(ValueError):
    pass


def _case(case) -> CaseTag:
    return case if isinstance(case, CaseTag) else CaseTag(str(case))


def applicability(case, k, d: int) -> bool:
    case = _case(case)
    k = as_fraction(k)
    if k < 2:
        return False
    dp = d // 4
    if case is CaseTag.D0:
        return d % 4 == 0 and d >= 4 and k < 2 + Fraction(1, 2 * dp - 1)
    if case is CaseTag.D1:
        return d % 4 == 1 and d >= 5 and k < 2 + Fraction(1, 2 * dp - 1)
    if case is CaseTag.D2:
        return d % 4 == 2 and d >= 6 and k < 2 + Fraction(1, 2 * dp)
    if case is CaseTag.D3:
        return d % 4 == 3 and d >= 7 and k < 2 + Fraction(1, 2 * dp)
    if case is CaseTag.D6_HIGH:
        return d == 6 and (k == 2 or Fraction(5, 2) <= k < 3)
    if case is CaseTag.D7_HIGH:
        return d == 7 and k < 3
    return False


def _powsum(k: Fraction, lo_exp: int, count: int, step: int = 2) -> Fraction:
    return sum(((k - 1) ** (lo_exp + step * j) for j in range(count)), Fraction(0))


def condition_polynomial(case, k, d: int) -> List[Fraction]:
    """Polynomial in eps whose smallest positive root is the equality case of the side condition."""
    case = _case(case)
    k = as_fraction(k)
    dp = d // 4
    if case is CaseTag.D0:
        S = _powsum(k, 2, dp - 1)
        # eps*S*(k+eps) + eps*(k-1+eps) = 1
        return [Fraction(-1), S * k + k - 1, S + 1]
    if case is CaseTag.D2:
        T = _powsum(k, 1, dp)
        return [Fraction(-1), T * k, T]
    if case is CaseTag.D1:
        return [Fraction(-1), k * _powsum(k, 0, dp)]
    if case is CaseTag.D3:
        return [Fraction(-1), 1 + k * _powsum(k, 1, dp)]
    if case is CaseTag.D6_HIGH:
        return [Fraction(-1), k, Fraction(1)]
    if case is CaseTag.D7_HIGH:
        return [Fraction(-1), k + 1]
    raise ValueError(case)


def minimal_epsilon(case, k, d: int) -> AlgebraicNumber:
    case = _case(case)
    k = as_fraction(k)
    if not applicability(case, k, d):
        raise InapplicableCase(f"{case.value} does not apply at k={k}, d={d}")
    c = condition_polynomial(case, k, d)
    if len(c) == 2:
        return AlgebraicNumber.rational(-c[0] / c[1])
    return quadratic_positive_root(c[2], c[1], c[0])


@dataclass
class FractionalColoring:
    assignment: Dict[int, IntervalSet]
    span: Fraction
    meta: dict = field(default_factory=dict)

    def __getitem__(self, v: int) -> IntervalSet:
        return self.assignment[v]

    def to_json(self) -> str:
        body = {
            "meta": {k: (str(v) if isinstance(v, Fraction) else v) for k, v in self.meta.items()},
            "span": str(self.span),
            "coloring": {str(v): s.to_text() for v, s in sorted(self.assignment.items())},
        }
        return json.dumps(body, indent=1, sort_keys=True)


@lru_cache(maxsize=None)
def _distance_table(p: int, q: int, length: int) -> Dict[Tuple[int, int], int]:
    """Distance from the special vertex, keyed by (|A & X|, level); valid for every X by symmetry."""
    R = standard_ray(p, q, length)
    qmask = (1 << q) - 1
    table: Dict[Tuple[int, int], int] = {}
    for dist, layer in enumerate(distance_layers(R, R.special[0])):
        for v in layer:
            vx = R.vertices[v]
            key = (bin(vx.label & qmask).count("1"), vx.level)
            if table.setdefault(key, dist) != dist:
                raise AssertionError("ray distances are not symmetric")
    return table


def ray_length(case: CaseTag, d: int) -> int:
    return d // 2


def _top_layer(case: CaseTag, d: int) -> int:
    dp = d // 4
    if case in (CaseTag.D0, CaseTag.D1):
        return 2 * dp
    if case in (CaseTag.D2, CaseTag.D3):
        return 2 * dp + 1
    return 3


@dataclass
class RayColoring:
    """Colors of one ray keyed by (label, level), with per-layer measures."""
    colors: Dict[Tuple[int, int], IntervalSet]
    layer_sets: Dict[int, Dict[int, IntervalSet]]
    layer_measures: Dict[int, Fraction]
    special_label: int
    special_color: IntervalSet


def _stage(base: List[IntervalSet], pool_of, measure: Fraction, taken: List[IntervalSet],
           what: str) -> List[IntervalSet]:
    out = []
    for a in range(len(base)):
        avail = pool_of(a) - taken[a]
        out.append(carve(avail, measure, f"{what}({a + 1})"))
    return out


def _or(masks) -> int:
    out = 0
    for m in masks:
        out |= m
    return out


def _over(masks: List[int], A: int) -> int:
    out = 0
    i = 0
    while A:
        if A & 1:
            out |= masks[i]
        A >>= 1
        i += 1
    return out


def _layer_color_fn(case: CaseTag, p: int, q: int, d: int, eps: Fraction, C: IntervalSet,
                    part: PseudoRandomPartition, X: int):
    """Returns (grid, color) where color(layer, label) is a cell mask on grid."""
    k = Fraction(p, q)
    dp = d // 4
    fe = part.f_e
    fo = part.f_o
    Y = part.Y
    unit = eps * k / p

    empty = [EMPTY] * p

    if case in (CaseTag.D0, CaseTag.D2, CaseTag.D1, CaseTag.D3):
        g: Dict[int, List[IntervalSet]] = {}
        h: Dict[int, List[IntervalSet]] = {}
        f: Dict[int, List[IntervalSet]] = {}
        g_taken = list(empty)
        h_taken = list(empty)
        if case is CaseTag.D0:
            pool_out = lambda a: fe[a] - C
            pool_in = lambda a: fe[a] & C
            for j in range(dp - 1, 0, -1):
                g[j] = _stage(fe, pool_out, unit * (k - 1) ** (2 * (dp - j) - 1), g_taken, f"g_{j}")
                g_taken = [t | s for t, s in zip(g_taken, g[j])]
                h[j] = _stage(fe, pool_in, unit * (k - 1) ** (2 * (dp - j) - 2), h_taken, f"h_{j}")
                h_taken = [t | s for t, s in zip(h_taken, h[j])]
            f[2 * dp] = list(fe)
            for j in range(dp - 1, 0, -1):
                f[2 * j + 1] = [x - y for x, y in zip(f[2 * j + 2], h[j])]
                f[2 * j] = [x - y for x, y in zip(f[2 * j + 1], g[j])]
            g_hi, h_hi = dp - 1, dp - 1
        elif case is CaseTag.D2:
            pool_out = lambda a: fe[a] - C
            pool_in = lambda a: fe[a] & C
            for j in range(dp - 1, 0, -1):
                h[j] = _stage(fe, pool_in, unit * (k - 1) ** (2 * (dp - j) - 1), h_taken, f"h_{j}")
                h_taken = [t | s for t, s in zip(h_taken, h[j])]
            for m in range(dp, 0, -1):
                g[m] = _stage(fe, pool_out, unit * (k - 1) ** (2 * (dp - m)), g_taken, f"g_{m}")
                g_taken = [t | s for t, s in zip(g_taken, g[m])]
            f[2 * dp + 1] = list(fe)
            for m in range(dp, 0, -1):
                if m < dp:
                    f[2 * m + 1] = [x - y for x, y in zip(f[2 * m + 2], h[m])]
                f[2 * m] = [x - y for x, y in zip(f[2 * m + 1], g[m])]
            g_hi, h_hi = dp, dp - 1
        elif case is CaseTag.D1:
            base = restrict_fo(part, C, "d1")
            g[dp] = [x - y for x, y in zip(fo, base)]
            g_taken = list(g[dp])
            pool_out = lambda a: fo[a] - C
            pool_in = lambda a: fo[a] & C
            for j in range(dp - 1, 0, -1):
                g[j] = _stage(fo, pool_out, unit * (k - 1) ** (2 * (dp - j) - 1), g_taken, f"g_{j}")
                g_taken = [t | s for t, s in zip(g_taken, g[j])]
                h[j] = _stage(fo, pool_in, unit * (k - 1) ** (2 * (dp - j) - 2), h_taken, f"h_{j}")
                h_taken = [t | s for t, s in zip(h_taken, h[j])]
            f[2 * dp] = base
            for j in range(dp - 1, 0, -1):
                f[2 * j + 1] = [x - y for x, y in zip(f[2 * j + 2], h[j])]
                f[2 * j] = [x - y for x, y in zip(f[2 * j + 1], g[j])]
            g_hi, h_hi = dp, dp - 1
        else:
            base = restrict_fo(part, C, "d3")
            h[dp] = [x - y for x, y in zip(fo, base)]
            h_taken = list(h[dp])
            pool_out = lambda a: fo[a] - C
            pool_in = lambda a: fo[a] & C
            for j in range(dp - 1, 0, -1):
                h[j] = _stage(fo, pool_in, unit * (k - 1) ** (2 * (dp - j) - 1), h_taken, f"h_{j}")
                h_taken = [t | s for t, s in zip(h_taken, h[j])]
            for m in range(dp, 0, -1):
                g[m] = _stage(fo, pool_out, unit * (k - 1) ** (2 * (dp - m)), g_taken, f"g_{m}")
                g_taken = [t | s for t, s in zip(g_taken, g[m])]
            f[2 * dp + 1] = base
            for m in range(dp, 0, -1):
                if m < dp:
                    f[2 * m + 1] = [x - y for x, y in zip(f[2 * m + 2], h[m])]
                f[2 * m] = [x - y for x, y in zip(f[2 * m + 1], g[m])]
            g_hi, h_hi = dp, dp
        f[1] = [x - C for x in f[2]]
        grid = CellGrid([*fe, *fo, Y, C] + [x for fs in (*f.values(), *g.values(), *h.values()) for x in fs])
        M = grid.mask
        fM = {ell: [M(x) for x in fs] for ell, fs in f.items()}
        g_all = {j: _or(M(x) for x in s) for j, s in g.items()}
        h_all = {j: _or(M(x) for x in s) for j, s in h.items()}
        yM, y_out = M(Y), M(Y - C)
        extra: Dict[int, int] = {}
        top = _top_layer(case, d)
        for ell in range(1, top + 1):
            if ell % 2 == 0:
                e = _or(h_all[j] for j in range(ell // 2, h_hi + 1))
                if case is CaseTag.D2:
                    e |= yM
            else:
                e = _or(g_all[j] for j in range((ell + 1) // 2, g_hi + 1))
                if case is CaseTag.D0:
                    e |= y_out if ell == 1 else yM
            extra[ell] = e

        def color(ell: int, A: int) -> int:
            return _over(fM[ell], A) | extra[ell]
        return grid, color

    Xel = label_elements(X)
    if case is CaseTag.D6_HIGH:
        g6 = {j: carve(fe[j - 1] - C, eps / (p + q * eps), f"g({j})") for j in Xel}
        h6 = dict(zip(Xel, equipartition(Y & C, q)))
        grid = CellGrid([*fe, Y, C, *g6.values(), *h6.values()])
        M = grid.mask
        feM = [M(x) for x in fe]
        cM = M(C)
        g6M = {j: M(x) for j, x in g6.items()}
        h6M = {j: M(x) for j, x in h6.items()}
        l1_extra = M(Y - C) | _or(g6M.values())

        def color(ell: int, A: int) -> int:
            if ell >= 3:
                return _over(feM, A)
            if ell == 2:
                common = [j for j in label_elements(A) if j in g6M]
                return (_over(feM, A) & ~_or(g6M[j] for j in common)) | _or(h6M[j] for j in common)
            return (_over(feM, A) & ~cM) | l1_extra
        return grid, color

    if case is CaseTag.D7_HIGH:
        g2 = {}
        for j in range(1, p + 1):
            pool = fo[j - 1] - C if j in Xel else fo[j - 1] & C
            g2[j] = carve(pool, eps / p, f"g_2({j})")
        g1 = {j: carve(fo[j - 1] - C - g2[j], eps * (k - 1) / p, f"g_1({j})") for j in Xel}
        rest = union_all(g2[j] for j in range(1, p + 1) if j not in Xel)
        h7 = dict(zip(Xel, equipartition(rest, q)))
        grid = CellGrid([*fo, C, *g2.values(), *g1.values(), *h7.values()])
        M = grid.mask
        foM = [M(x) for x in fo]
        cM = M(C)
        # f_o(a) minus g_2(a), per element
        trimmed = [foM[j - 1] & ~M(g2[j]) for j in range(1, p + 1)]
        g1M = {j: M(x) for j, x in g1.items()}
        h7M = {j: M(x) for j, x in h7.items()}
        l1_extra = _or(g1M.values()) | _or(M(g2[j]) for j in Xel)

        def color(ell: int, A: int) -> int:
            base = _over(trimmed, A)
            if ell >= 3:
                return base
            if ell == 2:
                common = [j for j in label_elements(A) if j in g1M]
                return (base & ~_or(g1M[j] for j in common)) | _or(h7M[j] for j in common)
            return (_over(foM, A) & ~cM) | l1_extra
        return grid, color
    raise ValueError(case)


def color_ray(case, p: int, q: int, d: int, eps, C_i: IntervalSet, part: PseudoRandomPartition,
              special_label: Optional[int] = None, check_applicability: bool = True) -> RayColoring:
    case = _case(case)
    eps = as_fraction(eps)
    k = Fraction(p, q)
    if check_applicability and not applicability(case, k, d):
        raise InapplicableCase(f"{case.value} does not apply at k={k}, d={d}")
    if C_i.measure() != 1:
        raise ValueError("the special vertex color must have measure one")
    X = special_label if special_label is not None else (1 << q) - 1
    length = ray_length(case, d)
    table = _distance_table(p, q, length)
    grid, color = _layer_color_fn(case, p, q, d, eps, C_i, part, X)
    top = _top_layer(case, d)
    labels = graphs.kneser_labels(p, q)
    colors: Dict[Tuple[int, int], IntervalSet] = {}
    layer_sets: Dict[int, Dict[int, IntervalSet]] = {}
    measures: Dict[int, Fraction] = {}
    for A in labels:
        j = bin(A & X).count("1")
        for level in range(length + 1):
            if level == 0 and A == X:
                colors[(A, 0)] = C_i
                continue
            ell = min(table[(j, level)], top)
            cache = layer_sets.setdefault(ell, {})
            if A not in cache:
                cells = color(ell, A)
                m = grid.measure(cells)
                if m < 1:
                    raise CarveError(Fraction(1), m,
                                     f"{case.value} layer {ell}: colour of measure >= 1 for label {A:b}")
                cache[A] = grid.to_set(cells)
                if ell not in measures or m < measures[ell]:
                    measures[ell] = m
            colors[(A, level)] = cache[A]
    return RayColoring(colors, layer_sets, measures, X, C_i)


def default_precoloring(p: int, q: int, eps: Fraction) -> Precoloring:
    """canonical_precoloring(p', q) with p' the largest integer with p'/q <= k+eps."""
    p_prime = p + int(q * eps)
    return canonical_precoloring(p_prime, q)


def extend_universal(case, p: int, q: int, d: int, n: int, eps,
                     pre: Optional[Precoloring] = None, graph: Optional[Graph] = None):
    """Color U^n_{p,q,d}; returns (graph, coloring, precolored map)."""
    case = _case(case)
    eps = as_fraction(eps)
    k = Fraction(p, q)
    if not applicability(case, k, d):
        raise InapplicableCase(f"{case.value} does not apply at k={k}, d={d}")
    if pre is None:
        pre = default_precoloring(p, q, eps)
    part = build_pseudorandom(pre, p, q, eps)
    G = graph if graph is not None else build_universal(p, q, d, n)
    assignment: Dict[int, IntervalSet] = {}
    precolored: Dict[int, IntervalSet] = {}
    # vertex lookup by (ray, level, label)
    index = {(v.ray, v.level, v.label): v.id for v in G.vertices}
    even = d % 2 == 0
    P = d // 2
    layer_measures = {}
    for r, s in enumerate(G.special, start=1):
        X = G.vertices[s].label
        C_i = pre.sets[(r - 1) % len(pre.sets)]
        rc = color_ray(case, p, q, d, eps, C_i, part, special_label=X, check_applicability=False)
        for (A, level), S in rc.colors.items():
            ray = 0 if (even and level == P) else r
            vid = index[(ray, level, A)]
            prev = assignment.get(vid)
            if prev is not None and prev != S:
                raise AssertionError(f"rays disagree on shared vertex {vid}")
            assignment[vid] = S
        precolored[s] = C_i
        layer_measures[r] = rc.layer_measures
    span = k + eps
    coloring = FractionalColoring(assignment, span, {
        "p": p, "q": q, "d": d, "n": n, "eps": eps, "case": case.value})
    coloring.meta["layer_measures"] = {
        r: {ell: str(m) for ell, m in sorted(ms.items())} for r, ms in layer_measures.items()}
    return G, coloring, precolored


@dataclass(frozen=True)
class Violation:
    kind: str  # span, overlap, measure, precolor, missing
    vertices: Tuple[int, ...]
    detail: str

    def __str__(self) -> str:
        return f"{self.kind} {list(self.vertices)}: {self.detail}"


def verify_coloring(G: Graph, coloring: FractionalColoring, precolored: Optional[Dict[int, IntervalSet]] = None,
                    strict: bool = False, strict_vertices: Optional[Sequence[int]] = None) -> List[Violation]:
    """(a) sets inside [0, span), (b) adjacent sets disjoint, (c) measure >= 1
    (exactly 1 where strict), (d) precolored vertices unchanged."""
    precolored = precolored or {}
    out: List[Violation] = []
    whole = IntervalSet.interval(0, coloring.span)
    A = coloring.assignment
    strict_set = set(range(G.n)) if strict else set(strict_vertices or ())
    # vertices often share one set object; measure and mask each object once
    distinct = {id(S): S for S in A.values()}
    grid = CellGrid(distinct.values())
    masks = {key: grid.mask(S) for key, S in distinct.items()}
    measures = {key: grid.measure(m) for key, m in masks.items()}
    vmask: List[Optional[int]] = [None] * G.n
    for v in range(G.n):
        S = A.get(v)
        if S is None:
            out.append(Violation("missing", (v,), "no color assigned"))
            continue
        vmask[v] = masks[id(S)]
        if S and (S.lower() < 0 or S.upper() > coloring.span):
            out.append(Violation("span", (v,), f"outside [0,{coloring.span}): {(S - whole).to_text()}"))
        m = measures[id(S)]
        if m < 1 or (v in strict_set and m != 1):
            out.append(Violation("measure", (v,), f"measure {m}"))
    for u, v in G.edges():
        mu, mv = vmask[u], vmask[v]
        if mu is not None and mv is not None and mu & mv:
            out.append(Violation("overlap", (u, v), grid.to_set(mu & mv).to_text()))
    for v, S in precolored.items():
        if A.get(v) != S:
            out.append(Violation("precolor", (v,), "precolored vertex changed"))
    return out


def normalize_to_unit(coloring: FractionalColoring, keep: Sequence[int] = ()) -> FractionalColoring:
    """Trim every set from the right to measure exactly one; `keep` vertices untouched."""
    keep = set(keep)
    out = {}
    for v, S in coloring.assignment.items():
        out[v] = S if v in keep or S.measure() == 1 else carve(S, 1)
    return FractionalColoring(out, coloring.span, dict(coloring.meta))
