"""Exact maximum-weight independent set by branch and bound.

Graphs are given as adjacency bitmasks; weights are non-negative integers
(callers scale rational weights by a common denominator).
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import List, Optional, Sequence, Tuple

from ..graphs import BudgetExceeded

DEFAULT_NODE_BUDGET = 5_000_000


def _bits(m: int):
    while m:
        low = m & -m
        yield low.bit_length() - 1
        m ^= low


def _cover_bound(cand: int, adj: Sequence[int], weight: Sequence[int]) -> int:
    """Greedy clique cover of `cand`; each clique contributes its heaviest weight."""
    total = 0
    rest = cand
    while rest:
        v = (rest & -rest).bit_length() - 1
        clique_common = adj[v] & rest
        top = weight[v]
        rest &= ~(1 << v)
        while clique_common:
            u = (clique_common & -clique_common).bit_length() - 1
            if weight[u] > top:
                top = weight[u]
            rest &= ~(1 << u)
            clique_common &= adj[u]
        total += top
    return total


def mwis_bitset(adj: Sequence[int], weight: Sequence[int], budget: int = DEFAULT_NODE_BUDGET,
                lower: int = 0) -> Tuple[int, int]:
    """Returns (best weight, vertex mask). Vertices with zero weight are ignored."""
    n = len(adj)
    # heaviest first so the cover bound groups heavy vertices early
    order = sorted((i for i in range(n) if weight[i] > 0), key=lambda i: -weight[i])
    pos = {v: i for i, v in enumerate(order)}
    A = [0] * len(order)
    W = [weight[v] for v in order]
    for i, v in enumerate(order):
        m = 0
        for u in _bits(adj[v]):
            j = pos.get(u)
            if j is not None:
                m |= 1 << j
        A[i] = m
    best = [lower, 0]
    nodes = [0]

    def rec(cand: int, cur: int, chosen: int) -> None:
        nodes[0] += 1
        if nodes[0] > budget:
            raise BudgetExceeded("weighted independent-set search", budget)
        # take vertices with no neighbours left for free
        free = 0
        for v in _bits(cand):
            if not A[v] & cand:
                free |= 1 << v
        if free:
            cur += sum(W[v] for v in _bits(free))
            chosen |= free
            cand &= ~free
        if cur > best[0]:
            best[0], best[1] = cur, chosen
        if not cand:
            return
        if cur + _cover_bound(cand, A, W) <= best[0]:
            return
        v = max(_bits(cand), key=lambda i: (bin(A[i] & cand).count("1"), W[i]))
        rec(cand & ~A[v] & ~(1 << v), cur + W[v], chosen | 1 << v)
        rec(cand & ~(1 << v), cur, chosen)

    rec((1 << len(order)) - 1, 0, 0)
    mask = 0
    for i in _bits(best[1]):
        mask |= 1 << order[i]
    return best[0], mask


def scale_weights(weights: Sequence[Fraction]) -> Tuple[List[int], int]:
    den = lcm(*[Fraction(w).denominator for w in weights]) if weights else 1
    return [int(Fraction(w) * den) for w in weights], den


def max_weight_independent_set(adj: Sequence[int], weights: Sequence[Fraction],
                               budget: int = DEFAULT_NODE_BUDGET) -> Tuple[Fraction, List[int]]:
    ints, den = scale_weights([max(Fraction(w), Fraction(0)) for w in weights])
    best, mask = mwis_bitset(adj, ints, budget)
    return Fraction(best, den), list(_bits(mask))


def milp_candidate(adj: Sequence[int], weights: Sequence[float], time_limit: float = 10.0) -> Optional[int]:
    """Heuristic maximum-weight independent set from a floating-point MILP.

    Only ever used to propose columns; callers re-evaluate the proposal
    exactly.  Returns None when scipy is unavailable or the solve fails.
    """
    try:
        import numpy as np
        from scipy.optimize import Bounds, LinearConstraint, milp
        from scipy.sparse import coo_matrix
    except ImportError:  # pragma: no cover
        return None
    support = [v for v in range(len(adj)) if weights[v] > 0]
    if not support:
        return 0
    pos = {v: i for i, v in enumerate(support)}
    rows, cols = [], []
    r = 0
    for v in support:
        for u in _bits(adj[v]):
            j = pos.get(u)
            if j is not None and u > v:
                rows += [r, r]
                cols += [pos[v], j]
                r += 1
    c = -np.array([float(weights[v]) for v in support])
    cons = []
    if r:
        A = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(r, len(support)))
        cons.append(LinearConstraint(A, -np.inf, 1))
    res = milp(c, constraints=cons, integrality=np.ones(len(support)), bounds=Bounds(0, 1),
               options={"time_limit": time_limit})
    if res.x is None:
        return None
    mask = 0
    for i, v in enumerate(support):
        if res.x[i] > 0.5:
            mask |= 1 << v
    return mask


def independent_set_above(adj: Sequence[int], weights: Sequence[Fraction], threshold: Fraction,
                          budget: int = DEFAULT_NODE_BUDGET, use_milp: bool = True,
                          exact: bool = True) -> Optional[Tuple[Fraction, int]]:
    """An independent set of weight > threshold, or None once exact search rules one out.

    A greedy pass and (optionally) a MILP proposal are tried first; a
    proposal is accepted only after exact re-evaluation.  Otherwise exact
    branch and bound runs with the threshold as its incumbent.  With
    exact=False the search stops after the heuristics, so None proves nothing.
    """
    weights = [Fraction(w) for w in weights]
    n = len(adj)

    def value(mask: int) -> Fraction:
        return sum((weights[v] for v in _bits(mask)), Fraction(0))

    def independent(mask: int) -> bool:
        return all(not adj[v] & mask for v in _bits(mask))

    order = sorted(range(n), key=lambda v: -weights[v])
    mask = blocked = 0
    for v in order:
        if weights[v] <= 0:
            break
        if not blocked >> v & 1:
            mask |= 1 << v
            blocked |= adj[v] | 1 << v
    if value(mask) > threshold:
        return value(mask), mask
    if use_milp:
        cand = milp_candidate(adj, [float(w) for w in weights])
        if cand and independent(cand) and value(cand) > threshold:
            return value(cand), cand
    if not exact:
        return None
    ints, den = scale_weights([w if w > 0 else Fraction(0) for w in weights])
    t = threshold * den
    lower = t.numerator // t.denominator  # floor; strictly-above means > t
    best, m = mwis_bitset(adj, ints, budget, lower=lower)
    if m and Fraction(best, den) > threshold:
        return Fraction(best, den), m
    return None
