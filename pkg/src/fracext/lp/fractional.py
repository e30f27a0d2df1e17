"""Fractional chromatic number, fractional cliques and lower-bound certificates."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Dict, Iterator, List, Optional, Tuple

from ..graphs import BudgetExceeded, Graph, kneser, kneser_labels, standard_ray
from ..measure import union_all
from .mwis import DEFAULT_NODE_BUDGET, independent_set_above, max_weight_independent_set, milp_candidate
from .simplex import IncrementalLP, LinearProgramInstance


def _bits(m: int) -> Iterator[int]:
    while m:
        low = m & -m
        yield low.bit_length() - 1
        m ^= low


def _maximalize(adj: List[int], members: int) -> int:
    blocked = members
    for v in _bits(members):
        blocked |= adj[v]
    for v in range(len(adj)):
        if not blocked >> v & 1:
            members |= 1 << v
            blocked |= adj[v] | 1 << v
    return members


@dataclass
class FractionalChromaticResult:
    value: Fraction
    columns: List[int]  # independent sets as vertex bitmasks
    weights: List[Fraction]
    clique: List[Fraction]  # optimal dual: a fractional clique of the same weight
    rounds: int

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.value == other
        return NotImplemented


def _float_column_generation(adj: List[int], cols: List[int], max_rounds: int = 500) -> List[float]:
    """Float column generation for min sum x, sum over sets containing v >= 1.
    Extends `cols` in place and returns the final float weights."""
    import numpy as np
    from scipy.optimize import linprog

    n = len(adj)
    have = set(cols)
    x: List[float] = []
    for _ in range(max_rounds):
        A = np.zeros((n, len(cols)))
        for j, c in enumerate(cols):
            for v in _bits(c):
                A[v, j] = -1.0
        r = linprog(np.ones(len(cols)), A_ub=A, b_ub=-np.ones(n), method="highs")
        if r.status != 0:
            raise RuntimeError(f"float LP failed: {r.message}")
        x = list(r.x)
        y = [max(-m, 0.0) for m in r.ineqlin.marginals]
        mask = milp_candidate(adj, y)
        if not mask or sum(y[v] for v in _bits(mask)) <= 1 + 1e-9:
            break
        c = _maximalize(adj, mask)
        if c in have:
            break
        cols.append(c)
        have.add(c)
    return x


def frac_chromatic_certified(G: Graph, budget: int = DEFAULT_NODE_BUDGET) -> FractionalChromaticResult:
    """Column generation: float rounds to find the right sets, then exact rounds
    on the support, then an exact lower-bound certificate."""
    if G.n == 0:
        raise ValueError("graph is empty")
    adj = G.bitsets()
    for v in range(G.n):
        if adj[v] >> v & 1:
            raise ValueError("graph has a loop")
    cover: List[int] = []
    uncovered = (1 << G.n) - 1
    while uncovered:
        v = (uncovered & -uncovered).bit_length() - 1
        c = _maximalize(adj, 1 << v)
        cover.append(c)
        uncovered &= ~c
    pool = list(cover)
    weights = _float_column_generation(adj, pool)
    # the cover keeps the exact restricted LP feasible
    cols = list(dict.fromkeys(cover + [c for c, w in zip(pool, weights) if w > 1e-9]))
    lp = LinearProgramInstance()
    names = [lp.add_variable(f"I{i}") for i in range(len(cols))]
    for v in range(G.n):
        lp.add_constraint({names[i]: 1 for i, c in enumerate(cols) if c >> v & 1}, ">=", 1, f"v{v}")
    lp.set_objective({n: 1 for n in names})
    solver = IncrementalLP(lp)
    rounds = 0
    exact = False
    alpha: Optional[Fraction] = None
    while True:
        rounds += 1
        res = solver.solve()
        x = [res.primal[n] for n in names]
        if alpha is None:
            # The uniform clique 1/alpha is always feasible and is optimal on
            # vertex-transitive graphs; it needs one unweighted search.
            alpha = max_weight_independent_set(adj, [1] * G.n, budget)[0]
        if Fraction(G.n) / alpha == res.optimum:
            return FractionalChromaticResult(res.optimum, cols, x, [1 / alpha] * G.n, rounds)
        y = [res.dual[f"v{v}"] for v in range(G.n)]
        found = independent_set_above(adj, y, Fraction(1), budget, exact=exact)
        if found is None:
            if exact:
                return FractionalChromaticResult(res.optimum, cols, x, y, rounds)
            exact = True
            continue
        c = _maximalize(adj, found[1])
        cols.append(c)
        names.append(f"I{len(cols) - 1}")
        solver.add_column(names[-1], {f"v{v}": 1 for v in range(G.n) if c >> v & 1}, 1)


def frac_chromatic(G: Graph, budget: int = DEFAULT_NODE_BUDGET) -> Fraction:
    """Exact fractional chromatic number by column generation with exact pricing."""
    return frac_chromatic_certified(G, budget).value


# ---------------------------------------------------------------- fractional cliques

@dataclass
class FractionalClique:
    graph: Graph
    weights: Dict[int, Fraction]

    def total(self) -> Fraction:
        return sum(self.weights.values(), Fraction(0))

    def max_independent_weight(self, budget: int = DEFAULT_NODE_BUDGET) -> Fraction:
        w = [self.weights.get(v, Fraction(0)) for v in range(self.graph.n)]
        return max_weight_independent_set(self.graph.bitsets(), w, budget)[0]

    def is_valid(self, budget: int = DEFAULT_NODE_BUDGET) -> bool:
        return all(0 <= w <= 1 for w in self.weights.values()) and self.max_independent_weight(budget) <= 1


def _check_d6_range(p: int, q: int) -> Fraction:
    if q % 2:
        raise ValueError(f"q must be even, got {q}")
    k = Fraction(p, q)
    if not Fraction(5, 2) <= k < 3:
        raise ValueError(f"p/q must lie in [5/2, 3), got {k}")
    return k


def fractional_clique_d6(p: int, q: int) -> FractionalClique:
    """Weight 3-k on [q], 1/|V1| on each label avoiding [q], 2(k-2)/|V2| on each
    label meeting [q] in exactly q/2 elements; zero elsewhere."""
    k = _check_d6_range(p, q)
    G = kneser(p, q)
    qmask = (1 << q) - 1
    root = G.find(qmask)
    V1 = [v.id for v in G.vertices if not v.label & qmask]
    V2 = [v.id for v in G.vertices if bin(v.label & qmask).count("1") == q // 2]
    w: Dict[int, Fraction] = {root: 3 - k}
    for v in V1:
        w[v] = Fraction(1, len(V1))
    for v in V2:
        w[v] = 2 * (k - 2) / len(V2)
    return FractionalClique(G, w)


@dataclass
class DualCertificate:
    objective: Fraction
    feasible: bool
    target: Fraction  # k + q/p'
    eps_prime: Fraction
    mwis_with_special: Fraction
    mwis_without_special: Fraction

    def __iter__(self):
        yield self.objective
        yield self.feasible


def dual_certificate_d6(p: int, q: int, p_prime: int, budget: int = DEFAULT_NODE_BUDGET) -> DualCertificate:
    """Dual solution of the one-ray program at d=6 showing that eps' = p'/q - k is too small.

    y copies the fractional clique onto the ray (labels disjoint from [q] at
    level 1, the others at level 2); the special-flag class values become a
    weight 1/C(p-q,q) on each base neighbour of [q].  Feasibility is checked
    exactly against every independent set of the ray, with and without the
    special vertex.
    """
    k = _check_d6_range(p, q)
    eps_p = Fraction(p_prime, q) - k
    # k < p'/q < k + eps0 where eps0^2 + k eps0 = 1
    if not (eps_p > 0 and eps_p * eps_p + k * eps_p < 1):
        raise ValueError(f"p'={p_prime} is outside the window k < p'/q < k + (sqrt(k^2+4)-k)/2")
    x = fractional_clique_d6(p, q)
    K = x.graph
    R = standard_ray(p, q, 3)
    qmask = (1 << q) - 1
    s = R.special[0]
    y = [Fraction(0)] * R.n
    for v, w in x.weights.items():
        A = K.vertices[v].label
        y[R.find(A, 1 if not A & qmask else 2)] += w
    n_size = comb(p - q, q)
    base_w = [Fraction(0)] * R.n
    for A in kneser_labels(p, q):
        if not A & qmask:
            base_w[R.find(A, 3)] = Fraction(1, n_size)
    adj = R.bitsets()
    # s in I: y^d(I & H) + y(I) with I avoiding s's neighbourhood
    allowed = [v for v in range(R.n) if v != s and not adj[s] >> v & 1]
    w_with = [Fraction(0)] * R.n
    for v in allowed:
        w_with[v] = y[v] + base_w[v]
    m_with = max_weight_independent_set(adj, w_with, budget)[0]
    m_without = max_weight_independent_set(adj, y, budget)[0]
    # objective: sum y + sum over special-flag classes of mass * y^d(footprint), masses at eps'
    star_mass = 1 / (p + q * eps_p)
    yd_term = Fraction(0)
    for a in range(p):
        in_star = sum(1 for A in kneser_labels(p, q) if not A & qmask and A >> a & 1)
        yd_term += star_mass * Fraction(in_star, n_size)
    objective = sum(y, Fraction(0)) + yd_term
    feasible = m_with <= 1 and m_without <= 1
    return DualCertificate(objective, feasible, k + Fraction(q, p_prime), eps_p, m_with, m_without)


# ---------------------------------------------------------------- expansion and spectrum

def _dominance_order(p: int, q: int) -> List[Tuple[int, ...]]:
    return sorted(itertools.combinations(range(p), q), key=lambda A: (sum(A), A))


def _lower_covers(A: Tuple[int, ...]) -> List[Tuple[int, ...]]:
    out = []
    for t, a in enumerate(A):
        if a > 0 and (t == 0 or A[t - 1] < a - 1):
            out.append(A[:t] + (a - 1,) + A[t + 1:])
    return out


def expansion_ratio(p: int, q: int, method: str = "shifted", budget: int = 1 << 20) -> Fraction:
    """min |N(I)|/|I| over nonempty independent sets I of K(p,q).

    "brute" scans every independent set.  "shifted" scans only families that are
    down-sets of the dominance order: shifting keeps a family intersecting and
    of the same size and never enlarges its upper shadow, and N(I) is the
    complement image of the upper shadow of I at level p-q.
    """
    if method == "brute":
        from ..graphs import EnumerationConstraints, enumerate_independent_sets
        G = kneser(p, q)
        adj = G.bitsets()
        best = None
        for I in enumerate_independent_sets(G, EnumerationConstraints(budget=budget)):
            if not I:
                continue
            nb = 0
            for v in I:
                nb |= adj[v]
            r = Fraction(bin(nb).count("1"), len(I))
            if best is None or r < best:
                best = r
        return best
    if method != "shifted":
        raise ValueError(f"unknown method {method!r}")
    order = _dominance_order(p, q)
    idx = {A: i for i, A in enumerate(order)}
    masks = [sum(1 << a for a in A) for A in order]
    labels = kneser_labels(p, q)
    lab_idx = {m: i for i, m in enumerate(labels)}
    # neighbours of each set as a bitmask over `labels`
    nbr = []
    for m in masks:
        nb = 0
        for j, B in enumerate(labels):
            if not m & B:
                nb |= 1 << j
        nbr.append(nb)
    covers = [[idx[B] for B in _lower_covers(A)] for A in order]
    n = len(order)
    disjoint = [sum(1 << j for j in range(i) if not masks[i] & masks[j]) for i in range(n)]
    best: List[Optional[Fraction]] = [None]
    nodes = [0]

    def addable(i: int, chosen: int) -> bool:
        return not chosen & disjoint[i] and all(chosen >> c & 1 for c in covers[i])

    def rec(start: int, chosen: int, count: int, neigh: int) -> None:
        # every chosen family here is a down-set; branch only on addable elements
        nodes[0] += 1
        if nodes[0] > budget:
            raise BudgetExceeded("shifted-family search", budget)
        if count:
            r = Fraction(bin(neigh).count("1"), count)
            if best[0] is None or r < best[0]:
                best[0] = r
        for i in range(start, n):
            if addable(i, chosen):
                rec(i + 1, chosen | 1 << i, count + 1, neigh | nbr[i])

    rec(0, 0, 0, 0)
    return best[0]


def second_eigenvalue(p: int, q: int) -> float:
    """Second-largest absolute eigenvalue of the adjacency matrix of K(p,q) divided by its degree."""
    import numpy as np

    G = kneser(p, q)
    if G.n > 5000:
        raise ValueError("graph too large for a dense eigendecomposition")
    A = np.zeros((G.n, G.n))
    for v, nb in enumerate(G.adj):
        for u in nb:
            A[v, u] = 1.0
    deg = len(G.adj[0])
    ev = np.linalg.eigvalsh(A / deg)
    mags = sorted(abs(ev), reverse=True)
    return float(mags[1])


def neighborhood_load(G: Graph, coloring) -> Tuple[int, Fraction]:
    """Vertex maximizing the measure of the union of its neighbours' colors, and that measure."""
    best_v, best = -1, Fraction(-1)
    for v in range(G.n):
        m = union_all(coloring[u] for u in G.adj[v]).measure()
        if m > best:
            best_v, best = v, m
    return best_v, best
