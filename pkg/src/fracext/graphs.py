"""Kneser graphs, extension products, rays and universal graphs.

Subset labels are bitmasks: element i of [p] (1-based) is bit i-1.  Vertex
ids are dense and ordered by ray, then level, then label rank, so the shared
base of an even-distance universal graph (ray 0) comes first.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set

DEFAULT_ENUMERATION_BUDGET = 5_000_000
INFINITY = float("inf")


class BudgetExceeded(RuntimeError):
    def __init__(self, what: str, budget: int):
        self.what = what
        self.budget = budget
        super().__init__(f"{what}: budget of {budget} exceeded")


def label_mask(elements: Iterable[int]) -> int:
    m = 0
    for e in elements:
        if e < 1:
            raise ValueError("subset elements are 1-based")
        m |= 1 << (e - 1)
    return m


def label_elements(mask: int) -> List[int]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def kneser_labels(p: int, q: int) -> List[int]:
    """All q-subsets of [p] as bitmasks, in lexicographic order of their element lists."""
    return [label_mask(c) for c in itertools.combinations(range(1, p + 1), q)]


@dataclass(frozen=True)
class Vertex:
    id: int
    label: Optional[int]
    level: int = 0
    ray: int = 0

    def elements(self) -> List[int]:
        return label_elements(self.label or 0)


@dataclass(frozen=True)
class RaySpec:
    p: int
    q: int
    length: int
    special_label: int

    def __post_init__(self):
        if self.q < 1 or self.p < 2 * self.q:
            raise ValueError(f"ray needs p >= 2q, got p={self.p}, q={self.q}")
        if self.length < 1:
            raise ValueError("ray length must be at least 1")
        if bin(self.special_label).count("1") != self.q or self.special_label >> self.p:
            raise ValueError("special label must be a q-subset of [p]")


class Graph:
    """Immutable simple graph with labeled vertices."""

    def __init__(self, vertices: Sequence[Vertex], adjacency: Sequence[Iterable[int]],
                 special: Sequence[int] = (), p: Optional[int] = None, q: Optional[int] = None):
        self.vertices: List[Vertex] = list(vertices)
        self.adj: List[FrozenSet[int]] = [frozenset(a) for a in adjacency]
        self.special: List[int] = list(special)
        self.p = p
        self.q = q
        if len(self.adj) != len(self.vertices):
            raise ValueError("adjacency length mismatch")
        for v, nb in enumerate(self.adj):
            if v in nb:
                raise ValueError(f"self-loop at {v}")
            for u in nb:
                if v not in self.adj[u]:
                    raise ValueError(f"asymmetric edge {v}-{u}")
        self._index = None

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def n(self) -> int:
        return len(self.vertices)

    def edges(self) -> Iterator[tuple]:
        for v, nb in enumerate(self.adj):
            for u in nb:
                if v < u:
                    yield (v, u)

    def num_edges(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def adjacent(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def find(self, label: int, level: int = 0, ray: int = 0) -> int:
        if self._index is None:
            self._index = {(x.label, x.level, x.ray): x.id for x in self.vertices}
        return self._index[(label, level, ray)]

    def bitsets(self) -> List[int]:
        out = []
        for nb in self.adj:
            m = 0
            for u in nb:
                m |= 1 << u
            out.append(m)
        return out

    def induced(self, keep: Sequence[int]) -> "Graph":
        pos = {v: i for i, v in enumerate(keep)}
        verts = [Vertex(i, self.vertices[v].label, self.vertices[v].level, self.vertices[v].ray)
                 for i, v in enumerate(keep)]
        adj = [[pos[u] for u in self.adj[v] if u in pos] for v in keep]
        return Graph(verts, adj, [pos[s] for s in self.special if s in pos], self.p, self.q)

    def export_text(self) -> str:
        """One line per vertex: `<id> <label-bits> <level> <ray> : <neighbor ids>`."""
        lines = []
        for v in self.vertices:
            bits = format(v.label, "b") if v.label is not None else "-"
            nbrs = " ".join(str(u) for u in sorted(self.adj[v.id]))
            lines.append(f"{v.id} {bits} {v.level} {v.ray} : {nbrs}".rstrip())
        return "\n".join(lines) + "\n"


def _check_pq(p: int, q: int) -> None:
    if q < 1 or p < 2 * q:
        raise ValueError(f"Kneser graph needs q >= 1 and p >= 2q, got p={p}, q={q}")


def kneser_neighbor_ranks(p: int, q: int) -> List[List[int]]:
    labels = kneser_labels(p, q)
    rank = {b: i for i, b in enumerate(labels)}
    out = []
    for b in labels:
        rest = [e + 1 for e in range(p) if not b >> e & 1]
        out.append(sorted(rank[label_mask(c)] for c in itertools.combinations(rest, q)))
    return out


def kneser(p: int, q: int) -> Graph:
    _check_pq(p, q)
    labels = kneser_labels(p, q)
    verts = [Vertex(i, b) for i, b in enumerate(labels)]
    return Graph(verts, kneser_neighbor_ranks(p, q), p=p, q=q)


def path_graph(n: int) -> Graph:
    verts = [Vertex(i, None, i) for i in range(n)]
    adj = [[j for j in (i - 1, i + 1) if 0 <= j < n] for i in range(n)]
    return Graph(verts, adj)


def complete_graph(n: int) -> Graph:
    verts = [Vertex(i, None, i) for i in range(n)]
    return Graph(verts, [[j for j in range(n) if j != i] for i in range(n)])


def extension_product(G: Graph, H: Graph) -> Graph:
    """(u,v)~(u',v') iff u~u' in G and (v=v' or v~v' in H).

    The product vertex keeps G's label and takes H's vertex index as its level.
    """
    if not G.n or not H.n:
        raise ValueError("extension product needs nonempty factors")
    nG = G.n

    def vid(u: int, v: int) -> int:
        return v * nG + u

    verts = []
    adj: List[List[int]] = []
    for v in range(H.n):
        for u in range(nG):
            verts.append(Vertex(vid(u, v), G.vertices[u].label, v, 0))
            nb = []
            for v2 in itertools.chain((v,), H.adj[v]):
                nb.extend(vid(u2, v2) for u2 in G.adj[u])
            adj.append(nb)
    return Graph(verts, adj, p=G.p, q=G.q)


def build_ray(spec: RaySpec) -> Graph:
    G = extension_product(kneser(spec.p, spec.q), path_graph(spec.length + 1))
    special = G.find(spec.special_label, 0, 0)
    return Graph(G.vertices, G.adj, [special], spec.p, spec.q)


def standard_ray(p: int, q: int, length: int) -> Graph:
    """The ray whose special vertex carries the label [q]."""
    return build_ray(RaySpec(p, q, length, (1 << q) - 1))


def build_universal(p: int, q: int, d: int, n: int = 1) -> Graph:
    """Universal graph: n rays per special label, glued at a shared base (even d)
    or with disjoint-label edges between the bases of distinct rays (odd d)."""
    if d < 3:
        raise ValueError(f"universal graph needs d >= 3, got {d}")
    if n < 1:
        raise ValueError("n must be positive")
    _check_pq(p, q)
    labels = kneser_labels(p, q)
    C = len(labels)
    knb = kneser_neighbor_ranks(p, q)
    nrays = n * C
    even = d % 2 == 0
    P = d // 2

    # a slot is one copy of the Kneser graph, identified by (ray, level)
    slots: List[tuple] = []
    if even:
        slots.append((0, P))
    for r in range(1, nrays + 1):
        for level in range(P if even else P + 1):
            slots.append((r, level))
    slot_id = {s: i for i, s in enumerate(slots)}
    slot_adj: List[List[int]] = [[] for _ in slots]

    def link(a: tuple, b: tuple) -> None:
        slot_adj[slot_id[a]].append(slot_id[b])
        slot_adj[slot_id[b]].append(slot_id[a])

    for r in range(1, nrays + 1):
        # odd d: the ray runs up to its own base at level P
        for level in range(P - 1 if even else P):
            link((r, level), (r, level + 1))
        if even:
            link((r, P - 1), (0, P))
    if not even:
        for r in range(1, nrays + 1):
            for r2 in range(r + 1, nrays + 1):
                link((r, P), (r2, P))

    verts: List[Vertex] = []
    for (r, level) in slots:
        for i in range(C):
            verts.append(Vertex(len(verts), labels[i], level, r))
    adj: List[List[int]] = []
    for s in range(len(slots)):
        for i in range(C):
            nb = [s * C + j for j in knb[i]]
            for t in slot_adj[s]:
                nb.extend(t * C + j for j in knb[i])
            adj.append(nb)
    special = [slot_id[(r, 0)] * C + (r - 1) // n for r in range(1, nrays + 1)]
    return Graph(verts, adj, special, p, q)


def distance_layers(G: Graph, v: int) -> List[Set[int]]:
    dist = {v: 0}
    layers = [{v}]
    frontier = [v]
    while frontier:
        nxt = []
        for u in frontier:
            for w in G.adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    nxt.append(w)
        if nxt:
            layers.append(set(nxt))
        frontier = nxt
    return layers


def distances_from(G: Graph, v: int) -> Dict[int, int]:
    dist = {v: 0}
    dq = deque([v])
    while dq:
        u = dq.popleft()
        for w in G.adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                dq.append(w)
    return dist


def odd_girth(G: Graph):
    """Length of a shortest odd cycle, or infinity when G is bipartite."""
    best = INFINITY
    for s in range(G.n):
        dist = {s: 0}
        dq = deque([s])
        while dq:
            u = dq.popleft()
            du = dist[u]
            if 2 * du + 1 >= best:
                break
            for w in G.adj[u]:
                dw = dist.get(w)
                if dw is None:
                    dist[w] = du + 1
                    dq.append(w)
                elif dw == du:
                    best = min(best, 2 * du + 1)
    return best if best != INFINITY else INFINITY


def kneser_odd_girth_formula(p: int, q: int) -> int:
    if p <= 2 * q:
        raise ValueError("formula needs p > 2q")
    return 2 * (-(-q // (p - 2 * q))) + 1


def is_independent(G: Graph, S: Iterable[int]) -> bool:
    S = set(S)
    return all(not (G.adj[v] & S) for v in S)


def layer_independence_bound(p: int, q: int, d: int) -> int:
    """Largest i <= floor(d/2)-1 such that BFS layers 1..i around the special
    vertex of a ray of length floor(d/2) are all independent."""
    cap = d // 2 - 1
    R = standard_ray(p, q, d // 2)
    layers = distance_layers(R, R.special[0])
    best = 0
    for i in range(1, cap + 1):
        if i < len(layers) and is_independent(R, layers[i]):
            best = i
        else:
            break
    return best


def layer_independence_formula(p: int, q: int, d: int) -> int:
    cap = d // 2 - 1
    if p == 2 * q:
        return cap
    return min(-(-q // (p - 2 * q)) - 1, cap)


@dataclass
class EnumerationConstraints:
    required: FrozenSet[int] = frozenset()
    forbidden: FrozenSet[int] = frozenset()
    maximal_only: bool = False
    budget: int = DEFAULT_ENUMERATION_BUDGET


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def enumerate_independent_sets(G: Graph, constraints: Optional[EnumerationConstraints] = None
                               ) -> Iterator[FrozenSet[int]]:
    """Stream independent sets containing `required` and avoiding `forbidden`.

    With maximal_only, yields sets that are maximal under those constraints,
    using pivoted Bron-Kerbosch on the complement graph.
    """
    c = constraints or EnumerationConstraints()
    adj = G.bitsets()
    req = 0
    for v in c.required:
        req |= 1 << v
    if any(adj[v] & req for v in c.required):
        return
    allowed = (1 << G.n) - 1
    for v in c.forbidden:
        allowed &= ~(1 << v)
    if req & ~allowed:
        return
    cand = allowed & ~req
    for v in c.required:
        cand &= ~adj[v]
    count = 0

    if not c.maximal_only:
        stack = [(req, cand)]
        while stack:
            R, P = stack.pop()
            count += 1
            if count > c.budget:
                raise BudgetExceeded("independent-set enumeration", c.budget)
            yield frozenset(_bits(R))
            # push in reverse so smaller vertices are expanded first
            for v in reversed(list(_bits(P))):
                higher = P & ~((1 << (v + 1)) - 1)
                stack.append((R | (1 << v), higher & ~adj[v]))
        return

    def bk(R: int, P: int, X: int):
        nonlocal count
        if not P and not X:
            count += 1
            if count > c.budget:
                raise BudgetExceeded("maximal independent-set enumeration", c.budget)
            yield frozenset(_bits(R))
            return
        # pivot maximizing |P \ N(u)| in the complement, i.e. |P & ~adj[u]|
        pivot = max(_bits(P | X), key=lambda u: bin(P & ~adj[u]).count("1"))
        for v in list(_bits(P & (adj[pivot] | (1 << pivot)))):
            yield from bk(R | (1 << v), P & ~adj[v] & ~(1 << v), X & ~adj[v] & ~(1 << v))
            P &= ~(1 << v)
            X |= 1 << v

    yield from bk(req, cand, 0)
