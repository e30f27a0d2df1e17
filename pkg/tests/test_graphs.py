import itertools
from collections import deque
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracext.graphs import (INFINITY, BudgetExceeded, EnumerationConstraints, Graph, RaySpec, Vertex, build_ray,
                            build_universal, complete_graph, distance_layers, distances_from,
                            enumerate_independent_sets, extension_product, is_independent, kneser,
                            kneser_odd_girth_formula, label_mask, layer_independence_bound,
                            layer_independence_formula, odd_girth, path_graph, standard_ray)


def bfs(G, s):
    dist = {s: 0}
    dq = deque([s])
    while dq:
        u = dq.popleft()
        for w in G.adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                dq.append(w)
    return dist


def brute_independent_sets(G):
    out = []
    for r in range(G.n + 1):
        for S in itertools.combinations(range(G.n), r):
            if all(not G.adjacent(u, v) for u, v in itertools.combinations(S, 2)):
                out.append(frozenset(S))
    return out


def graph_from_edges(n, edges):
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    return Graph([Vertex(i, None) for i in range(n)], adj)


random_graphs = st.integers(1, 9).flatmap(
    lambda n: st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=20).map(
        lambda es: graph_from_edges(n, sorted({(min(e), max(e)) for e in es if e[0] != e[1]}))))


def test_petersen():
    G = kneser(5, 2)
    assert (G.n, G.num_edges()) == (10, 15)
    assert all(G.degree(v) == 3 for v in range(G.n))


def test_kneser_7_3_degree():
    G = kneser(7, 3)
    assert G.n == 35 and all(G.degree(v) == comb(4, 3) for v in range(G.n))


def test_kneser_4_2_is_a_matching():
    G = kneser(4, 2)
    assert G.n == 6 and G.num_edges() == 3 and all(G.degree(v) == 1 for v in range(6))


def test_kneser_rejects_small_p():
    with pytest.raises(ValueError):
        kneser(3, 2)


def test_kneser_adjacency_is_disjointness():
    G = kneser(6, 2)
    for u, v in itertools.combinations(range(G.n), 2):
        assert G.adjacent(u, v) == (G.vertices[u].label & G.vertices[v].label == 0)


def test_extension_product_examples():
    K2 = complete_graph(2)
    P = extension_product(K2, K2)
    assert P.n == 4 and P.num_edges() == 4 and all(P.degree(v) == 2 for v in range(4))
    pet = kneser(5, 2)
    single = extension_product(pet, path_graph(1))
    assert sorted(single.edges()) == sorted(pet.edges())
    R = extension_product(pet, path_graph(3))
    assert R.n == 30
    # brute-force expansion of the definition
    expected = 0
    for (u, a), (v, b) in itertools.combinations(itertools.product(range(10), range(3)), 2):
        if pet.adjacent(u, v) and abs(a - b) <= 1:
            expected += 1
    assert R.num_edges() == expected


def test_ray_sizes_and_special():
    X = label_mask([1, 2])
    R = build_ray(RaySpec(5, 2, 2, X))
    assert R.n == 30
    s = R.special[0]
    assert (R.vertices[s].label, R.vertices[s].level) == (X, 0)
    assert standard_ray(5, 2, 3).n == 40


def test_ray_distance_at_least_level():
    R = standard_ray(5, 2, 3)
    dist = bfs(R, R.special[0])
    assert all(dist.get(v.id, INFINITY) >= v.level for v in R.vertices)


def test_ray_first_layer():
    R = standard_ray(5, 2, 2)
    s = R.special[0]
    X = R.vertices[s].label
    layers = distance_layers(R, s)
    # the product keeps same-level Kneser edges, so level 0 contributes too
    expected = {v.id for v in R.vertices if v.level <= 1 and v.label & X == 0}
    assert layers[1] == expected and len(expected) == 6


def test_distance_layers_petersen_and_isolated():
    assert [len(L) for L in distance_layers(kneser(5, 2), 0)] == [1, 3, 6]
    G = graph_from_edges(3, [(0, 1)])
    assert distance_layers(G, 2) == [{2}]


def test_universal_sizes():
    assert build_universal(5, 2, 6, 1).n == 310
    U7 = build_universal(5, 2, 7, 1)
    assert len(U7.special) == 10
    # bases of distinct rays: adjacent exactly when labels are disjoint
    base = [v for v in U7.vertices if v.level == 3]
    for u, v in itertools.combinations(base, 2):
        if u.ray != v.ray:
            assert U7.adjacent(u.id, v.id) == (u.label & v.label == 0)
    # and each base is joined to the level below it on its own ray
    for v in base:
        for w in U7.vertices:
            if w.ray == v.ray and w.level == 2:
                assert U7.adjacent(v.id, w.id) == (v.label & w.label == 0)


def test_universal_rejects_small_d():
    with pytest.raises(ValueError):
        build_universal(5, 2, 2, 1)


@pytest.mark.parametrize("d", [4, 5, 6, 7])
def test_special_vertices_far_apart(d):
    U = build_universal(5, 2, d, 1)
    closest = INFINITY
    for s in U.special:
        dist = bfs(U, s)
        for t in U.special:
            if t != s:
                closest = min(closest, dist.get(t, INFINITY))
        # the graph is connected, so the bound is attained
        assert len(dist) == U.n
        for w in U.adj[s]:
            assert U.vertices[w].level <= 1 and U.vertices[w].label & U.vertices[s].label == 0
    assert closest == d


def test_universal_each_label_special_n_times():
    U = build_universal(5, 2, 5, 2)
    labels = [U.vertices[s].label for s in U.special]
    assert len(labels) == 20 and all(labels.count(x) == 2 for x in set(labels))


@pytest.mark.parametrize("p,q", [(p, q) for p in range(3, 13) for q in range(1, 6) if 2 * q < p])
def test_odd_girth_formula(p, q):
    if comb(p, q) > 800:
        pytest.skip("large Kneser graph covered by the acceptance suite")
    assert odd_girth(kneser(p, q)) == kneser_odd_girth_formula(p, q) == 2 * -(-q // (p - 2 * q)) + 1


def test_odd_girth_examples():
    assert odd_girth(kneser(5, 2)) == 5
    assert odd_girth(kneser(7, 3)) == 7
    assert odd_girth(kneser(4, 2)) == INFINITY


def test_is_independent_examples():
    G = kneser(5, 2)
    star = [v.id for v in G.vertices if v.label & 1]
    assert is_independent(G, star)
    u, v = next(G.edges())
    assert not is_independent(G, [u, v])
    assert is_independent(G, [])


@pytest.mark.parametrize("p,q,d,expected", [(5, 2, 6, 1), (7, 3, 8, 2), (5, 2, 4, 1)])
def test_layer_independence_examples(p, q, d, expected):
    assert layer_independence_bound(p, q, d) == expected == layer_independence_formula(p, q, d)


def test_enumeration_petersen_counts():
    G = kneser(5, 2)
    all_sets = list(enumerate_independent_sets(G))
    assert len(all_sets) == 76 and frozenset() in all_sets
    assert sorted(all_sets, key=sorted) == sorted(brute_independent_sets(G), key=sorted)
    maximal = list(enumerate_independent_sets(G, EnumerationConstraints(maximal_only=True)))
    assert len(maximal) == 15
    assert sorted(len(S) for S in maximal) == [3] * 10 + [4] * 5


def test_enumeration_required_excludes_neighbours():
    G = kneser(5, 2)
    sets = list(enumerate_independent_sets(G, EnumerationConstraints(required=frozenset({0}))))
    assert sets and all(0 in S and not (S & G.adj[0]) for S in sets)


def test_enumeration_budget():
    with pytest.raises(BudgetExceeded):
        list(enumerate_independent_sets(kneser(5, 2), EnumerationConstraints(budget=10)))


@settings(max_examples=60)
@given(random_graphs, st.data())
def test_enumeration_matches_brute_force(G, data):
    brute = brute_independent_sets(G)
    assert sorted(enumerate_independent_sets(G), key=sorted) == sorted(brute, key=sorted)
    forbidden = frozenset(data.draw(st.sets(st.integers(0, G.n - 1), max_size=2)))
    required = frozenset(data.draw(st.sets(st.integers(0, G.n - 1), max_size=2))) - forbidden
    c = EnumerationConstraints(required=required, forbidden=forbidden, maximal_only=True)
    feasible = [S for S in brute if required <= S and not S & forbidden]
    maximal = [S for S in feasible if not any(S < T for T in feasible)]
    assert sorted(enumerate_independent_sets(G, c), key=sorted) == sorted(maximal, key=sorted)


def test_export_text_is_deterministic():
    R = standard_ray(5, 2, 1)
    text = R.export_text()
    assert text == standard_ray(5, 2, 1).export_text()
    first = text.splitlines()[0]
    assert first.split(" : ")[0].split()[0] == "0"


def test_distances_from_agrees_with_bfs():
    R = standard_ray(5, 2, 2)
    assert distances_from(R, R.special[0]) == bfs(R, R.special[0])
