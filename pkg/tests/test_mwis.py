import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracext.graphs import BudgetExceeded, kneser
from fracext.lp.mwis import (independent_set_above, max_weight_independent_set, milp_candidate, mwis_bitset,
                             scale_weights)


def brute_mwis(adj, w):
    n = len(adj)
    best = F(0)
    for r in range(n + 1):
        for S in itertools.combinations(range(n), r):
            if all(not adj[u] >> v & 1 for u, v in itertools.combinations(S, 2)):
                best = max(best, sum((w[v] for v in S), F(0)))
    return best


@st.composite
def weighted_graphs(draw):
    n = draw(st.integers(1, 10))
    adj = [0] * n
    for u, v in draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=25)):
        if u != v:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
    w = [F(draw(st.integers(-2, 12)), draw(st.integers(1, 6))) for _ in range(n)]
    return adj, w


def petersen_adj():
    G = kneser(5, 2)
    return [sum(1 << u for u in G.adj[v]) for v in range(G.n)]


def test_petersen_independence_number():
    adj = petersen_adj()
    best, S = max_weight_independent_set(adj, [1] * 10)
    assert best == 4 and len(S) == 4


def test_scale_weights():
    assert scale_weights([F(1, 2), F(1, 3)]) == ([3, 2], 6)


def test_budget_is_enforced():
    with pytest.raises(BudgetExceeded):
        mwis_bitset(petersen_adj(), [1] * 10, budget=2)


def test_milp_candidate_is_independent():
    adj = petersen_adj()
    mask = milp_candidate(adj, [1.0] * 10)
    assert bin(mask).count("1") == 4
    assert all(not adj[v] & mask for v in range(10) if mask >> v & 1)


def test_threshold_search():
    adj = petersen_adj()
    hit = independent_set_above(adj, [F(1, 3)] * 10, F(1))
    assert hit is not None and hit[0] == F(4, 3)
    assert independent_set_above(adj, [F(1, 4)] * 10, F(1)) is None


@settings(max_examples=120, deadline=None)
@given(weighted_graphs())
def test_mwis_matches_brute_force(g):
    adj, w = g
    best, S = max_weight_independent_set(adj, w)
    assert best == brute_mwis(adj, w)
    assert all(not adj[u] >> v & 1 for u, v in itertools.combinations(S, 2))
    assert sum((w[v] for v in S), F(0)) == best


@settings(max_examples=80, deadline=None)
@given(weighted_graphs(), st.fractions(0, 5))
def test_threshold_search_is_exact(g, t):
    adj, w = g
    hit = independent_set_above(adj, w, t, use_milp=False)
    if brute_mwis(adj, w) > t:
        assert hit is not None and hit[0] > t
    else:
        assert hit is None
