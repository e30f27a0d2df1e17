from fractions import Fraction as F
from math import sqrt

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracext.colorizer import (FractionalColoring, InapplicableCase, applicability, condition_polynomial,
                               extend_universal, minimal_epsilon, normalize_to_unit, verify_coloring)
from fracext.graphs import complete_graph, kneser
from fracext.measure import CarveError, IntervalSet

I = IntervalSet.interval


@pytest.mark.parametrize("case,k,d,ok", [
    ("D0", F(5, 2), 4, True), ("D0", F(9, 4), 8, True), ("D0", F(5, 2), 8, False), ("D0", F(7, 3), 12, False),
    ("D1", F(5, 2), 5, True), ("D1", F(3), 5, False), ("D1", F(9, 4), 9, True),
    ("D2", F(7, 3), 6, True), ("D2", F(5, 2), 6, False),
    ("D3", F(7, 3), 7, True), ("D3", F(5, 2), 7, False),
    ("D6_HIGH", F(2), 6, True), ("D6_HIGH", F(9, 4), 6, False), ("D6_HIGH", F(5, 2), 6, True),
    ("D7_HIGH", F(5, 2), 7, True), ("D7_HIGH", F(3), 7, False),
    ("D1", F(5, 2), 4, False),
])
def test_applicability(case, k, d, ok):
    assert applicability(case, k, d) is ok


def test_minimal_epsilon_matches_printed_thresholds():
    assert minimal_epsilon("D1", F(5, 2), 5) == F(2, 5)
    assert minimal_epsilon("D1", F(7, 3), 5) == F(3, 7)
    assert minimal_epsilon("D3", F(7, 3), 7) == F(9, 37)
    assert minimal_epsilon("D0", F(5, 2), 4) == F(1, 2)
    assert minimal_epsilon("D7_HIGH", F(5, 2), 7) == F(2, 7)
    assert minimal_epsilon("D2", F(7, 3), 6).decimal(4) == "0.2863"


def test_minimal_epsilon_irrational_root():
    e = minimal_epsilon("D6_HIGH", F(5, 2), 6)
    assert abs(float(e) - (-2.5 + sqrt(6.25 + 4)) / 2) < 1e-12


def test_minimal_epsilon_inapplicable():
    with pytest.raises(InapplicableCase):
        minimal_epsilon("D2", F(5, 2), 6)


@pytest.mark.parametrize("case,d", [("D0", 8), ("D1", 9), ("D2", 10), ("D3", 11)])
def test_condition_polynomial_root_is_minimal_epsilon(case, d):
    k = F(13, 6)
    c = condition_polynomial(case, k, d)
    e = minimal_epsilon(case, k, d)
    lo, hi = e.rational_below(F(1, 10**9)), e.rational_above(F(1, 10**9))
    val = lambda t: sum(ci * t ** i for i, ci in enumerate(c))
    assert val(lo) <= 0 <= val(hi)


@pytest.mark.parametrize("case,p,q,d,eps", [
    ("D1", 5, 2, 5, F(2, 5)), ("D0", 5, 2, 4, F(1, 2)), ("D7_HIGH", 5, 2, 7, F(2, 7)),
    ("D1", 7, 3, 5, F(3, 7)), ("D3", 7, 3, 7, F(9, 37)),
])
def test_tight_layers_reach_measure_one_at_threshold(case, p, q, d, eps):
    G, col, pre = extend_universal(case, p, q, d, 1, eps)
    assert verify_coloring(G, col, pre) == []
    assert min(F(m) for m in col.meta["layer_measures"][1].values()) == 1


@pytest.mark.parametrize("case,p,q,d,eps", [("D1", 5, 2, 5, F(2, 5)), ("D3", 7, 3, 7, F(9, 37))])
def test_below_threshold_raises(case, p, q, d, eps):
    with pytest.raises(CarveError) as info:
        extend_universal(case, p, q, d, 1, eps - F(1, 1000))
    assert info.value.deficit > 0


def test_layer_measures_monotone_in_eps():
    prev = None
    for eps in [F(2, 5), F(9, 20), F(1, 2), F(3, 5), F(7, 10)]:
        _, col, _ = extend_universal("D1", 5, 2, 5, 1, eps)
        ms = {ell: F(m) for ell, m in col.meta["layer_measures"][1].items()}
        if prev is not None:
            assert all(ms[ell] >= prev[ell] for ell in ms)
        prev = ms


def test_extend_universal_with_two_copies():
    G, col, pre = extend_universal("D0", 5, 2, 4, 2, F(1, 2))
    assert len(pre) == 20
    assert verify_coloring(G, col, pre) == []


def test_extend_universal_inapplicable():
    with pytest.raises(InapplicableCase):
        extend_universal("D2", 5, 2, 6, 1, F(1, 2))


def petersen_coloring():
    G = kneser(5, 2)
    # colour a 2-subset {a,b} by the union of the unit cells of its elements, scaled by 1/2
    assign = {}
    for v in G.vertices:
        elems = [i for i in range(5) if v.label >> i & 1]
        assign[v.id] = IntervalSet([(F(i, 2), F(i + 1, 2)) for i in elems])
    return G, FractionalColoring(assign, F(5, 2))


def test_verify_accepts_kneser_coloring():
    G, col = petersen_coloring()
    assert verify_coloring(G, col) == []
    assert verify_coloring(G, col, strict=True) == []


def test_verify_reports_each_fault_kind():
    G, col = petersen_coloring()
    u, v = next(G.edges())
    bad = dict(col.assignment)
    bad[v] = bad[v] | IntervalSet.interval(0, F(1, 10)) | bad[u]
    bad[0] = IntervalSet([(F(12, 5), F(3))])
    del bad[1]
    faults = verify_coloring(G, FractionalColoring(bad, col.span), {2: I(0, 1)})
    kinds = {f.kind for f in faults}
    assert {"overlap", "span", "measure", "missing", "precolor"} <= kinds


def test_strict_vertices_demand_exact_measure():
    G = complete_graph(2)
    col = FractionalColoring({0: I(0, 1), 1: I(1, F(5, 2))}, F(5, 2))
    assert verify_coloring(G, col) == []
    assert [f.vertices for f in verify_coloring(G, col, strict_vertices=[1])] == [(1,)]


def test_normalize_to_unit():
    col = FractionalColoring({0: I(0, F(3, 2)), 1: I(F(3, 2), F(5, 2)), 2: I(0, 2)}, F(5, 2))
    out = normalize_to_unit(col, keep=[2])
    assert out[0] == I(0, 1) and out[1] == col[1] and out[2] == I(0, 2)


@settings(max_examples=15, deadline=None)
@given(st.sampled_from([("D1", 5, 2, 5), ("D0", 5, 2, 4), ("D7_HIGH", 5, 2, 7), ("D6_HIGH", 5, 2, 6),
                        ("D1", 7, 3, 5), ("D2", 7, 3, 6)]),
       st.integers(1, 40))
def test_colorings_valid_above_threshold(cfg, bump):
    case, p, q, d = cfg
    e = minimal_epsilon(case, F(p, q), d)
    eps = e.rational_above(F(1, 10**4)) + F(bump, 200)
    G, col, pre = extend_universal(case, p, q, d, 1, eps)
    assert verify_coloring(G, col, pre) == []
    assert col.span == F(p, q) + eps


@pytest.mark.parametrize("eps", [F(1, 4), F(1, 3)])
def test_d0_layer_measure_identities(eps):
    # d = 8: the base layer has measure one and layers two apart match from layer 2 on
    _, col, _ = extend_universal("D0", 9, 4, 8, 1, eps)
    m = {ell: F(v) for ell, v in col.meta["layer_measures"][1].items()}
    assert m[4] == 1 and m[2] == m[4]
    assert m[1] > 1
