from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracext.measure import (EMPTY, CarveError, CellGrid, IntervalSet, as_fraction, carve, carve_right,
                             deserialize, equipartition, serialize, union_all)

I = IntervalSet.interval


def soup_strategy(max_den=12, max_num=36):
    point = st.builds(F, st.integers(0, max_num), st.integers(1, max_den))
    pair = st.tuples(point, point).map(lambda t: (min(t), max(t)))
    return st.lists(pair, max_size=6)


soups = soup_strategy()
sets = soups.map(IntervalSet)


def test_measure_examples():
    assert IntervalSet([(0, 1), (2, 3)]).measure() == 2
    assert EMPTY.measure() == 0
    assert I(F(1, 3), F(1, 2)).measure() == F(1, 6)


def test_set_algebra_examples():
    assert I(0, 1) & I(F(1, 2), 2) == I(F(1, 2), 1)
    assert I(0, 1) - I(0, 1) == EMPTY
    assert I(0, F(1, 2)) | I(F(1, 2), 1) == I(0, 1)
    assert I(0, F(1, 2)).union(I(F(1, 2), 1)).intervals == ((F(0), F(1)),)


def test_carve_examples():
    S = IntervalSet([(0, 1), (2, 3)])
    assert carve(S, F(3, 2)) == IntervalSet([(0, 1), (2, F(5, 2))])
    assert carve(S, 0) == EMPTY
    assert carve(S, 2) == S


def test_carve_deficit_names_amount():
    with pytest.raises(CarveError) as info:
        carve(I(0, 1), F(3, 2), "demo")
    assert info.value.deficit == F(1, 2)
    assert "demo" in str(info.value)


def test_carve_right_takes_the_tail():
    assert carve_right(I(0, 2), F(1, 2)) == I(F(3, 2), 2)


def test_equipartition_examples():
    assert equipartition(I(0, 1), 2) == [I(0, F(1, 2)), I(F(1, 2), 1)]
    thirds = equipartition(I(0, 1), 3)
    assert [s.measure() for s in thirds] == [F(1, 3)] * 3
    assert equipartition(EMPTY, 4) == [EMPTY] * 4


def test_degenerate_and_reversed_pairs_vanish():
    assert IntervalSet([(1, 1)]) == EMPTY
    assert IntervalSet([(2, 1)]) == EMPTY


def test_floats_are_refused():
    with pytest.raises(TypeError):
        as_fraction(0.1)
    assert as_fraction("0.1") == F(1, 10)
    assert as_fraction("7/3") == F(7, 3)


def test_serialization_format():
    S = IntervalSet([(0, F(1, 2)), (1, F(3, 2))])
    assert serialize(S) == "0:1/2,1:3/2"
    assert deserialize("0:1/2,1:3/2") == S
    assert deserialize("") == EMPTY


@given(soups)
def test_normalization_is_idempotent_and_canonical(soup):
    S = IntervalSet(soup)
    assert IntervalSet(S.intervals) == S
    assert IntervalSet(reversed(soup)) == S
    for (a, b), (c, d) in zip(S.intervals, S.intervals[1:]):
        assert a < b < c < d


@given(sets, sets, sets)
def test_boolean_algebra_laws(A, B, C):
    U = union_all([A, B, C, I(0, 40)])
    assert U - (A | B) == (U - A) & (U - B)
    assert U - (A & B) == (U - A) | (U - B)
    assert (A | B) | C == A | (B | C)
    assert (A & B) & C == A & (B & C)
    assert A & (B | C) == (A & B) | (A & C)
    assert A | (B & C) == (A | B) & (A | C)


@given(sets, sets)
def test_inclusion_exclusion(A, B):
    assert (A | B).measure() + (A & B).measure() == A.measure() + B.measure()
    assert (A - B).measure() + (A & B).measure() == A.measure()


@given(sets, st.fractions(0, 1), st.fractions(0, 1))
def test_carve_is_monotone_and_exact(S, t1, t2):
    m1, m2 = sorted((t1 * S.measure(), t2 * S.measure()))
    c1, c2 = carve(S, m1), carve(S, m2)
    assert c1.measure() == m1 and c2.measure() == m2
    assert c1.issubset(c2) and c2.issubset(S)


@given(sets, st.integers(1, 7))
def test_equipartition_partitions(S, n):
    parts = equipartition(S, n)
    assert union_all(parts) == S
    assert all(p.measure() == S.measure() / n for p in parts)
    for i in range(n):
        for j in range(i + 1, n):
            assert parts[i].isdisjoint(parts[j])


@settings(max_examples=50)
@given(st.lists(sets, min_size=1, max_size=5))
def test_cell_grid_round_trips(family):
    grid = CellGrid(family)
    for S in family:
        m = grid.mask(S)
        assert grid.to_set(m) == S
        assert grid.measure(m) == S.measure()
    if len(family) > 1:
        A, B = family[0], family[1]
        assert grid.to_set(grid.mask(A) & grid.mask(B)) == A & B
