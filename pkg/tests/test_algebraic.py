from fractions import Fraction as F
from math import sqrt

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fracext.algebraic import (AlgebraicNumber, bracket_contains, count_roots, quadratic_positive_root,
                               squarefree)


def test_sqrt2_minus_1():
    x = quadratic_positive_root(1, 2, -1)
    assert abs(float(x) - (sqrt(2) - 1)) < 1e-12
    assert x.decimal(5) == "0.41421"
    assert not x.is_rational


def test_rational_collapse():
    # eps^2 + 3/2 eps - 1 = (eps - 1/2)(eps + 2)
    x = quadratic_positive_root(1, F(3, 2), -1)
    assert x.is_rational and x == F(1, 2)


def test_comparisons_are_exact():
    x = quadratic_positive_root(1, 2, -1)
    assert x < F(41422, 100000) and x > F(41421, 100000)
    assert x == AlgebraicNumber.positive_root([F(-1, 2), 1, F(1, 2)])
    assert x != quadratic_positive_root(1, 1, -1)


def test_bracket_contains():
    x = quadratic_positive_root(2, 5, -2)  # (sqrt(41)-5)/4
    assert bracket_contains(F(35078, 100000), F(35079, 100000), x)
    assert not bracket_contains(F(35079, 100000), F(1, 2), x)
    assert bracket_contains(F(1, 3), F(1, 3), F(1, 3))


def test_bad_isolating_interval():
    with pytest.raises(ValueError):
        AlgebraicNumber([-2, 0, 1], -2, 2)


def test_rational_bounds_straddle():
    x = quadratic_positive_root(1, 1, -1)
    lo, hi = x.rational_below(F(1, 10**8)), x.rational_above(F(1, 10**8))
    assert lo < x < hi and hi - lo <= F(2, 10**8)


def test_squarefree_strips_repeats():
    f = [F(1), F(-2), F(1)]  # (x-1)^2
    assert len(squarefree(f)) == 2
    assert count_roots([F(-2), F(0), F(1)], F(0), F(2)) == 1


@given(st.fractions(F(1, 100), 10), st.fractions(-10, 10), st.fractions(F(-10), F(-1, 100)))
def test_positive_root_satisfies_polynomial(a, b, c):
    x = quadratic_positive_root(a, b, c)
    r = (-float(b) + sqrt(float(b) ** 2 - 4 * float(a) * float(c))) / (2 * float(a))
    assert abs(float(x) - r) < 1e-9
    lo, hi = x.rational_below(F(1, 10**6)), x.rational_above(F(1, 10**6))
    val = lambda t: a * t * t + b * t + c
    assert val(lo) <= 0 <= val(hi)
