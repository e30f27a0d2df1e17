from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from fracext.lp.simplex import (DualCheckError, IncrementalLP, LinearProgramInstance, SimplexResult, check_duality,
                                simplex_solve)


def lp_from(c, rows, maximize=False):
    lp = LinearProgramInstance()
    names = [lp.add_variable(f"x{i}") for i in range(len(c))]
    for coeffs, sense, rhs in rows:
        lp.add_constraint(dict(zip(names, coeffs)), sense, rhs)
    lp.set_objective(dict(zip(names, c)), maximize)
    return lp


def test_min_sum_with_equality():
    res = simplex_solve(lp_from([1, 1], [([1, 1], "=", 3)]))
    assert res.status == "optimal" and res.optimum == 3
    assert sum(res.primal.values()) == 3


def test_maximize_single_bound():
    res = simplex_solve(lp_from([1], [([3], "<=", 7)], maximize=True))
    assert res.optimum == F(7, 3) and res.primal["x0"] == F(7, 3)
    assert res.dual["r1"] == F(1, 3)


def test_infeasible_and_unbounded():
    assert simplex_solve(lp_from([1], [([1], "<=", 1), ([1], ">=", 2)])).status == "infeasible"
    assert simplex_solve(lp_from([1], [([1], ">=", 1)], maximize=True)).status == "unbounded"


def test_negative_rhs_rows_are_flipped():
    res = simplex_solve(lp_from([1, 2], [([-1, -1], "<=", -4), ([1, -1], "=", 0)]))
    assert res.optimum == 6


def test_undeclared_variable_rejected():
    lp = LinearProgramInstance()
    lp.add_variable("x")
    lp.add_constraint({"y": 1}, ">=", 1)
    with pytest.raises(ValueError):
        simplex_solve(lp)
    with pytest.raises(ValueError):
        lp.add_variable("x")


def test_duality_check_catches_a_wrong_certificate():
    lp = lp_from([1, 1], [([1, 1], ">=", 2)])
    res = simplex_solve(lp)
    check_duality(lp, res)
    with pytest.raises(DualCheckError):
        check_duality(lp, SimplexResult("optimal", res.optimum, res.primal, {"r1": F(1, 2)}))


def test_lp_text_scales_rows_to_integers():
    lp = lp_from([F(1, 2), 1], [([F(1, 3), F(2, 3)], ">=", 1)])
    text = lp.to_lp_text()
    assert "objective multiplied by 2" in text
    assert " r1: 1 x0 + 2 x1 >= 3" in text
    assert text.endswith("End\n")


def test_degenerate_cycling_example():
    # Beale's example cycles under the textbook largest-coefficient rule
    c = [F(-3, 4), 150, F(-1, 50), 6]
    rows = [([F(1, 4), -60, F(-1, 25), 9], "<=", 0), ([F(1, 2), -90, F(-1, 50), 3], "<=", 0),
            ([0, 0, 1, 0], "<=", 1)]
    res = simplex_solve(lp_from(c, rows))
    assert res.optimum == F(-1, 20)


small = st.integers(-4, 4)


@st.composite
def random_lps(draw):
    n = draw(st.integers(1, 4))
    m = draw(st.integers(1, 4))
    c = [draw(small) for _ in range(n)]
    rows = []
    for _ in range(m):
        rows.append(([draw(small) for _ in range(n)], draw(st.sampled_from(["<=", ">=", "="])), draw(small)))
    # a box keeps maximisation bounded most of the time without hiding unboundedness entirely
    if draw(st.booleans()):
        rows.append(([1] * n, "<=", draw(st.integers(0, 6))))
    return c, rows, draw(st.booleans())


def scipy_solve(c, rows, maximize):
    ub, bub, eq, beq = [], [], [], []
    for coeffs, sense, rhs in rows:
        if sense == "<=":
            ub.append(coeffs); bub.append(rhs)
        elif sense == ">=":
            ub.append([-a for a in coeffs]); bub.append(-rhs)
        else:
            eq.append(coeffs); beq.append(rhs)
    sign = -1 if maximize else 1
    r = linprog(sign * np.array(c, float), A_ub=ub or None, b_ub=bub or None, A_eq=eq or None,
                b_eq=beq or None, bounds=[(0, None)] * len(c), method="highs")
    return {0: "optimal", 2: "infeasible", 3: "unbounded"}.get(r.status), (sign * r.fun if r.status == 0 else None)


@settings(max_examples=150, deadline=None)
@given(random_lps())
def test_agrees_with_highs(spec):
    c, rows, maximize = spec
    lp = lp_from(c, rows, maximize)
    res = simplex_solve(lp)
    status, value = scipy_solve(c, rows, maximize)
    if status == "unbounded":
        assert res.status in ("unbounded", "infeasible")  # HiGHS may not separate the two
    else:
        assert res.status == status
    if status == "optimal":
        assert abs(float(res.optimum) - value) < 1e-7


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 5), st.lists(st.lists(st.integers(0, 3), min_size=5, max_size=5), min_size=2, max_size=6))
def test_incremental_columns_match_fresh_solve(m, cols):
    # covering LP: min sum x  s.t.  A x >= 1, with columns appended one at a time
    base = LinearProgramInstance()
    base.add_variable("s")
    for r in range(m):
        base.add_constraint({"s": 1}, ">=", 1, name=f"row{r}")
    base.set_objective({"s": 3})
    inc = IncrementalLP(base)
    inc.solve()
    for j, col in enumerate(cols):
        inc.add_column(f"y{j}", {f"row{r}": col[r] for r in range(m)}, 1)
        got = inc.solve()
        fresh = LinearProgramInstance()
        fresh.add_variable("s")
        for i in range(j + 1):
            fresh.add_variable(f"y{i}")
        for r in range(m):
            coeffs = {"s": 1, **{f"y{i}": cols[i][r] for i in range(j + 1)}}
            fresh.add_constraint(coeffs, ">=", 1, name=f"row{r}")
        fresh.set_objective({"s": 3, **{f"y{i}": 1 for i in range(j + 1)}})
        assert got.optimum == simplex_solve(fresh).optimum
