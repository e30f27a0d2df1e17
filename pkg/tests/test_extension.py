from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracext.lp.extension import (build_extension_instance, class_masses, get_model, minimal_extension_epsilon,
                                  solve_extension, solve_extension_exact)


def test_class_masses_even_distance():
    m = class_masses(5, 2, 6, F(1, 2))
    assert m[("d", "star")] == F(1, 6) and m[("e", "star")] == F(1, 3)
    assert m[("d", "empty")] == F(1, 6) and m[("e", "empty")] == F(1, 3)


def test_class_masses_one_mod_four():
    m = class_masses(5, 2, 5, F(2, 5))
    assert m[("d", "star")] == F(1, 5) and m[("e", "empty")] == F(2, 5)
    assert m[("d", "empty")] == 0


def test_class_masses_three_mod_four():
    m = class_masses(7, 3, 7, F(1, 4))
    assert m[("d", "star")] == F(3, 28) and m[("d", "empty")] == F(1, 4) and m[("e", "empty")] == 0


@pytest.mark.parametrize("p,q,d", [(5, 2, 4), (5, 2, 5), (5, 2, 6), (5, 2, 7), (7, 3, 5), (6, 2, 8)])
def test_instance_masses_total_k_plus_eps(p, q, d):
    inst = build_extension_instance(p, q, d, F(1, 3))
    assert sum(c.mass for c in inst.classes) == F(p, q) + F(1, 3)
    assert len(inst.classes) == 2 * (p + 1)
    assert inst.ray.n == (d // 2 + 1) * len([v for v in inst.ray.vertices if v.level == 0])


def test_instance_rejects_bad_parameters():
    with pytest.raises(ValueError):
        build_extension_instance(5, 2, 3, F(1, 2))
    with pytest.raises(ValueError):
        build_extension_instance(5, 2, 5, F(0))
    with pytest.raises(ValueError):
        build_extension_instance(5, 2, 7, F(3, 2))


@pytest.mark.parametrize("p,q,d,eps,optimum,ok", [
    (5, 2, 5, F(2, 5), F(29, 10), True),
    (5, 2, 5, F(3, 10), F(29, 10), False),
    (5, 2, 4, F(1, 2), F(3), True),
    (5, 2, 4, F(2, 5), F(173, 58), False),
    (7, 3, 7, F(9, 37), F(286, 111), True),
    (7, 3, 7, F(1, 5), F(272, 105), False),
])
def test_solve_extension_examples(p, q, d, eps, optimum, ok):
    sol = solve_extension(build_extension_instance(p, q, d, eps))
    assert (sol.optimum, sol.extendable) == (optimum, ok)
    assert sol.optimum >= F(p, q) + eps


@pytest.mark.parametrize("d", [4, 5])
def test_orbit_reduction_preserves_optimum(d):
    for eps in [F(2, 5), F(1, 2)]:
        a = solve_extension_exact(get_model(5, 2, d, True), eps).optimum
        b = solve_extension_exact(get_model(5, 2, d, False), eps).optimum
        assert a == b


def test_threshold_bracket_float_and_exact_probes_agree():
    fast = minimal_extension_epsilon(5, 2, 5)
    slow = minimal_extension_epsilon(5, 2, 5, tol=F(1, 1000), exact_probes=True)
    for b in (fast, slow):
        assert b.lo < F(2, 5) <= b.hi
        assert b.hi_solution.extendable and not b.lo_solution.extendable
    assert fast.hi - fast.lo <= F(1, 10**6)


@settings(max_examples=12, deadline=None)
@given(st.sampled_from([(5, 2, 4), (5, 2, 5), (5, 2, 6), (7, 3, 5)]),
       st.fractions(F(1, 20), F(19, 20), max_denominator=40))
def test_optimum_at_least_target_and_monotone(cfg, eps):
    p, q, d = cfg
    model = get_model(p, q, d)
    sol = solve_extension_exact(model, eps)
    assert sol.optimum >= F(p, q) + eps
    if sol.extendable:
        assert solve_extension_exact(model, min(eps + F(1, 10), F(1))).extendable
