import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from expknap.core import Instance
from expknap.harness import AlgorithmSpec, run_trials
from expknap.lowerbound import (
    adversarial_lp_value,
    adversarial_lp_vertex_value,
    box_lp_vertex_max,
    secretary_lower_bound,
)


def exact_i_star(n):
    return min(i for i in range(1, n + 1) if sum(Fraction(1, j) for j in range(i, n + 1)) <= 1)


def test_n10():
    r = secretary_lower_bound(10)
    assert (r.i_star, r.success_bound) == (5, 0.6)
    assert r.p_miss == pytest.approx(0.4)


def test_n1():
    r = secretary_lower_bound(1)
    assert (r.i_star, r.p_miss, r.success_bound) == (1, 0.0, 1.0)


@pytest.mark.parametrize("n", list(range(1, 60)) + [100, 257, 1000])
def test_matches_exact_scan(n):
    assert secretary_lower_bound(n).i_star == exact_i_star(n)


@pytest.mark.parametrize("n", [2, 10, 37, 500])
def test_feasibility_boundary(n):
    i = secretary_lower_bound(n).i_star
    assert sum(Fraction(1, j) for j in range(i, n + 1)) <= 1
    if i > 1:
        assert sum(Fraction(1, j) for j in range(i - 1, n + 1)) > 1


def test_large_n():
    r = secretary_lower_bound(10**6)
    assert 0.6311 <= r.success_bound <= 0.6331


@pytest.mark.parametrize("n", [3, 10, 100, 1000, 10**5])
def test_approaches_one_minus_inv_e(n):
    r = secretary_lower_bound(n)
    assert abs(r.success_bound - (1 - 1 / math.e)) <= 2 / r.i_star


def test_bad_n():
    with pytest.raises(ValueError):
        secretary_lower_bound(0)
    with pytest.raises(ValueError):
        adversarial_lp_value(0)


@pytest.mark.parametrize("n", [4, 6, 7, 8])
def test_threshold_rule_attains_bound(n):
    # the best item is found exactly when it arrives at or after i*
    r = secretary_lower_bound(n)
    stats = run_trials(Instance.ranks(n), AlgorithmSpec("secretary", t=r.i_star - 1), exhaustive=True)
    assert stats.exact_success_rate == Fraction(n - r.i_star + 1, n)
    assert float(stats.exact_success_rate) == r.success_bound


@pytest.mark.parametrize("n", range(1, 51))
def test_adversarial_value_matches_vertices(n):
    assert adversarial_lp_value(n) == 1 / n
    assert adversarial_lp_vertex_value(n) == Fraction(1, n)


@pytest.mark.parametrize("n", [1, 5, 20, 50])
def test_adversarial_value_matches_lp_solver(n):
    l = np.arange(1, n + 1)
    res = linprog(-l / n, A_ub=[l], b_ub=[1], bounds=[(0, 1)] * n, method="highs")
    assert -res.fun == pytest.approx(adversarial_lp_value(n), abs=1e-9)


@settings(max_examples=200)
@given(st.lists(st.floats(0, 1), min_size=7, max_size=7))
def test_random_feasible_points_bounded(p):
    l = np.arange(1, 8)
    scale = min(1.0, 1.0 / max(float(l @ p), 1e-300))
    q = np.asarray(p) * scale
    assert float(q @ l) / 7 <= 1 / 7 + 1e-6


@settings(max_examples=100)
@given(st.lists(st.tuples(st.integers(0, 9), st.integers(1, 9)), min_size=1, max_size=7), st.integers(1, 20))
def test_vertex_enumeration_matches_lp_solver(pairs, budget):
    obj = [Fraction(a) for a, _ in pairs]
    costs = [Fraction(c) for _, c in pairs]
    res = linprog([-a for a, _ in pairs], A_ub=[[c for _, c in pairs]], b_ub=[budget],
                  bounds=[(0, 1)] * len(pairs), method="highs")
    assert float(box_lp_vertex_max(obj, costs, Fraction(budget))) == pytest.approx(-res.fun, abs=1e-9)


def test_vertex_rejects_nonpositive_cost():
    with pytest.raises(ValueError):
        box_lp_vertex_max([Fraction(1)], [Fraction(0)], Fraction(1))
