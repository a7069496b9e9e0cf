import math
import warnings
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from expknap.core import EmptyInstanceError
from expknap.secretary import (
    CountBoundWarning,
    ThresholdConfig,
    classical_secretary_run,
    default_threshold,
    expected_count_bound,
    harmonic_tail,
    ksec_t_threshold_run,
    t_threshold_run,
)

from conftest import all_permutations, record_positions

value_lists = st.lists(st.integers(0, 20).map(float), min_size=1, max_size=25)


def test_threshold_examples(backend):
    assert t_threshold_run([1, 5, 3, 9], 1).positions == (2, 4)
    assert t_threshold_run([1, 5, 3, 9], 4).positions == ()
    assert t_threshold_run([3, 1, 4, 2], 0).positions == (1, 3)


def test_threshold_outcome_totals(backend):
    out = t_threshold_run([1, 5, 3, 9], 1, ids=[10, 11, 12, 13])
    assert out.selected == ((2, 11), (4, 13))
    assert out.total_value == 14 and out.total_weight == 2 and out.count == 2


def test_ties_lose(backend):
    assert t_threshold_run([5, 5, 5], 1).positions == ()


def test_empty_input_rejected(backend):
    for run in (lambda: t_threshold_run([], 0), lambda: classical_secretary_run([], 0),
                lambda: ksec_t_threshold_run([], 1, 0)):
        with pytest.raises(EmptyInstanceError):
            run()


def test_t_out_of_range():
    with pytest.raises(ValueError):
        t_threshold_run([1, 2], 3)


@settings(max_examples=200)
@given(value_lists, st.data())
def test_threshold_set_characterization(backend, values, data):
    t = data.draw(st.integers(0, len(values)))
    assert t_threshold_run(values, t).positions == record_positions(values, t)


def test_classical_examples(backend):
    assert classical_secretary_run([1, 5, 3, 9], 1).positions == (2,)
    assert classical_secretary_run([1, 5, 3, 9], 4).positions == ()
    assert classical_secretary_run([9, 1, 2, 3], 1).positions == ()


@settings(max_examples=200)
@given(value_lists, st.data())
def test_classical_is_first_threshold_selection(backend, values, data):
    t = data.draw(st.integers(0, len(values)))
    full = t_threshold_run(values, t).positions
    assert classical_secretary_run(values, t).positions == full[:1]


def test_ksec_examples(backend):
    assert ksec_t_threshold_run([5, 6, 1, 7, 2], 2, 2).positions == (4,)
    assert ksec_t_threshold_run([4, 7, 1, 9], 2, 1).positions == (2, 4)


def ksec_reference(values, k, t):
    """Literal sorted-list version of the k-item rule, with -inf padding."""
    ref = sorted(values[:t], reverse=True)[:k]
    picked = []
    for p in range(t, len(values)):
        rk = ref[-1] if len(ref) == k else -math.inf
        if values[p] > rk:
            picked.append(p + 1)
            if len(ref) == k:
                ref.pop()
            ref.append(values[p])
            ref.sort(reverse=True)
    return tuple(picked)


@settings(max_examples=200)
@given(value_lists, st.integers(1, 6), st.data())
def test_ksec_matches_literal_rule(backend, values, k, data):
    t = data.draw(st.integers(0, len(values)))
    assert ksec_t_threshold_run(values, k, t).positions == ksec_reference(values, k, t)


@settings(max_examples=100)
@given(value_lists, st.data())
def test_ksec_k1_equals_threshold(backend, values, data):
    t = data.draw(st.integers(0, len(values)))
    assert ksec_t_threshold_run(values, 1, t).positions == t_threshold_run(values, t).positions


def test_expected_count_examples():
    assert expected_count_bound(4, 2, 1) == pytest.approx(1 / 3 + 1 / 4, abs=1e-15)
    exact = sum(Fraction(1, l) for l in range(4, 11))
    assert expected_count_bound(10, 3, 1) == pytest.approx(float(exact), abs=1e-15)
    assert expected_count_bound(10, 3, 1) == pytest.approx(1.0956349, abs=1e-7)
    assert expected_count_bound(10, 3, 4) == pytest.approx(4 * float(exact), abs=1e-14)


def test_expected_count_t_zero_warns():
    with pytest.warns(CountBoundWarning):
        val = expected_count_bound(5, 0)
    assert val == pytest.approx(float(harmonic_tail(5, 0)))


@pytest.mark.parametrize("n", [3, 10, 100, 1000, 10_000])
def test_expected_count_below_log_bound(n):
    t = default_threshold(n)
    assert expected_count_bound(n, t) <= math.log(n / t) + 1e-12


def test_expected_count_at_most_one_when_n_over_e_nearly_integral():
    # with t = floor(n/e) the tail stays <= 1 once n/e is close to an integer
    hits = [n for n in range(3, 2000) if n / math.e - default_threshold(n) < 0.3]
    assert len(hits) > 100
    for n in hits:
        assert expected_count_bound(n, default_threshold(n)) <= 1.0


@pytest.mark.parametrize("n,t", [(4, 1), (5, 2), (6, 2), (7, 3)])
def test_exhaustive_counts_and_success(backend, n, t):
    # over all n! orders: success 1 - t/n and mean count H_n - H_t exactly
    perms = all_permutations(n)
    values = np.arange(1.0, n + 1)
    total = successes = 0
    per_pos = np.zeros(n, dtype=int)
    for perm in perms:
        out = t_threshold_run(values[perm], t)
        total += out.count
        successes += (perm[np.array(out.positions, dtype=int) - 1] == n - 1).any() if out.count else 0
        for p in out.positions:
            per_pos[p - 1] += 1
    assert Fraction(successes, len(perms)) == 1 - Fraction(t, n)
    assert Fraction(total, len(perms)) == harmonic_tail(n, t)
    for l in range(t + 1, n + 1):
        assert Fraction(int(per_pos[l - 1]), len(perms)) == Fraction(1, l)


def test_threshold_config():
    assert ThresholdConfig(1000).t == 367
    with pytest.raises(ValueError):
        ThresholdConfig(5, t=6)
    with pytest.raises(ValueError):
        ThresholdConfig(5, k=0)
