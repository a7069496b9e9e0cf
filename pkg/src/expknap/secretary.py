"""Unit-weight selection: t-Threshold, its k-item variant, and the classical
stop-at-first baseline.

All run functions take item values in arrival order. Comparisons are strict,
so an arrival tying the current reference value is rejected.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import kernels
from .core import EmptyInstanceError, RunOutcome


class CountBoundWarning(UserWarning):
    """The ``<= k`` expected-count guarantee does not cover this threshold."""


def default_threshold(n: int) -> int:
    """floor(n/e), the observation length used throughout."""
    return math.floor(n / math.e)


@dataclass(frozen=True)
class ThresholdConfig:
    n: int
    t: int | None = None
    k: int = 1

    def __post_init__(self):
        if self.t is None:
            object.__setattr__(self, "t", default_threshold(self.n))
        if not 0 <= self.t <= self.n:
            raise ValueError(f"need 0 <= t <= n, got t={self.t}, n={self.n}")
        if self.k < 1:
            raise ValueError("k must be >= 1")


def _prepare(values, t):
    vals = np.ascontiguousarray(values, dtype=np.float64)
    if vals.ndim != 1 or vals.size == 0:
        raise EmptyInstanceError("no items to select from")
    if not 0 <= t <= vals.size:
        raise ValueError(f"need 0 <= t <= n, got t={t}, n={vals.size}")
    return vals


def _outcome(vals, out, count, ids) -> RunOutcome:
    steps = out[:count]
    if ids is None:
        sel_ids = steps
    else:
        sel_ids = np.asarray(ids)[steps]
    picked = vals[steps]
    return RunOutcome.build(steps, sel_ids, picked, np.ones(count))


def t_threshold_run(values: Sequence[float], t: int, ids: Sequence[int] | None = None) -> RunOutcome:
    """Observe the first ``t`` arrivals, then take every arrival that beats the
    best value seen so far.

    ``ids`` maps arrival steps to item ids; by default the id is the 0-based
    arrival step. Each selected item has unit weight.
    """
    vals = _prepare(values, t)
    out = np.empty(vals.size, dtype=np.intp)
    c = kernels.threshold_select(vals, t, out)
    return _outcome(vals, out, c, ids)


def classical_secretary_run(values: Sequence[float], t: int, ids: Sequence[int] | None = None) -> RunOutcome:
    """Hard-capacity baseline: stop at the first arrival after ``t`` that beats
    everything before it."""
    vals = _prepare(values, t)
    out = np.empty(1, dtype=np.intp)
    c = kernels.classical_select(vals, t, out)
    return _outcome(vals, out, c, ids)


def ksec_t_threshold_run(values: Sequence[float], k: int, t: int, ids: Sequence[int] | None = None) -> RunOutcome:
    """k-item t-Threshold.

    The reference set starts as the best ``k`` of the first ``t`` values. An
    arrival is taken when it beats the smallest reference value, and then
    replaces it. While the reference set holds fewer than ``k`` values every
    arrival is taken and added.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    vals = _prepare(values, t)
    out = np.empty(vals.size, dtype=np.intp)
    c = kernels.ksec_select(vals, k, t, out)
    return _outcome(vals, out, c, ids)


def harmonic_tail(n: int, t: int) -> Fraction:
    """Exact sum of 1/l for l = t+1..n."""
    return sum((Fraction(1, l) for l in range(t + 1, n + 1)), Fraction(0))


def expected_count_bound(n: int, t: int, k: int = 1) -> float:
    """Expected number of selections, ``k * sum_{l=t+1}^{n} 1/l``.

    For ``t = 0`` the full harmonic sum is returned and a
    :class:`CountBoundWarning` is issued, since the count then exceeds ``k``
    for every ``n >= 2``.
    """
    if n < 1 or not 0 <= t <= n:
        raise ValueError(f"need n >= 1 and 0 <= t <= n, got n={n}, t={t}")
    if t == 0:
        warnings.warn(
            "t = 0: expected count is the full harmonic number; the <= k guarantee does not apply",
            CountBoundWarning,
            stacklevel=2,
        )
    return k * math.fsum(1.0 / l for l in range(t + 1, n + 1))
