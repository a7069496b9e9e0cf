"""Offline knapsack: the fractional LP greedy, the augmented-capacity prefix
greedy OFF, and an exact 0/1 oracle."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import EPS, ExpknapError, Instance

MAX_DP_CELLS = 50_000_000
EXHAUSTIVE_MAX_N = 20


class OracleCapacityError(ExpknapError, ValueError):
    """The quantized DP table would be too large."""


@dataclass(frozen=True)
class FractionalSolution:
    x: tuple[float, ...]
    value: float
    capacity_used: float
    capacity: float

    @property
    def fractional_ids(self) -> tuple[int, ...]:
        return tuple(i for i, xi in enumerate(self.x) if 0 < xi < 1)


def fractional_opt(instance: Instance, C: float) -> FractionalSolution:
    """Optimum of the LP relaxation at capacity ``C``.

    Fills items in ascending buck-per-bang order (ties by id) and splits at
    most one item to use up the residual capacity exactly.
    """
    if not C > 0:
        raise ValueError("capacity must be positive")
    x = [0.0] * instance.n
    remaining = C
    for i in instance.bpb_order.tolist():
        w = instance.items[i].weight
        if w <= remaining:
            x[i] = 1.0
            remaining -= w
        else:
            if remaining > 0:
                x[i] = remaining / w
            break
    value = math.fsum(it.value * xi for it, xi in zip(instance.items, x))
    used = math.fsum(it.weight * xi for it, xi in zip(instance.items, x))
    return FractionalSolution(tuple(x), value, used, C)


def scaling_ratio_check(instance: Instance, C1: float, C2: float) -> tuple[float, float, bool]:
    """Return ``(v_C1, v_C2, v_C2 <= (C2/C1) v_C1)`` for the fractional optima."""
    if not 0 < C1 <= C2:
        raise ValueError("need 0 < C1 <= C2")
    v1 = fractional_opt(instance, C1).value
    v2 = fractional_opt(instance, C2).value
    return v1, v2, v2 <= (C2 / C1) * v1 + EPS


@dataclass(frozen=True)
class OffResult:
    """Output of OFF.

    ``selected`` lists ids in buck-per-bang order. ``b_star`` is the largest
    selected buck-per-bang, ``inf`` when every item fits, and ``0.0`` when
    nothing fits (``empty`` is then true).
    """

    selected: tuple[int, ...]
    b_star: float
    total_weight: float
    total_value: float
    capacity: float
    empty: bool = False

    @property
    def k(self) -> int:
        return len(self.selected)

    @property
    def full(self) -> bool:
        return math.isinf(self.b_star)


def off_prefix_length(weights_in_order: np.ndarray, C: float) -> int:
    """Length of the longest prefix whose running weight stays within ``C``.

    Stops at the first violating item rather than skipping it.
    """
    if weights_in_order.size == 0:
        return 0
    cum = np.cumsum(weights_in_order)
    return int(np.searchsorted(cum, C + EPS, side="right"))


def off_greedy(instance: Instance, C: float) -> OffResult:
    if not C > 0:
        raise ValueError("capacity must be positive")
    order = instance.bpb_order
    k = off_prefix_length(instance.weights[order], C)
    chosen = order[:k]
    sel = tuple(int(i) for i in chosen)
    weight = math.fsum(instance.weights[chosen])
    value = math.fsum(instance.values[chosen])
    if k == instance.n:
        b_star = math.inf
    elif k == 0:
        return OffResult((), 0.0, 0.0, 0.0, C, empty=True)
    else:
        b_star = float(instance.bpb[chosen[-1]])
    return OffResult(sel, b_star, weight, value, C)


def off_approximation_check(instance: Instance, C: float) -> tuple[float, float, bool]:
    """Return ``(v(OFF at C), v_1, v(OFF) >= (C-1) v_1)``; requires 1 < C <= 2."""
    if not 1 < C <= 2:
        raise ValueError(f"augmented capacity must lie in (1, 2], got {C}")
    off = off_greedy(instance, C).total_value
    v1 = fractional_opt(instance, 1.0).value
    return off, v1, off >= (C - 1) * v1 - EPS


def _exhaustive_opt(instance: Instance, C: float) -> float:
    # subset sums by doubling: entry m covers the subset whose bits are set in m
    sw = np.zeros(1)
    sv = np.zeros(1)
    for v, w in zip(instance.values.tolist(), instance.weights.tolist()):
        sw = np.concatenate((sw, sw + w))
        sv = np.concatenate((sv, sv + v))
    return float(sv[sw <= C + EPS].max())


def integral_opt(instance: Instance, C: float, resolution: int | None = None) -> float:
    """Best 0/1 knapsack value at capacity ``C``.

    Without ``resolution`` and with at most 20 items, every subset is tried.
    Otherwise weights are rounded up to multiples of ``1/resolution`` (1000 by
    default) and a DP runs over the grid; rounding up means the result never
    exceeds the true optimum.
    """
    if not C >= 0:
        raise ValueError("capacity must be non-negative")
    if instance.n == 0:
        return 0.0
    if resolution is None:
        if instance.n <= EXHAUSTIVE_MAX_N:
            return _exhaustive_opt(instance, C)
        resolution = 1000
    if resolution < 1:
        raise ValueError("resolution must be >= 1")
    cap = math.floor(C * resolution + EPS)
    if (cap + 1) * instance.n > MAX_DP_CELLS:
        raise OracleCapacityError(
            f"DP table of {instance.n} x {cap + 1} cells exceeds the limit of {MAX_DP_CELLS}"
        )
    qw = np.ceil(instance.weights * resolution - EPS).astype(np.int64)
    dp = np.zeros(cap + 1)
    for v, w in zip(instance.values.tolist(), qw.tolist()):
        if w > cap:
            continue
        cand = dp[: cap + 1 - w] + v
        np.maximum(dp[w:], cand, out=dp[w:])
    return float(dp[cap])
