"""Upper limits on what any online algorithm can achieve.

``secretary_lower_bound`` finds the earliest position from which an optimal
algorithm can afford to start taking record values without exceeding one
expected selection. ``adversarial_lp_value`` solves the program bounding
success when the adversary also picks the arrival order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

# below this margin from 1 the float harmonic tail is re-checked exactly
_EXACT_MARGIN = 1e-9


@dataclass(frozen=True)
class LowerBoundResult:
    n: int
    i_star: int
    p_miss: float
    success_bound: float


def _tail_at_most_one(n: int, i: int) -> bool:
    return sum((Fraction(1, j) for j in range(i, n + 1)), Fraction(0)) <= 1


def secretary_lower_bound(n: int) -> LowerBoundResult:
    """Smallest ``i`` with ``sum_{j=i}^{n} 1/j <= 1`` and the success bound it
    implies: the best item is missed only when it arrives before ``i``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    # grow the tail from j = n downwards; Kahan-compensated
    total = 0.0
    comp = 0.0
    i = n
    while i >= 1:
        y = 1.0 / i - comp
        s = total + y
        comp = (s - total) - y
        total = s
        if total > 1 + _EXACT_MARGIN or (total > 1 - _EXACT_MARGIN and not _tail_at_most_one(n, i)):
            break
        i -= 1
    i_star = i + 1
    missed = i_star - 1
    return LowerBoundResult(n, i_star, missed / n, (n - missed) / n)


def adversarial_lp_value(n: int) -> float:
    """Optimum of max sum_l p_l l/n s.t. sum_l l p_l <= 1, p in [0,1]^n.

    Substituting q_l = l p_l turns the objective into sum q_l / n under
    sum q_l <= 1, so the optimum is 1/n.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    return 1.0 / n


def box_lp_vertex_max(objective: Sequence[Fraction], costs: Sequence[Fraction], budget: Fraction) -> Fraction:
    """Maximize ``objective . p`` over ``costs . p <= budget``, ``p in [0,1]^n``
    by enumerating vertices. Costs must be positive.

    A vertex has every coordinate at 0 or 1 except possibly one, which then
    absorbs the remaining budget exactly. Subsets are grown depth-first and
    pruned once the budget is exceeded.
    """
    n = len(costs)
    if any(c <= 0 for c in costs):
        raise ValueError("costs must be positive")
    best = Fraction(0)

    def visit(start: int, used: Fraction, gain: Fraction, members: frozenset):
        nonlocal best
        best = max(best, gain)
        slack = budget - used
        for j in range(n):
            if j in members:
                continue
            frac = slack / costs[j]
            if 0 < frac < 1:
                best = max(best, gain + frac * objective[j])
        for j in range(start, n):
            if costs[j] <= slack:
                visit(j + 1, used + costs[j], gain + objective[j], members | {j})

    visit(0, Fraction(0), Fraction(0), frozenset())
    return best


def adversarial_lp_vertex_value(n: int) -> Fraction:
    """The same program as :func:`adversarial_lp_value`, solved by vertex
    enumeration in exact arithmetic."""
    if n < 1:
        raise ValueError("n must be >= 1")
    objective = [Fraction(l, n) for l in range(1, n + 1)]
    costs = [Fraction(l) for l in range(1, n + 1)]
    return box_lp_vertex_max(objective, costs, Fraction(1))
