"""Online knapsack: AUG-ON (sample then price against a rolling reference set)
and ON (AUG-ON behind a coin flip so the budget holds in expectation)."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import kernels
from .core import (
    EPS,
    ArrivalOrder,
    CapacityViolation,
    ExpknapError,
    Instance,
    Item,
    RunOutcome,
    SeedLike,
    make_rng,
    trial_seed,
)
from .knapsack_offline import off_prefix_length
from .secretary import default_threshold

EMPTY_REFERENCE = "empty_reference"
EMPTY_DECISION = "empty_decision_phase"
INACTIVE = "inactive"


class DegenerateGeneratorError(ExpknapError, ValueError):
    pass


class Origin(enum.Enum):
    OFFLINE = 0
    DECISION = 1


@dataclass(frozen=True)
class ReferenceEntry:
    item: Item
    origin: Origin

    @property
    def key(self) -> tuple[float, int]:
        return (self.item.bpb, self.item.id)


def _check_capacity(C: float) -> None:
    if not 1 < C <= 2:
        raise ValueError(f"augmented capacity must lie in (1, 2], got {C}")


def _reference_ids(instance: Instance, prefix: np.ndarray, C: float) -> np.ndarray:
    """OFF on the observed prefix: ids in ascending (b, id) order."""
    prefix = np.asarray(prefix, dtype=np.intp)
    ordered = prefix[np.lexsort((prefix, instance.bpb[prefix]))]
    k = off_prefix_length(instance.weights[ordered], C)
    return ordered[:k]


def aug_on_steps(instance: Instance, perm: np.ndarray, C: float, t: int, out: np.ndarray) -> tuple[int, str | None]:
    """Run AUG-ON's decision phase through the kernel.

    Writes selected 0-based arrival steps to ``out``; returns their count and
    a degeneracy flag.
    """
    n = perm.size
    if t >= n:
        return 0, EMPTY_DECISION
    ref = _reference_ids(instance, perm[:t], C)
    if ref.size == 0:
        return 0, EMPTY_REFERENCE
    c = kernels.aug_on_select(
        instance.bpb[perm], instance.weights[perm], perm.astype(np.int64), t,
        instance.bpb[ref], instance.weights[ref], ref.astype(np.int64), out,
    )
    return c, None


def _assert_running_capacity(weights: np.ndarray, C: float) -> None:
    running = 0.0
    for step, w in enumerate(weights.tolist(), 1):
        running += w
        if running > C + EPS:
            raise CapacityViolation(
                f"selected weight {running!r} exceeds capacity {C} after selection {step}"
            )


def aug_on_run(instance: Instance, order: ArrivalOrder, C: float, t: int | None = None) -> RunOutcome:
    """AUG-ON with augmented capacity ``C`` and observation length ``t``.

    The first ``t`` arrivals are only observed. OFF on them gives the reference
    set; afterwards an arrival whose buck-per-bang beats the worst reference
    entry replaces that entry, and is selected only if the replaced entry was
    observed offline and is at least as heavy. Other arrivals are ignored.

    The selected weight never exceeds ``C``; this is checked after every
    selection and a :class:`CapacityViolation` is raised otherwise.
    """
    _check_capacity(C)
    n = instance.n
    if t is None:
        t = default_threshold(n)
    if not 0 <= t <= n:
        raise ValueError(f"need 0 <= t <= n, got t={t}, n={n}")
    perm = np.asarray(order.positions, dtype=np.intp)
    if perm.size != n:
        raise ValueError("arrival order does not match the instance size")
    out = np.empty(max(n, 1), dtype=np.intp)
    c, flag = aug_on_steps(instance, perm, C, t, out)
    steps = out[:c]
    ids = perm[steps]
    w = instance.weights[ids]
    _assert_running_capacity(w, C)
    return RunOutcome.build(steps, ids, instance.values[ids], w, flag)


def coin_heads(coin: SeedLike, C: float) -> bool:
    return bool(make_rng(coin).random() < 1.0 / C)


def on_run(instance: Instance, order: ArrivalOrder, C: float = 2.0, coin: SeedLike = None) -> RunOutcome:
    """Run AUG-ON at capacity ``C`` with probability ``1/C``, else select nothing.

    ``C = 2`` is the fair coin. The observation length is floor(n/e).
    """
    _check_capacity(C)
    if coin_heads(coin, C):
        return aug_on_run(instance, order, C, default_threshold(instance.n))
    return RunOutcome.empty(INACTIVE)


@dataclass
class AugOnState:
    """Step-by-step AUG-ON bookkeeping, kept literal for inspection and tests.

    The reference list is re-sorted after each update; ``worst_history``
    records the buck-per-bang of the worst entry before each arrival and
    ``comparisons`` counts, per offline-observed item, how often its weight
    was compared against a newcomer.
    """

    reference: list[ReferenceEntry]
    b_threshold: float
    capacity: float
    selected: list[tuple[int, Item]] = field(default_factory=list)
    total_weight: float = 0.0
    worst_history: list[float] = field(default_factory=list)
    comparisons: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        self.k = len(self.reference)
        self.reference.sort(key=lambda e: e.key)

    @classmethod
    def from_prefix(cls, items: list[Item], C: float) -> "AugOnState":
        ranked = sorted(items, key=lambda it: (it.bpb, it.id))
        ref = []
        used = 0.0
        for it in ranked:
            if used + it.weight > C + EPS:
                break
            used += it.weight
            ref.append(ReferenceEntry(it, Origin.OFFLINE))
        b_threshold = math.inf if len(ref) == len(ranked) else (ref[-1].item.bpb if ref else 0.0)
        return cls(ref, b_threshold, C)

    @property
    def worst(self) -> ReferenceEntry:
        return self.reference[-1]

    def offer(self, position: int, item: Item) -> bool:
        if not self.reference:
            return False
        worst = self.worst
        self.worst_history.append(worst.item.bpb)
        if not item.bpb < worst.item.bpb:
            return False
        take = False
        if worst.origin is Origin.OFFLINE:
            self.comparisons[worst.item.id] = self.comparisons.get(worst.item.id, 0) + 1
            take = item.weight <= worst.item.weight
        if take:
            self.selected.append((position, item))
            self.total_weight += item.weight
            if self.total_weight > self.capacity + EPS:
                raise CapacityViolation(
                    f"selected weight {self.total_weight!r} exceeds capacity {self.capacity}"
                )
        self.reference[-1] = ReferenceEntry(item, Origin.DECISION)
        self.reference.sort(key=lambda e: e.key)
        assert len(self.reference) == self.k
        return take


def aug_on_trace(instance: Instance, order: ArrivalOrder, C: float, t: int) -> tuple[RunOutcome, AugOnState]:
    """Pure-Python AUG-ON that also returns its final state."""
    _check_capacity(C)
    perm = list(order)
    if not 0 <= t <= len(perm):
        raise ValueError("need 0 <= t <= n")
    state = AugOnState.from_prefix([instance.items[i] for i in perm[:t]], C)
    for p in range(t, len(perm)):
        state.offer(p + 1, instance.items[perm[p]])
    flag = None
    if t >= len(perm):
        flag = EMPTY_DECISION
    elif state.k == 0:
        flag = EMPTY_REFERENCE
    sel = tuple((p, it.id) for p, it in state.selected)
    out = RunOutcome(
        sel,
        math.fsum(it.value for _, it in state.selected),
        math.fsum(it.weight for _, it in state.selected),
        flag,
    )
    return out, state


def assumption1_check(generator: Callable[[SeedLike], Instance], samples: int, seed: int = 0) -> float:
    """Empirical P(w(i) > w(j) | b(i) > b(j)) over item pairs from ``generator``.

    ``generator`` maps a seed to an :class:`Instance` of iid items. Disjoint
    pairs are drawn within each generated instance until ``samples`` pairs are
    collected; pairs with equal buck-per-bang are skipped.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    hits = comparable = drawn = 0
    draw = 0
    while drawn < samples:
        inst = generator(trial_seed(seed, draw))
        rng = make_rng(trial_seed(seed, draw, 1))
        draw += 1
        if inst.n < 2:
            if draw > samples:
                break
            continue
        perm = rng.permutation(inst.n)
        m = min(inst.n // 2, samples - drawn)
        a, b = perm[:m], perm[m : 2 * m]
        drawn += m
        ba, bb = inst.bpb[a], inst.bpb[b]
        wa, wb = inst.weights[a], inst.weights[b]
        mask = ba != bb
        hi_w = np.where(ba > bb, wa, wb)[mask]
        lo_w = np.where(ba > bb, wb, wa)[mask]
        comparable += int(mask.sum())
        hits += int((hi_w > lo_w).sum())
    if comparable == 0:
        raise DegenerateGeneratorError("generator never produced two items with different buck-per-bang")
    return hits / comparable
