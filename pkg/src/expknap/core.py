"""Domain types, permutation generation and instance I/O.

Items carry a value and a weight normalized so that the knapsack budget is 1.
All types are immutable once built, so one instance can be shared across
concurrent trial workers.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence, Union

import numpy as np

EPS = 1e-9

SeedLike = Union[int, Sequence[int], np.random.SeedSequence, np.random.Generator, None]


class ExpknapError(Exception):
    """Base class for library errors."""


class EmptyInstanceError(ExpknapError, ValueError):
    pass


class InstanceValidationError(ExpknapError, ValueError):
    pass


class InstanceParseError(InstanceValidationError):
    def __init__(self, path, line: int, reason: str):
        self.path = str(path)
        self.line = line
        super().__init__(f"{path}: line {line}: {reason}")


class DegenerateInstanceError(ExpknapError, ValueError):
    pass


class CapacityViolation(ExpknapError, AssertionError):
    """Raised when a run breaks a capacity guarantee that should hold surely."""


@dataclass(frozen=True)
class Item:
    id: int
    value: float
    weight: float

    def __post_init__(self):
        if not (math.isfinite(self.value) and self.value > 0):
            raise InstanceValidationError(
                f"item {self.id}: value must be finite and > 0 (got {self.value!r})"
            )
        if not (math.isfinite(self.weight) and 0 < self.weight <= 1):
            raise InstanceValidationError(
                f"item {self.id}: weight must lie in (0, 1] with capacity normalized "
                f"to 1 (got {self.weight!r})"
            )

    @property
    def bpb(self) -> float:
        return buck_per_bang(self)


def buck_per_bang(item: Item) -> float:
    """Weight per unit of value, ``w / v``. Lower is better."""
    if item.value == 0:
        raise ZeroDivisionError(f"buck-per-bang undefined for zero-value item {item.id}")
    return item.weight / item.value


@dataclass(frozen=True)
class Instance:
    """The full item set; ``items[i].id == i``."""

    items: tuple[Item, ...]

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))
        for pos, item in enumerate(self.items):
            if item.id != pos:
                raise InstanceValidationError(
                    f"item ids must be 0..n-1 in order; found id {item.id} at index {pos}"
                )

    @classmethod
    def from_arrays(cls, values: Iterable[float], weights: Iterable[float] | None = None) -> "Instance":
        values = [float(v) for v in values]
        if weights is None:
            weights = [1.0] * len(values)
        weights = [float(w) for w in weights]
        if len(values) != len(weights):
            raise InstanceValidationError("values and weights differ in length")
        return cls(tuple(Item(i, v, w) for i, (v, w) in enumerate(zip(values, weights))))

    @classmethod
    def ranks(cls, n: int) -> "Instance":
        """Unit-weight instance with distinct values 1..n."""
        return cls.from_arrays(range(1, n + 1))

    @property
    def n(self) -> int:
        return len(self.items)

    def __len__(self) -> int:
        return len(self.items)

    @cached_property
    def values(self) -> np.ndarray:
        return _frozen(np.array([it.value for it in self.items], dtype=np.float64))

    @cached_property
    def weights(self) -> np.ndarray:
        return _frozen(np.array([it.weight for it in self.items], dtype=np.float64))

    @cached_property
    def bpb(self) -> np.ndarray:
        return _frozen(np.array([buck_per_bang(it) for it in self.items], dtype=np.float64))

    @cached_property
    def bpb_order(self) -> np.ndarray:
        """Item ids sorted by ascending buck-per-bang, ties by smaller id."""
        ids = np.arange(self.n)
        return _frozen(np.lexsort((ids, self.bpb)).astype(np.intp))

    @cached_property
    def best_id(self) -> int:
        """Id of the item with the largest value, ties to the smaller id."""
        if self.n == 0:
            raise EmptyInstanceError("empty instance has no best item")
        return int(np.argmax(self.values))

    def total_value(self) -> float:
        return math.fsum(self.values)

    def total_weight(self) -> float:
        return math.fsum(self.weights)

    def to_dict(self) -> dict:
        return {"items": [{"id": it.id, "value": it.value, "weight": it.weight} for it in self.items]}


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class ArrivalOrder:
    """``positions[p]`` is the id of the item arriving at (0-based) step ``p``."""

    positions: np.ndarray

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=np.intp)
        n = pos.size
        if pos.ndim != 1 or not np.array_equal(np.sort(pos), np.arange(n)):
            raise ValueError("arrival order must be a permutation of 0..n-1")
        object.__setattr__(self, "positions", _frozen(pos.copy()))

    def __len__(self) -> int:
        return int(self.positions.size)

    def __iter__(self):
        return iter(self.positions.tolist())

    def __eq__(self, other):
        if not isinstance(other, ArrivalOrder):
            return NotImplemented
        return np.array_equal(self.positions, other.positions)

    def __hash__(self):
        return hash(self.positions.tobytes())

    @classmethod
    def identity(cls, n: int) -> "ArrivalOrder":
        return cls(np.arange(n))


@dataclass(frozen=True)
class RunOutcome:
    """Items picked by one run.

    ``selected`` holds ``(position, item_id)`` pairs, positions 1-based and
    strictly increasing. ``flag`` marks degenerate runs (for instance an
    empty reference set) and is ``None`` otherwise.
    """

    selected: tuple[tuple[int, int], ...] = ()
    total_value: float = 0.0
    total_weight: float = 0.0
    flag: str | None = None

    @property
    def count(self) -> int:
        return len(self.selected)

    @property
    def positions(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.selected)

    @property
    def ids(self) -> tuple[int, ...]:
        return tuple(i for _, i in self.selected)

    @classmethod
    def empty(cls, flag: str | None = None) -> "RunOutcome":
        return cls(flag=flag)

    @classmethod
    def build(cls, positions, ids, values, weights, flag=None) -> "RunOutcome":
        """``positions`` are 0-based arrival steps; stored 1-based."""
        selected = tuple((int(p) + 1, int(i)) for p, i in zip(positions, ids))
        return cls(selected, math.fsum(values), math.fsum(weights), flag)


def make_rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def trial_seed(base: int, trial: int, stream: int = 0) -> np.random.SeedSequence:
    """Seed for one trial, a pure function of (base seed, trial index, stream)."""
    if stream == 0:
        return np.random.SeedSequence([base, trial])
    return np.random.SeedSequence([base, trial, stream])


def random_permutation(n: int, seed: SeedLike = None) -> ArrivalOrder:
    """Uniformly random arrival order of ``n`` items (numpy's Fisher-Yates)."""
    if n < 1:
        raise EmptyInstanceError("cannot permute an empty instance")
    return ArrivalOrder(make_rng(seed).permutation(n))


def best_k_subset(items: Sequence[Item], k: int) -> tuple[Item, ...]:
    """The ``min(k, len(items))`` items of largest value, ties to smaller id."""
    if k < 0:
        raise ValueError("k must be >= 0")
    ranked = sorted(items, key=lambda it: (-it.value, it.id))
    return tuple(ranked[:k])


# -- instance files ---------------------------------------------------------

def _rescale(weight: float, capacity: float | None) -> float:
    return weight if capacity is None else weight / capacity


def _make_item(path, line, idx, raw_id, value, weight, capacity) -> Item:
    try:
        value = float(value)
        weight = float(weight)
        raw_id = int(raw_id)
    except (TypeError, ValueError):
        raise InstanceParseError(path, line, "id must be an integer, value and weight decimal") from None
    if raw_id != idx:
        raise InstanceParseError(path, line, f"expected id {idx}, got {raw_id}")
    weight = _rescale(weight, capacity)
    if capacity is not None and weight > 1:
        raise InstanceParseError(
            path, line,
            f"weight {weight:g} exceeds 1 after rescaling by capacity {capacity:g}; "
            "every item must fit into the normalized unit budget",
        )
    try:
        return Item(idx, value, weight)
    except InstanceValidationError as exc:
        raise InstanceParseError(path, line, str(exc)) from None


def load_instance(path: str | Path, capacity: float | None = None) -> Instance:
    """Read an instance from CSV (``id,value,weight``) or JSON.

    With ``capacity`` given, raw weights are divided by it so the budget
    becomes 1.
    """
    path = Path(path)
    if capacity is not None and not capacity > 0:
        raise InstanceValidationError("capacity must be positive")
    text = path.read_text()
    if path.suffix.lower() == ".json" or text.lstrip().startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InstanceParseError(path, exc.lineno, exc.msg) from None
        rows = doc.get("items") if isinstance(doc, dict) else None
        if not isinstance(rows, list):
            raise InstanceParseError(path, 1, 'expected an object with an "items" list')
        items = []
        for idx, row in enumerate(rows):
            if not isinstance(row, dict) or not {"id", "value", "weight"} <= row.keys():
                raise InstanceParseError(path, idx + 1, "item needs id, value and weight")
            items.append(_make_item(path, idx + 1, idx, row["id"], row["value"], row["weight"], capacity))
        return Instance(tuple(items))

    reader = csv.reader(text.splitlines())
    header = next(reader, None)
    if header is None or [h.strip() for h in header] != ["id", "value", "weight"]:
        raise InstanceParseError(path, 1, "header must be 'id,value,weight'")
    items = []
    for row in reader:
        line = reader.line_num
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 3:
            raise InstanceParseError(path, line, f"expected 3 fields, got {len(row)}")
        items.append(_make_item(path, line, len(items), *row, capacity))
    return Instance(tuple(items))


def dump_instance(instance: Instance, path: str | Path) -> None:
    path = Path(path)
    if path.suffix.lower() == ".json":
        path.write_text(json.dumps(instance.to_dict()) + "\n")
        return
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["id", "value", "weight"])
        for it in instance.items:
            w.writerow([it.id, repr(it.value), repr(it.weight)])
