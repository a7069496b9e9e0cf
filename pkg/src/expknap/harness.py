"""Monte-Carlo experiment engine.

Trial ``i`` draws its arrival order from ``SeedSequence([seed, i])`` and,
for ON, its coin from ``SeedSequence([seed, i, 1])``. Per-trial results are
collected in trial order before aggregation, so statistics are identical
for any number of worker processes.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .core import DegenerateInstanceError, EmptyInstanceError, Instance, best_k_subset, trial_seed
from .generators import GeneratorSpec, generate_instance
from .knapsack_offline import fractional_opt, integral_opt, off_greedy
from .knapsack_online import _assert_running_capacity, aug_on_steps, coin_heads
from .secretary import default_threshold

__all__ = [
    "ALGORITHMS",
    "AlgorithmSpec",
    "GeneratorSpec",
    "TrialStats",
    "competitive_ratio_estimate",
    "generate_instance",
    "ratio_sweep",
    "run_trials",
    "selection_histogram",
]

ALGORITHMS = ("secretary", "classical", "ksecretary", "aug_on", "on")
EXHAUSTIVE_MAX_N = 8
_CHUNKS_PER_JOB = 4


@dataclass(frozen=True)
class AlgorithmSpec:
    """Which algorithm to run and its knobs.

    ``t=None`` means floor(n/e). ``k`` is used by ``ksecretary`` and ``C`` by
    ``aug_on`` and ``on``.
    """

    name: str
    t: int | None = None
    k: int = 1
    C: float = 2.0

    def __post_init__(self):
        name = self.name.lower().replace("-", "_")
        if name not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.name!r}; choose from {', '.join(ALGORITHMS)}")
        object.__setattr__(self, "name", name)
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if name in ("aug_on", "on") and not 1 < self.C <= 2:
            raise ValueError(f"augmented capacity must lie in (1, 2], got {self.C}")

    def resolved(self, n: int) -> "AlgorithmSpec":
        t = default_threshold(n) if self.t is None or self.name == "on" else self.t
        if not 0 <= t <= n:
            raise ValueError(f"need 0 <= t <= n, got t={t}, n={n}")
        return replace(self, t=t)

    @property
    def is_knapsack(self) -> bool:
        return self.name in ("aug_on", "on")

    def params(self) -> dict:
        out = {"t": self.t}
        if self.name == "ksecretary":
            out["k"] = self.k
        if self.is_knapsack:
            out["C"] = self.C
        return out


@dataclass(frozen=True)
class TrialStats:
    """Aggregated results of ``trials`` runs.

    ``histogram`` maps selection count to the number of trials with that
    count. ``target_frequency`` gives, for each item of the reference optimum
    (the best item, the best k, or OFF's selection), the fraction of trials
    that selected it; ``success_rate`` is the fraction selecting all of them.
    ``std_error`` holds sample-std / sqrt(trials) for value, count, weight and
    success.
    """

    algorithm: str
    n: int
    seed: int
    trials: int
    exhaustive: bool
    params: dict
    mean_value: float
    mean_count: float
    mean_weight: float
    success_rate: float
    std_error: dict
    histogram: dict
    target_frequency: dict
    success_hits: int
    count_total: int

    @property
    def exact_success_rate(self) -> Fraction:
        return Fraction(self.success_hits, self.trials)

    @property
    def exact_mean_count(self) -> Fraction:
        return Fraction(self.count_total, self.trials)

    def frequency(self, count: int) -> float:
        return self.histogram.get(count, 0) / self.trials

    def tail_frequency(self, at_least: int) -> float:
        return sum(c for k, c in self.histogram.items() if k >= at_least) / self.trials

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        d = asdict(self)
        d["histogram"] = {str(k): v for k, v in sorted(self.histogram.items())}
        d["target_frequency"] = {str(k): v for k, v in self.target_frequency.items()}
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "TrialStats":
        d = dict(d)
        d["histogram"] = {int(k): int(v) for k, v in d["histogram"].items()}
        d["target_frequency"] = {int(k): float(v) for k, v in d["target_frequency"].items()}
        return cls(**d)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    def to_csv(self) -> str:
        """Histogram as ``count,frequency`` rows after ``# key=json`` header lines."""
        buf = io.StringIO()
        d = self.to_dict()
        hist = d.pop("histogram")
        for key, val in d.items():
            buf.write(f"# {key}={json.dumps(val, separators=(',', ':'))}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["count", "frequency"])
        for k, v in hist.items():
            w.writerow([k, v])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "TrialStats":
        meta = {}
        rows = []
        for line in text.splitlines():
            if line.startswith("# "):
                key, _, val = line[2:].partition("=")
                meta[key] = json.loads(val)
            elif line and line != "count,frequency":
                rows.append(line)
        meta["histogram"] = {k: v for k, v in csv.reader(rows)}
        return cls.from_dict(meta)


def _targets(instance: Instance, algo: AlgorithmSpec) -> np.ndarray:
    if algo.name in ("secretary", "classical"):
        ids = [instance.best_id]
    elif algo.name == "ksecretary":
        ids = [it.id for it in best_k_subset(instance.items, algo.k)]
    else:
        ids = list(off_greedy(instance, algo.C).selected)
    return np.array(sorted(ids), dtype=np.intp)


def _orders(n: int, seed: int, start: int, stop: int, exhaustive: bool) -> Iterable[np.ndarray]:
    if exhaustive:
        for perm in itertools.islice(itertools.permutations(range(n)), start, stop):
            yield np.array(perm, dtype=np.intp)
    else:
        for i in range(start, stop):
            yield np.random.default_rng(trial_seed(seed, i)).permutation(n)


def _simulate(instance: Instance, algo: AlgorithmSpec, targets: np.ndarray, seed: int,
              start: int, stop: int, exhaustive: bool) -> dict:
    n = instance.n
    m = stop - start
    values = instance.values
    weights = instance.weights
    col = np.full(n, -1, dtype=np.intp)
    col[targets] = np.arange(targets.size)
    out = np.empty(n, dtype=np.intp)
    res_value = np.zeros(m)
    res_weight = np.zeros(m)
    res_count = np.zeros(m, dtype=np.int64)
    hits = np.zeros((m, targets.size), dtype=bool)
    name, t = algo.name, algo.t
    for row, perm in enumerate(_orders(n, seed, start, stop, exhaustive)):
        if name == "secretary":
            c = kernels.threshold_select(values[perm], t, out)
        elif name == "classical":
            c = kernels.classical_select(values[perm], t, out)
        elif name == "ksecretary":
            c = kernels.ksec_select(values[perm], algo.k, t, out)
        elif name == "aug_on" or coin_heads(trial_seed(seed, start + row, 1), algo.C):
            c, _ = aug_on_steps(instance, perm, algo.C, t, out)
        else:
            c = 0
        if c == 0:
            continue
        ids = perm[out[:c]]
        res_count[row] = c
        res_value[row] = math.fsum(values[ids])
        if algo.is_knapsack:
            w = weights[ids]
            _assert_running_capacity(w, algo.C)
            res_weight[row] = math.fsum(w)
        else:
            res_weight[row] = c
        cols = col[ids]
        hits[row, cols[cols >= 0]] = True
    return {"value": res_value, "weight": res_weight, "count": res_count, "hits": hits}


def _mean_se(x: np.ndarray) -> tuple[float, float]:
    T = x.size
    mean = math.fsum(x.tolist()) / T
    if T < 2:
        return mean, 0.0
    var = math.fsum(((x - mean) ** 2).tolist()) / (T - 1)
    return mean, math.sqrt(var / T)


def run_trials(instance: Instance, algorithm: AlgorithmSpec | str, trials: int | None = None,
               seed: int = 0, *, exhaustive: bool = False, jobs: int = 1) -> TrialStats:
    """Run ``algorithm`` on ``trials`` random arrival orders of ``instance``.

    With ``exhaustive=True`` (n <= 8) every one of the n! orders is run once
    instead and ``trials`` is ignored; integer totals on the result then give
    exact rational statistics.
    """
    if isinstance(algorithm, str):
        algorithm = AlgorithmSpec(algorithm)
    if instance.n == 0:
        raise EmptyInstanceError("cannot run trials on an empty instance")
    if seed < 0:
        raise ValueError("seed must be non-negative")
    algo = algorithm.resolved(instance.n)
    if exhaustive:
        if instance.n > EXHAUSTIVE_MAX_N:
            raise ValueError(f"exhaustive mode supports n <= {EXHAUSTIVE_MAX_N}, got {instance.n}")
        trials = math.factorial(instance.n)
    if trials is None or trials < 1:
        raise ValueError("trials must be >= 1")
    targets = _targets(instance, algo)

    if jobs <= 1 or exhaustive or trials < 2 * _CHUNKS_PER_JOB:
        parts = [_simulate(instance, algo, targets, seed, 0, trials, exhaustive)]
    else:
        nchunks = min(trials, jobs * _CHUNKS_PER_JOB)
        bounds = np.linspace(0, trials, nchunks + 1).astype(int).tolist()
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [
                pool.submit(_simulate, instance, algo, targets, seed, a, b, False)
                for a, b in zip(bounds[:-1], bounds[1:])
            ]
            parts = [f.result() for f in futures]
    value = np.concatenate([p["value"] for p in parts])
    weight = np.concatenate([p["weight"] for p in parts])
    count = np.concatenate([p["count"] for p in parts])
    hits = np.concatenate([p["hits"] for p in parts])
    success = hits.all(axis=1) if targets.size else np.zeros(trials, dtype=bool)

    mv, sv = _mean_se(value)
    mc, sc = _mean_se(count.astype(np.float64))
    mw, sw = _mean_se(weight)
    ms, ss = _mean_se(success.astype(np.float64))
    hist_keys, hist_counts = np.unique(count, return_counts=True)
    target_hits = hits.sum(axis=0)
    return TrialStats(
        algorithm=algo.name,
        n=instance.n,
        seed=seed,
        trials=trials,
        exhaustive=exhaustive,
        params=algo.params(),
        mean_value=mv,
        mean_count=mc,
        mean_weight=mw,
        success_rate=ms,
        std_error={"value": sv, "count": sc, "weight": sw, "success": ss},
        histogram={int(k): int(c) for k, c in zip(hist_keys, hist_counts)},
        target_frequency={int(i): int(h) / trials for i, h in zip(targets, target_hits)},
        success_hits=int(success.sum()),
        count_total=int(count.sum()),
    )


def ratio_denominator(instance: Instance, algorithm: AlgorithmSpec, denominator: str = "auto") -> float:
    """Offline benchmark a run's mean value is divided by.

    ``auto`` means v(best item) for the secretary algorithms, the value of the
    best k items for ``ksecretary``, and the fractional optimum at capacity 1
    for the knapsack algorithms. Knapsack runs may also use ``integral`` (0/1
    optimum at capacity 1) or ``off`` (OFF on the full set at capacity C).
    """
    if instance.n == 0:
        raise DegenerateInstanceError("no items, so no offline optimum")
    if denominator == "auto":
        if algorithm.name in ("secretary", "classical"):
            den = float(instance.values[instance.best_id])
        elif algorithm.name == "ksecretary":
            den = math.fsum(it.value for it in best_k_subset(instance.items, algorithm.k))
        else:
            den = fractional_opt(instance, 1.0).value
    elif denominator == "fractional":
        den = fractional_opt(instance, 1.0).value
    elif denominator == "integral":
        den = integral_opt(instance, 1.0)
    elif denominator == "off":
        den = off_greedy(instance, algorithm.C).total_value
    else:
        raise ValueError(f"unknown denominator {denominator!r}")
    if den <= 0:
        raise DegenerateInstanceError("offline optimum is zero")
    return den


def competitive_ratio_estimate(instance: Instance, algorithm: AlgorithmSpec | str, trials: int,
                               seed: int = 0, *, denominator: str = "auto", jobs: int = 1,
                               exhaustive: bool = False) -> float:
    """Mean selected value over random orders divided by the offline benchmark."""
    if isinstance(algorithm, str):
        algorithm = AlgorithmSpec(algorithm)
    den = ratio_denominator(instance, algorithm, denominator)
    stats = run_trials(instance, algorithm, trials, seed, jobs=jobs, exhaustive=exhaustive)
    return stats.mean_value / den


def selection_histogram(n: int, t: int, trials: int, seed: int = 0, *, jobs: int = 1) -> TrialStats:
    """Selection-count histogram of t-Threshold on ``n`` distinct values."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    return run_trials(Instance.ranks(n), AlgorithmSpec("secretary", t=t), trials, seed, jobs=jobs)


def ratio_sweep(algorithm: AlgorithmSpec, families: Sequence[str], sizes: Sequence[int],
                trials: int, seed: int = 0, *, jobs: int = 1) -> dict:
    """Empirical minimum of the ratio over generated instances.

    One instance per (family, size), each seeded from ``seed`` and its
    position in the sweep. The result is an estimate over the instances
    tried, not the true minimum over all instances.
    """
    rows = []
    for idx, (fam, n) in enumerate(itertools.product(families, sizes)):
        spec = GeneratorSpec(fam, n)
        inst = generate_instance(spec, trial_seed(seed, idx, 2))
        ratio = competitive_ratio_estimate(inst, algorithm, trials, seed, jobs=jobs)
        rows.append({"family": spec.family, "n": n, "ratio": ratio})
    return {"empirical_min_ratio": min(r["ratio"] for r in rows), "rows": rows}
