"""Random instance families.

``uniform``
    weight ~ U(0,1], buck-per-bang ~ U[b_low, b_high) drawn independently,
    value = weight / buck-per-bang. Weight carries no information about
    buck-per-bang, so a heavier-b item is heavier with probability exactly 1/2.
``exponential``
    value ~ Exp(scale), weight ~ U(0,1] independent of value. Weight and
    buck-per-bang are then positively dependent.
``correlated``
    like ``uniform`` but weight = (1-rho) u + rho g(b) with g increasing; at
    rho = 1 weight is strictly increasing in buck-per-bang.
``custom``
    ``sampler(rng, n) -> (values, weights)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .core import Instance, SeedLike, make_rng

FAMILIES = ("uniform", "exponential", "correlated", "custom")
ALIASES = {
    "uniformindependent": "uniform",
    "uniform_independent": "uniform",
    "exp": "exponential",
    "correlatedbuckweight": "correlated",
    "correlated_buck_weight": "correlated",
}
DEFAULTS = {
    "uniform": {"b_low": 0.5, "b_high": 2.0},
    "exponential": {"scale": 1.0},
    "correlated": {"b_low": 0.5, "b_high": 2.0, "rho": 1.0},
    "custom": {},
}
_TINY = np.finfo(np.float64).tiny


@dataclass(frozen=True)
class GeneratorSpec:
    family: str
    n: int
    params: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        fam = ALIASES.get(self.family.lower(), self.family.lower())
        if fam not in FAMILIES:
            raise ValueError(f"unknown generator family {self.family!r}; choose from {', '.join(FAMILIES)}")
        object.__setattr__(self, "family", fam)
        if self.n < 1:
            raise ValueError("generator size n must be >= 1")
        unknown = set(self.params) - set(DEFAULTS[fam]) - ({"sampler"} if fam == "custom" else set())
        if unknown:
            raise ValueError(f"unknown parameters for {fam}: {', '.join(sorted(unknown))}")
        merged = {**DEFAULTS[fam], **self.params}
        object.__setattr__(self, "params", merged)
        if fam in ("uniform", "correlated") and not 0 < merged["b_low"] < merged["b_high"]:
            raise ValueError("need 0 < b_low < b_high")
        if fam == "correlated" and not 0 <= merged["rho"] <= 1:
            raise ValueError("rho must lie in [0, 1]")
        if fam == "exponential" and not merged["scale"] > 0:
            raise ValueError("scale must be positive")
        if fam == "custom" and not callable(merged.get("sampler")):
            raise ValueError("custom family needs a callable 'sampler'")

    def __call__(self, seed: SeedLike) -> Instance:
        return generate_instance(self, seed)

    def describe(self) -> str:
        if self.family == "custom":
            return "custom"
        args = ",".join(f"{k}={v!r}" for k, v in sorted(self.params.items()))
        return f"{self.family}:{args}"

    @classmethod
    def parse(cls, text: str, n: int) -> "GeneratorSpec":
        """Parse ``family[:key=value,...]``."""
        family, _, rest = text.partition(":")
        params = {}
        for part in filter(None, (p.strip() for p in rest.split(","))):
            key, eq, val = part.partition("=")
            if not eq:
                raise ValueError(f"bad generator parameter {part!r}; expected key=value")
            try:
                params[key.strip()] = float(val)
            except ValueError:
                raise ValueError(f"generator parameter {key!r} must be a number") from None
        return cls(family.strip(), n, params)


def _unit_interval(rng: np.random.Generator, n: int) -> np.ndarray:
    return 1.0 - rng.random(n)  # (0, 1]


def generate_instance(spec: GeneratorSpec, seed: SeedLike) -> Instance:
    rng = make_rng(seed)
    n = spec.n
    p = spec.params
    if spec.family == "uniform":
        w = _unit_interval(rng, n)
        b = rng.uniform(p["b_low"], p["b_high"], n)
        v = w / b
    elif spec.family == "exponential":
        v = np.maximum(rng.exponential(p["scale"], n), _TINY)
        w = _unit_interval(rng, n)
    elif spec.family == "correlated":
        b = rng.uniform(p["b_low"], p["b_high"], n)
        u = _unit_interval(rng, n)
        g = 0.05 + 0.95 * (b - p["b_low"]) / (p["b_high"] - p["b_low"])
        w = np.clip((1 - p["rho"]) * u + p["rho"] * g, _TINY, 1.0)
        v = w / b
    else:
        v, w = p["sampler"](rng, n)
    return Instance.from_arrays(np.asarray(v, dtype=float).tolist(), np.asarray(w, dtype=float).tolist())
