import sys
import itertools

import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from expknap import kernels
from expknap.core import Instance

# the backend fixture only swaps module attributes; sharing it across examples is safe
settings.register_profile("expknap", suppress_health_check=[HealthCheck.function_scoped_fixture], deadline=None)
settings.load_profile("expknap")


def record_positions(values, t):
    """1-based positions p > t whose value beats everything before p."""
    out = []
    for p in range(t, len(values)):
        if all(values[p] > values[q] for q in range(p)):
            out.append(p + 1)
    return tuple(out)


def all_permutations(n):
    return [np.array(p) for p in itertools.permutations(range(n))]


@pytest.fixture(params=sorted(kernels.available_backends()))
def backend(request, monkeypatch):
    """Run a test once per kernel backend by patching the dispatch module."""
    mod = kernels.get_backend(request.param)
    for name in ("threshold_select", "classical_select", "ksec_select", "aug_on_select"):
        monkeypatch.setattr(kernels, name, getattr(mod, name))
    return request.param


positive_value = st.floats(min_value=1e-3, max_value=1e3, allow_nan=False, allow_infinity=False)
unit_weight = st.floats(min_value=1e-3, max_value=1.0, allow_nan=False)


@st.composite
def instances(draw, min_n=1, max_n=12):
    n = draw(st.integers(min_n, max_n))
    values = draw(st.lists(positive_value, min_size=n, max_size=n))
    weights = draw(st.lists(unit_weight, min_size=n, max_size=n))
    return Instance.from_arrays(values, weights)


def random_instance(rng, n):
    return Instance.from_arrays(1.0 - rng.random(n), 1.0 - rng.random(n))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
