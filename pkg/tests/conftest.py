from functools import lru_cache

import numpy as np
import pytest

from drifttrap.drift import DriftSpec, ScenarioConfig
from drifttrap.harness import run_scenario

LINEAR = DriftSpec.linear(0.002)
RANDOM_WALK = DriftSpec.random_walk(0.01)
NO_DRIFT = DriftSpec.none()

_ACCEPTANCE_LINES = []


def acceptance_line(label: str, ok: bool, detail: str):
    _ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@lru_cache(maxsize=None)
def seed_batch(drift: DriftSpec, n: int = 5000, n_seeds: int = 100, window=None):
    """Column arrays (seeds x n) for runs with seeds 0..n_seeds-1, cached per session."""
    cols = ("y", "b_true", "post_mean", "post_var", "abs_error", "pred_err", "window_est")
    out = {c: np.empty((n_seeds, n)) for c in cols}
    for s in range(n_seeds):
        trace = run_scenario(ScenarioConfig(n=n, drift=drift, seed=s, window=window))
        for c in cols:
            out[c][s] = trace.column(c)
    return out


@pytest.fixture
def linear_config():
    return ScenarioConfig(drift=LINEAR, seed=7)
