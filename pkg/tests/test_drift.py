import json
import math
from statistics import NormalDist

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from drifttrap.drift import (
    DriftKind,
    DriftSpec,
    ScenarioConfig,
    config_from_dict,
    generate_stream,
    realize_bias,
    stream_arrays,
)
from drifttrap.errors import ConfigurationError
from drifttrap.rng import DRIFT_STREAM, NOISE_STREAM, GaussianStream


def replay_normals(seed, substream, n):
    """Independent replay of the documented stream using the stdlib inverse CDF."""
    bg = np.random.Philox(key=(substream << 64) | seed)
    raw = [int(v) for v in bg.random_raw(n)]
    inv = NormalDist().inv_cdf
    return [inv(((r >> 11) + 0.5) / 2.0**53) for r in raw]


def test_linear_bias_values():
    b = realize_bias(DriftSpec.linear(0.002), 3)
    assert b.tolist() == [0.002, 0.004, 0.006]


def test_no_drift_bias_is_zero():
    assert realize_bias(DriftSpec.none(), 4).tolist() == [0, 0, 0, 0]


def test_random_walk_matches_replayed_stream():
    seed = 123
    b = realize_bias(DriftSpec.random_walk(0.01), 2, GaussianStream(seed, DRIFT_STREAM))
    eta = replay_normals(seed, DRIFT_STREAM, 2)
    assert b[0] == pytest.approx(0.01 * eta[0], abs=1e-15)
    assert b[1] == pytest.approx(0.01 * eta[0] + 0.01 * eta[1], abs=1e-15)


def test_gaussian_stream_matches_replay_long():
    z = GaussianStream(99, NOISE_STREAM).normals(500)
    np.testing.assert_allclose(z, replay_normals(99, NOISE_STREAM, 500), rtol=0, atol=1e-12)


@given(st.floats(-1, 1, allow_nan=False), st.integers(1, 300))
def test_linear_closed_form_exact(alpha, n):
    b = realize_bias(DriftSpec.linear(alpha), n)
    assert all(b[t - 1] == alpha * t for t in range(1, n + 1))


def test_random_walk_increment_variance():
    b = realize_bias(DriftSpec.random_walk(0.01), 20000, GaussianStream(5, DRIFT_STREAM))
    inc = np.diff(np.concatenate(([0.0], b)))
    assert abs(inc.mean()) < 4 * 0.01 / math.sqrt(inc.size)
    assert 0.8 * 1e-4 <= inc.var(ddof=1) <= 1.2 * 1e-4


def test_noise_free_limit_exposes_drift():
    cfg = ScenarioConfig(theta_star=0, sigma=1e-12, n=2, drift=DriftSpec.linear(0.002))
    y = [r.y for r in generate_stream(cfg)]
    assert y == pytest.approx([0.002, 0.004], abs=1e-9)


@pytest.mark.parametrize("seed", [0, 1, 2**64 - 1])
def test_no_drift_mean_near_theta(seed):
    cfg = ScenarioConfig(theta_star=5, n=10_000, seed=seed)
    y = np.array([r.y for r in generate_stream(cfg)])
    assert abs(y.mean() - 5) <= 4 / math.sqrt(10_000)


def test_linear_drift_sample_mean():
    y, _ = stream_arrays(ScenarioConfig(n=5000, drift=DriftSpec.linear(0.002), seed=3))
    # arithmetic series: mean of alpha*t over t=1..n is alpha*(n+1)/2
    assert abs(y.mean() - 0.002 * 5001 / 2) <= 0.06


def test_records_are_one_based():
    recs = generate_stream(ScenarioConfig(n=3, drift=DriftSpec.linear(1.0)))
    assert [r.t for r in recs] == [1, 2, 3]
    assert [r.b_true for r in recs] == [1.0, 2.0, 3.0]


def test_determinism_bitwise():
    cfg = ScenarioConfig(n=1000, drift=DriftSpec.random_walk(0.01), seed=42)
    a, b = stream_arrays(cfg), stream_arrays(cfg)
    assert a[0].tobytes() == b[0].tobytes() and a[1].tobytes() == b[1].tobytes()


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**64 - 1))
def test_noise_independent_of_drift_kind(seed):
    base = ScenarioConfig(theta_star=1.5, n=200, seed=seed)
    eps_none = stream_arrays(base)[0] - 1.5
    for drift in (DriftSpec.linear(0.002), DriftSpec.random_walk(0.01)):
        y, b = stream_arrays(ScenarioConfig(theta_star=1.5, n=200, seed=seed, drift=drift))
        np.testing.assert_allclose(y - b - 1.5, eps_none, atol=1e-12, rtol=0)


@pytest.mark.parametrize("kwargs", [
    {"sigma": 0}, {"sigma": -1}, {"prior_var": 0}, {"n": 0}, {"window": 0},
    {"n": 10, "window": 11}, {"seed": -1}, {"seed": 2**64}, {"theta_star": math.nan},
    {"sigma": math.inf},
])
def test_invalid_config_rejected(kwargs):
    with pytest.raises(ConfigurationError):
        ScenarioConfig(**kwargs)


@pytest.mark.parametrize("kwargs", [
    {"kind": "RandomWalk", "sigma_rw": 0}, {"kind": "Linear", "alpha": math.inf},
    {"kind": "Quadratic"}, {"kind": "RandomWalk", "sigma_rw": math.nan},
])
def test_invalid_drift_rejected(kwargs):
    with pytest.raises(ConfigurationError):
        DriftSpec(**kwargs)


def test_config_json_roundtrip_and_unknown_fields():
    cfg = ScenarioConfig(drift=DriftSpec.linear(0.002), seed=9, window=200)
    back = config_from_dict(json.loads(cfg.to_json()))
    assert back == cfg and back.config_hash() == cfg.config_hash()
    assert back.drift.kind is DriftKind.LINEAR
    with pytest.raises(ConfigurationError, match="unknown config fields"):
        config_from_dict({**cfg.to_dict(), "extra": 1})
    with pytest.raises(ConfigurationError, match="unknown drift fields"):
        config_from_dict({**cfg.to_dict(), "drift": {"kind": "Linear", "slope": 1}})
