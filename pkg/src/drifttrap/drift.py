"""Observation streams with a hidden, slowly varying bias.

Observations follow ``y_t = theta_star + eps_t + b_t`` for ``t = 1..n`` with
``eps_t ~ N(0, sigma^2)`` and ``b_t`` one of

* ``None``: ``b_t = 0``
* ``Linear``: ``b_t = alpha * t``
* ``RandomWalk``: ``b_t = eta_1 + ... + eta_t`` with ``eta_k ~ N(0, sigma_rw^2)``
  and ``b_0 = 0``.

The realized bias is carried in each :class:`ObservationRecord` for oracle
checks and trace output only; estimators are fed the ``y`` values alone.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field, fields, replace
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import ConfigurationError
from .rng import DRIFT_STREAM, NOISE_STREAM, GaussianStream, check_seed


class DriftKind(str, Enum):
    NONE = "None"
    LINEAR = "Linear"
    RANDOM_WALK = "RandomWalk"


@dataclass(frozen=True)
class DriftSpec:
    """Parameters of the bias process. ``alpha`` is used only by ``Linear``,
    ``sigma_rw`` only by ``RandomWalk``."""

    kind: DriftKind = DriftKind.NONE
    alpha: float = 0.0
    sigma_rw: float = 0.0

    def __post_init__(self):
        try:
            kind = DriftKind(self.kind)
        except ValueError:
            raise ConfigurationError(
                f"unknown drift kind {self.kind!r}; expected one of "
                f"{[k.value for k in DriftKind]}"
            ) from None
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "alpha", _real("drift.alpha", self.alpha))
        object.__setattr__(self, "sigma_rw", _real("drift.sigma_rw", self.sigma_rw))
        if kind is DriftKind.RANDOM_WALK and not self.sigma_rw > 0:
            raise ConfigurationError("random-walk drift needs sigma_rw > 0")
        if self.sigma_rw < 0:
            raise ConfigurationError("sigma_rw must be non-negative")

    @classmethod
    def none(cls) -> "DriftSpec":
        return cls(DriftKind.NONE)

    @classmethod
    def linear(cls, alpha: float) -> "DriftSpec":
        return cls(DriftKind.LINEAR, alpha=alpha)

    @classmethod
    def random_walk(cls, sigma_rw: float) -> "DriftSpec":
        return cls(DriftKind.RANDOM_WALK, sigma_rw=sigma_rw)

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "alpha": self.alpha, "sigma_rw": self.sigma_rw}


def _real(name, value) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float, np.integer, np.floating)):
        raise ConfigurationError(f"{name} must be a real number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ConfigurationError(f"{name} must be finite, got {value}")
    return value


def _positive_int(name, value) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise ConfigurationError(f"{name} must be an integer, got {value!r}")
    if value < 1:
        raise ConfigurationError(f"{name} must be >= 1, got {value}")
    return int(value)


@dataclass(frozen=True)
class ScenarioConfig:
    """Complete description of one simulated experiment.

    Defaults are the reference setting: ``theta_star = 0``, ``sigma = 1``,
    prior ``N(0, 10^2)``, 5000 observations, no drift.
    """

    theta_star: float = 0.0
    sigma: float = 1.0
    n: int = 5000
    prior_mean: float = 0.0
    prior_var: float = 100.0
    drift: DriftSpec = field(default_factory=DriftSpec)
    seed: int = 0
    window: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "theta_star", _real("theta_star", self.theta_star))
        object.__setattr__(self, "sigma", _real("sigma", self.sigma))
        object.__setattr__(self, "prior_mean", _real("prior_mean", self.prior_mean))
        object.__setattr__(self, "prior_var", _real("prior_var", self.prior_var))
        object.__setattr__(self, "n", _positive_int("n", self.n))
        object.__setattr__(self, "seed", check_seed(self.seed))
        if self.sigma <= 0:
            raise ConfigurationError(f"sigma must be > 0, got {self.sigma}")
        if self.prior_var <= 0:
            raise ConfigurationError(f"prior_var must be > 0, got {self.prior_var}")
        if isinstance(self.drift, dict):
            object.__setattr__(self, "drift", drift_from_dict(self.drift))
        elif not isinstance(self.drift, DriftSpec):
            raise ConfigurationError(f"drift must be a DriftSpec, got {self.drift!r}")
        if self.window is not None:
            w = _positive_int("window", self.window)
            if w > self.n:
                raise ConfigurationError(f"window {w} exceeds stream length {self.n}")
            object.__setattr__(self, "window", w)

    def with_seed(self, seed: int) -> "ScenarioConfig":
        return replace(self, seed=seed)

    def to_dict(self) -> dict:
        return {
            "theta_star": self.theta_star,
            "sigma": self.sigma,
            "n": self.n,
            "prior_mean": self.prior_mean,
            "prior_var": self.prior_var,
            "drift": self.drift.to_dict(),
            "seed": self.seed,
            "window": self.window,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def config_hash(self) -> str:
        """SHA-256 of the canonical (sorted, compact) JSON form."""
        return hashlib.sha256(self.to_json().encode("utf-8")).hexdigest()


_CONFIG_FIELDS = {f.name for f in fields(ScenarioConfig)}
_DRIFT_FIELDS = {f.name for f in fields(DriftSpec)}


def drift_from_dict(data: dict) -> DriftSpec:
    if not isinstance(data, dict):
        raise ConfigurationError("drift must be a JSON object")
    unknown = set(data) - _DRIFT_FIELDS
    if unknown:
        raise ConfigurationError(f"unknown drift fields: {sorted(unknown)}")
    return DriftSpec(**data)


def config_from_dict(data: dict) -> ScenarioConfig:
    """Build a config from a JSON-like mapping; unknown keys are rejected."""
    if not isinstance(data, dict):
        raise ConfigurationError("scenario config must be a JSON object")
    unknown = set(data) - _CONFIG_FIELDS
    if unknown:
        raise ConfigurationError(f"unknown config fields: {sorted(unknown)}")
    data = dict(data)
    if "drift" in data:
        data["drift"] = drift_from_dict(data["drift"])
    return ScenarioConfig(**data)


def load_config(path) -> ScenarioConfig:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"{path}: invalid JSON ({exc})") from None
    return config_from_dict(data)


@dataclass(frozen=True)
class ObservationRecord:
    t: int
    y: float
    b_true: float


def realize_bias(drift: DriftSpec, n: int, rng: GaussianStream | None = None) -> np.ndarray:
    """Realize ``b_1..b_n`` for the given drift model.

    ``rng`` must be supplied for random-walk drift; it is consumed from its
    current position, one variate per step.
    """
    n = _positive_int("n", n)
    if drift.kind is DriftKind.NONE:
        return np.zeros(n)
    if drift.kind is DriftKind.LINEAR:
        return drift.alpha * np.arange(1, n + 1, dtype=np.float64)
    if rng is None:
        raise ConfigurationError("random-walk drift requires a random stream")
    return np.cumsum(drift.sigma_rw * rng.normals(n))


def stream_arrays(config: ScenarioConfig) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(y, b_true)`` arrays of length ``config.n``."""
    eps = config.sigma * GaussianStream(config.seed, NOISE_STREAM).normals(config.n)
    bias = realize_bias(config.drift, config.n, GaussianStream(config.seed, DRIFT_STREAM))
    y = (config.theta_star + eps) + bias
    return y, bias


def generate_stream(config: ScenarioConfig) -> list[ObservationRecord]:
    y, bias = stream_arrays(config)
    return [
        ObservationRecord(t, float(yt), float(bt))
        for t, yt, bt in zip(range(1, config.n + 1), y, bias)
    ]
