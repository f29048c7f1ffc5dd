"""Stationarity-assuming estimators.

Both estimators see only the observed values ``y``; neither has any notion of
the bias process that generated them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigurationError, DataError, EstimatorNotReadyError


def _finite(y) -> float:
    y = float(y)
    if not math.isfinite(y):
        raise DataError(f"refusing to absorb non-finite observation {y}")
    return y


@dataclass(frozen=True)
class GaussianPosterior:
    """Normal posterior over a scalar mean with known noise variance.

    Stored in natural-parameter form (``precision`` and ``shift =
    precision * mean``) so that long update sequences accumulate sums rather
    than repeatedly re-weighting a mean.
    """

    precision: float
    shift: float
    count: int = 0

    @classmethod
    def prior(cls, mean: float, var: float) -> "GaussianPosterior":
        if not var > 0 or not math.isfinite(var):
            raise ConfigurationError(f"prior variance must be positive and finite, got {var}")
        return cls(precision=1.0 / var, shift=mean / var, count=0)

    @property
    def mean(self) -> float:
        return self.shift / self.precision

    @property
    def variance(self) -> float:
        return 1.0 / self.precision


def conjugate_update(post: GaussianPosterior, y: float, sigma: float) -> GaussianPosterior:
    """Absorb one observation ``y ~ N(theta, sigma^2)``.

    New precision is ``p + 1/sigma^2`` and the new mean is the
    precision-weighted average of the old mean and ``y``. The input state is
    not modified.
    """
    y = _finite(y)
    if not sigma > 0:
        raise ConfigurationError(f"sigma must be > 0, got {sigma}")
    q = 1.0 / (sigma * sigma)
    return GaussianPosterior(post.precision + q, post.shift + q * y, post.count + 1)


def one_step_predictive_error(post: GaussianPosterior, y_next: float) -> float:
    """Squared residual of ``y_next`` against the current posterior mean.

    Call before ``y_next`` is absorbed.
    """
    if post.count < 1:
        raise EstimatorNotReadyError("predictive error needs at least one absorbed observation")
    r = _finite(y_next) - post.mean
    return r * r


@dataclass(frozen=True)
class WindowEstimator:
    """Mean of the most recent ``window`` observations."""

    window: int
    buffer: tuple[float, ...] = ()

    def __post_init__(self):
        if isinstance(self.window, bool) or not isinstance(self.window, int) or self.window < 1:
            raise ConfigurationError(f"window must be a positive integer, got {self.window!r}")
        if len(self.buffer) > self.window:
            raise ConfigurationError("buffer longer than window")


def window_update(est: WindowEstimator, y: float) -> WindowEstimator:
    y = _finite(y)
    buf = est.buffer + (y,)
    if len(buf) > est.window:
        buf = buf[len(buf) - est.window:]
    return WindowEstimator(est.window, buf)


def window_estimate(est: WindowEstimator) -> float:
    buf = est.buffer
    if not buf:
        raise EstimatorNotReadyError("window estimator has no observations yet")
    # shifting by the first element keeps constant buffers exact
    x0 = buf[0]
    return x0 + math.fsum(x - x0 for x in buf) / len(buf)
