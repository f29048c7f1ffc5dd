"""Per-run diagnostic quantities.

Includes the time-blind checks a conventional pipeline would run (absolute
error, residual moments), the drift-averaged limit that a stationary estimator
converges to, and a Kendall rank trend test which uses arrival order and is
therefore an audit-layer diagnostic rather than an internal one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np
from scipy.special import ndtr

from .errors import DataError, DegenerateResultError, InsufficientDataError

EXACT_MAX_N = 50
_P_FLOOR = 5e-324  # smallest positive double; keeps p-values inside (0, 1]

ALTERNATIVES = ("two-sided", "increasing", "decreasing")


def absolute_error(post_mean: float, theta_star: float) -> float:
    return abs(post_mean - theta_star)


@dataclass(frozen=True)
class ResidualStats:
    mean: float
    variance: float
    n: int


def residual_stats(y, theta_hat_final: float) -> ResidualStats:
    """Mean and sample variance (``n - 1`` denominator) of ``y - theta_hat_final``."""
    r = np.asarray(y, dtype=np.float64) - theta_hat_final
    if r.size < 2:
        raise InsufficientDataError(f"residual statistics need >= 2 values, got {r.size}")
    return ResidualStats(float(r.mean()), float(r.var(ddof=1)), int(r.size))


def prop1_limit(b_true, theta_star: float) -> float:
    """``theta_star`` plus the time-average of the realized bias.

    This is the finite-n value a consistent stationary estimator is pulled
    toward when the bias is unmodelled.
    """
    b = np.asarray(b_true, dtype=np.float64)
    if b.size == 0:
        raise InsufficientDataError("bias sequence is empty")
    return theta_star + math.fsum(b) / b.size


# --------------------------------------------------------------------------
# Kendall rank trend test
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class TrendResult:
    """Outcome of a Kendall trend test against index order.

    ``score`` is ``S = concordant - discordant``; ``method`` is ``"exact"``
    when the p-value comes from the permutation null, else ``"normal"``.
    """

    tau: float
    p_value: float
    n: int
    score: int = 0
    method: str = "normal"
    alternative: str = "two-sided"

    def to_dict(self) -> dict:
        return {
            "tau": self.tau,
            "p_value": self.p_value,
            "n": self.n,
            "score": self.score,
            "method": self.method,
            "alternative": self.alternative,
        }


def _pair_counts(x: np.ndarray) -> tuple[int, int]:
    """Concordant and discordant pair counts of ``x`` against its index."""
    n = x.size
    conc = disc = 0
    step = max(1, 4_000_000 // max(n, 1))
    for lo in range(0, n - 1, step):
        hi = min(lo + step, n - 1)
        head = x[lo:hi, None]
        later = x[None, :]
        upper = np.arange(n)[None, :] > np.arange(lo, hi)[:, None]
        conc += int(np.count_nonzero((later > head) & upper))
        disc += int(np.count_nonzero((later < head) & upper))
    return conc, disc


@lru_cache(maxsize=None)
def _inversion_counts(n: int) -> tuple[int, ...]:
    """Number of permutations of ``n`` items with ``k`` inversions, k = 0..n(n-1)/2."""
    counts = [1]
    for k in range(2, n + 1):
        new = [0] * (len(counts) + k - 1)
        window = 0
        for j in range(len(new)):
            if j < len(counts):
                window += counts[j]
            if j - k >= 0:
                window -= counts[j - k]
            new[j] = window
        counts = new
    return tuple(counts)


def _exact_upper_tail(n: int, s: int) -> Fraction:
    """Exact ``P(S >= s)`` under the tie-free permutation null."""
    counts = _inversion_counts(n)
    m = n * (n - 1) // 2
    # S = m - 2D, so S >= s  <=>  D <= (m - s) / 2
    d_max = (m - s) // 2
    if d_max < 0:
        return Fraction(0)
    if d_max >= m:
        return Fraction(1)
    return Fraction(sum(counts[: d_max + 1]), math.factorial(n))


def _exact_p(n: int, s: int, alternative: str) -> float:
    if alternative == "increasing":
        p = _exact_upper_tail(n, s)
    elif alternative == "decreasing":
        p = _exact_upper_tail(n, -s)
    else:
        p = min(Fraction(1), 2 * _exact_upper_tail(n, abs(s))) if s else Fraction(1)
    return float(p)


def _normal_p(s: int, var_s: float, alternative: str) -> float:
    sd = math.sqrt(var_s)
    if alternative == "increasing":
        return float(ndtr(-(s - 1) / sd))
    if alternative == "decreasing":
        return float(ndtr((s + 1) / sd))
    if s == 0:
        return 1.0
    return min(1.0, 2.0 * float(ndtr(-(abs(s) - 1) / sd)))


def kendall_tau_test(x, alternative: str = "two-sided") -> TrendResult:
    """Kendall's tau of ``x`` against its index order, with a p-value.

    Tau uses the tau-b tie correction (ties can only occur among values). The
    p-value is exact for tie-free sequences of length <= 50, computed from the
    distribution of inversion counts over all permutations; otherwise it uses
    the normal approximation with tie-corrected variance and a continuity
    correction of one.

    Parameters
    ----------
    x : sequence of float
        Values in arrival order, at least three.
    alternative : {"two-sided", "increasing", "decreasing"}

    Raises
    ------
    InsufficientDataError
        Fewer than three values.
    DegenerateResultError
        All values equal, so tau is undefined.
    """
    if alternative not in ALTERNATIVES:
        raise ValueError(f"alternative must be one of {ALTERNATIVES}, got {alternative!r}")
    x = np.asarray(x, dtype=np.float64).ravel()
    n = x.size
    if n < 3:
        raise InsufficientDataError(f"trend test needs >= 3 values, got {n}")
    if not np.all(np.isfinite(x)):
        raise DataError("trend test input contains non-finite values")

    conc, disc = _pair_counts(x)
    s = conc - disc
    n0 = n * (n - 1) // 2
    _, ties = np.unique(x, return_counts=True)
    ties = ties[ties > 1].astype(np.int64)
    n2 = int(np.sum(ties * (ties - 1) // 2))
    if n0 == n2:
        raise DegenerateResultError("constant sequence: Kendall's tau is undefined")
    tau = s / math.sqrt(n0 * (n0 - n2))

    if ties.size == 0 and n <= EXACT_MAX_N:
        p, method = _exact_p(n, s, alternative), "exact"
    else:
        var_s = (n * (n - 1) * (2 * n + 5) - float(np.sum(ties * (ties - 1) * (2 * ties + 5)))) / 18.0
        p, method = _normal_p(s, var_s, alternative), "normal"
    return TrendResult(
        tau=float(tau),
        p_value=max(min(p, 1.0), _P_FLOOR),
        n=n,
        score=s,
        method=method,
        alternative=alternative,
    )


def block_means(values, n_blocks: int) -> np.ndarray:
    values = np.asarray(values, dtype=np.float64)
    if n_blocks < 3:
        raise InsufficientDataError(f"need >= 3 blocks, got {n_blocks}")
    if values.size < n_blocks:
        raise InsufficientDataError(f"{values.size} values cannot fill {n_blocks} blocks")
    return np.array([b.mean() for b in np.array_split(values, n_blocks)])


def blocked_trend(values, n_blocks: int = 20, alternative: str = "two-sided") -> TrendResult:
    """Kendall trend test on the means of ``n_blocks`` contiguous blocks."""
    return kendall_tau_test(block_means(values, n_blocks), alternative=alternative)


# --------------------------------------------------------------------------
# Cumulative estimates
# --------------------------------------------------------------------------

class CumulativeEstimate(NamedTuple):
    n: int
    mean: float
    se: float | None


class RunningMoments:
    """Exact streaming sums of ``x`` and ``x**2``.

    Rational arithmetic makes every prefix result independent of how the
    prefix was accumulated, so streaming and from-scratch values agree bit for
    bit.
    """

    def __init__(self):
        self.n = 0
        self._s1 = Fraction(0)
        self._s2 = Fraction(0)

    def push(self, x: float) -> CumulativeEstimate:
        fx = Fraction(float(x))
        self.n += 1
        self._s1 += fx
        self._s2 += fx * fx
        return self.estimate()

    def estimate(self) -> CumulativeEstimate:
        n = self.n
        mean = self._s1 / n
        if n < 2:
            return CumulativeEstimate(n, float(mean), None)
        var = (self._s2 - n * mean * mean) / (n - 1)
        return CumulativeEstimate(n, float(mean), math.sqrt(float(var / n)))


def cumulative_estimates(y: Sequence[float]) -> list[CumulativeEstimate]:
    """Prefix means with standard error ``sd / sqrt(n)`` (absent for ``n < 2``)."""
    acc = RunningMoments()
    out = [acc.push(v) for v in y]
    if not out:
        raise InsufficientDataError("cumulative estimates need at least one value")
    return out
