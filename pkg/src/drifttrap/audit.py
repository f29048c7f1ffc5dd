"""Governance checks over a completed trace.

Two detectors feed a "right to infer" verdict:

* decoupling: posterior variance keeps contracting while the rolling one-step
  predictive error rises significantly, i.e. confidence and predictive
  validity move in opposite directions;
* drift trend: a Kendall trend test on block means of the raw observations.

Both use only what a real pipeline would see (observations, its own
posterior, arrival order). Neither reads the hidden bias or the true
parameter.
"""

from __future__ import annotations

import json
from collections.abc import Mapping
from dataclasses import asdict, dataclass, field, fields
from enum import Enum
from pathlib import Path

import numpy as np
import pandas as pd

from .diagnostics import TrendResult, blocked_trend, kendall_tau_test
from .drift import DriftKind, ScenarioConfig
from .errors import ConfigurationError, DegenerateResultError, InsufficientDataError
from .harness import RunTrace, run_scenario


@dataclass(frozen=True)
class AuditPolicy:
    pred_window: int = 50
    decouple_horizon: int = 10
    trend_blocks: int = 20
    trend_alpha: float = 0.01
    min_n: int = 200

    def __post_init__(self):
        for name, lo in (("pred_window", 2), ("decouple_horizon", 3), ("trend_blocks", 3), ("min_n", 1)):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int) or v < lo:
                raise ConfigurationError(f"{name} must be an integer >= {lo}, got {v!r}")
        a = self.trend_alpha
        if isinstance(a, bool) or not isinstance(a, (int, float)) or not 0 < a < 1:
            raise ConfigurationError(f"trend_alpha must lie in (0, 1), got {a!r}")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "AuditPolicy":
        if not isinstance(data, dict):
            raise ConfigurationError("policy must be a JSON object")
        unknown = set(data) - {f.name for f in fields(cls)}
        if unknown:
            raise ConfigurationError(f"unknown policy fields: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def load(cls, path) -> "AuditPolicy":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"{path}: invalid JSON ({exc})") from None
        return cls.from_dict(data)


class Status(str, Enum):
    PROCEED = "Proceed"
    RED_FLAG = "RedFlag"
    SUSPEND = "Suspend"


@dataclass(frozen=True)
class Finding:
    check: str
    statistic: float
    threshold: float
    triggered: bool

    def to_dict(self) -> dict:
        return {"check": self.check, "statistic": self.statistic,
                "threshold": self.threshold, "triggered": self.triggered}


@dataclass(frozen=True)
class DecouplingEvidence:
    """Checkpoint series behind a decoupling decision."""

    checkpoints: tuple[int, ...]
    post_var: tuple[float, ...]
    rolling_pred_err: tuple[float, ...]
    variance_contracting: bool
    pred_err_trend: TrendResult | None
    alpha: float

    @property
    def rising(self) -> bool:
        tr = self.pred_err_trend
        return tr is not None and tr.tau > 0 and tr.p_value < self.alpha

    @property
    def triggered(self) -> bool:
        return self.variance_contracting and self.rising

    def finding(self) -> Finding:
        p = 1.0 if self.pred_err_trend is None else self.pred_err_trend.p_value
        return Finding("decoupling", p, self.alpha, self.triggered)

    def to_dict(self) -> dict:
        tr = self.pred_err_trend
        return {
            "checkpoints": list(self.checkpoints),
            "post_var": list(self.post_var),
            "rolling_pred_err": list(self.rolling_pred_err),
            "variance_contracting": self.variance_contracting,
            "pred_err_trend": None if tr is None else tr.to_dict(),
        }


@dataclass(frozen=True)
class AuditVerdict:
    status: Status
    decoupling_flag: bool
    trend: TrendResult | None
    evidence: list[Finding] = field(default_factory=list)
    decoupling: DecouplingEvidence | None = None

    def to_dict(self) -> dict:
        return {
            "status": self.status.value,
            "decoupling_flag": self.decoupling_flag,
            "trend": None if self.trend is None else self.trend.to_dict(),
            "evidence": [f.to_dict() for f in self.evidence],
            "decoupling_detail": None if self.decoupling is None else self.decoupling.to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def status_from_findings(findings) -> Status:
    hits = sum(bool(f.triggered) for f in findings)
    if hits == 0:
        return Status.PROCEED
    if hits >= 2:
        return Status.SUSPEND
    return Status.RED_FLAG


def _require_length(trace: RunTrace, policy: AuditPolicy):
    if len(trace) < policy.min_n:
        raise InsufficientDataError(
            f"trace has {len(trace)} rows; the audit policy requires at least {policy.min_n}"
        )


def rolling_pred_err(pred_err: np.ndarray, window: int) -> np.ndarray:
    """Trailing mean of ``window`` predictive errors; NaN until the window fills."""
    out = np.full(pred_err.size, np.nan)
    valid = ~np.isnan(pred_err)
    idx = np.flatnonzero(valid)
    if idx.size < window:
        return out
    vals = pred_err[idx]
    csum = np.concatenate(([0.0], np.cumsum(vals)))
    means = (csum[window:] - csum[:-window]) / window
    out[idx[window - 1:]] = means
    return out


def _checkpoint_indices(n: int, horizon: int, first_valid: int) -> np.ndarray:
    start = max(n // 2, first_valid)
    pts = np.unique(np.round(np.linspace(start, n - 1, horizon)).astype(int))
    if pts.size < 3:
        raise InsufficientDataError("trace too short for the decoupling checkpoints")
    return pts


def decoupling_detect(trace: RunTrace, policy: AuditPolicy | None = None) -> tuple[bool, DecouplingEvidence]:
    """Flag confidence rising while one-step predictive error does not improve.

    ``decouple_horizon`` checkpoints are placed evenly over the latter half
    of the trace. The flag is raised when posterior variance is strictly
    decreasing across them and the rolling predictive error at the checkpoints
    shows a significant upward Kendall trend (one-sided, level
    ``trend_alpha``).
    """
    policy = policy or AuditPolicy()
    _require_length(trace, policy)
    post_var = trace.column("post_var")
    rolling = rolling_pred_err(trace.column("pred_err"), policy.pred_window)
    finite = np.flatnonzero(~np.isnan(rolling))
    if finite.size == 0:
        raise InsufficientDataError("not enough predictive errors to fill one rolling window")
    pts = _checkpoint_indices(len(trace), policy.decouple_horizon, int(finite[0]))

    pv, pe = post_var[pts], rolling[pts]
    contracting = bool(np.all(np.diff(pv) < 0))
    try:
        trend = kendall_tau_test(pe, alternative="increasing")
    except DegenerateResultError:
        trend = None
    ev = DecouplingEvidence(
        checkpoints=tuple(int(i) + 1 for i in pts),
        post_var=tuple(float(v) for v in pv),
        rolling_pred_err=tuple(float(v) for v in pe),
        variance_contracting=contracting,
        pred_err_trend=trend,
        alpha=policy.trend_alpha,
    )
    return ev.triggered, ev


def right_to_infer(trace: RunTrace, policy: AuditPolicy | None = None) -> AuditVerdict:
    """Proceed, RedFlag or Suspend, depending on how many detectors fire."""
    policy = policy or AuditPolicy()
    _require_length(trace, policy)
    flag, dec = decoupling_detect(trace, policy)
    try:
        trend = blocked_trend(trace.column("y"), policy.trend_blocks)
        trend_hit = trend.p_value < policy.trend_alpha
        trend_p = trend.p_value
    except DegenerateResultError:
        trend, trend_hit, trend_p = None, False, 1.0
    evidence = [dec.finding(), Finding("drift_trend", trend_p, policy.trend_alpha, trend_hit)]
    return AuditVerdict(status_from_findings(evidence), flag, trend, evidence, dec)


@dataclass
class CalibrationReport:
    rates: pd.DataFrame  # scenario, check, rate
    status_rates: pd.DataFrame  # scenario, status, rate
    n_seeds: int
    policy: AuditPolicy

    def rate(self, scenario: str, check: str) -> float:
        r = self.rates
        return float(r.loc[(r.scenario == scenario) & (r.check == check), "rate"].iloc[0])

    def status_rate(self, scenario: str, status: str) -> float:
        r = self.status_rates
        return float(r.loc[(r.scenario == scenario) & (r.status == status), "rate"].iloc[0])


def calibrate_policy(scenarios: Mapping[str, ScenarioConfig], n_seeds: int,
                     policy: AuditPolicy | None = None) -> CalibrationReport:
    """Monte Carlo trigger rates of each check under each scenario.

    Seeds run from each config's own seed upward. ``scenarios`` must contain
    at least one drift-free config and one with a drift model.
    """
    policy = policy or AuditPolicy()
    if n_seeds < 10:
        raise ConfigurationError(f"n_seeds must be >= 10 for meaningful rates, got {n_seeds}")
    kinds = {cfg.drift.kind for cfg in scenarios.values()}
    if DriftKind.NONE not in kinds or kinds == {DriftKind.NONE}:
        raise ConfigurationError("calibration needs at least one drift and one no-drift scenario")

    rate_rows, status_rows = [], []
    for name, cfg in scenarios.items():
        hits = {"decoupling": 0, "drift_trend": 0}
        statuses = {s: 0 for s in Status}
        for k in range(n_seeds):
            verdict = right_to_infer(run_scenario(cfg.with_seed(cfg.seed + k)), policy)
            for f in verdict.evidence:
                hits[f.check] += f.triggered
            statuses[verdict.status] += 1
        rate_rows += [{"scenario": name, "check": c, "rate": h / n_seeds} for c, h in hits.items()]
        status_rows += [{"scenario": name, "status": s.value, "rate": c / n_seeds}
                        for s, c in statuses.items()]
    return CalibrationReport(pd.DataFrame(rate_rows), pd.DataFrame(status_rows), n_seeds, policy)
