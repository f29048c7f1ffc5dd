"""Scenario runner, trace files, multi-seed replication and CSV ingestion."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Sequence

import numpy as np
import pandas as pd

from . import __version__
from .diagnostics import absolute_error
from .drift import ScenarioConfig, stream_arrays
from .errors import DataError, InsufficientDataError
from .estimators import (
    GaussianPosterior,
    WindowEstimator,
    conjugate_update,
    one_step_predictive_error,
    window_estimate,
    window_update,
)

TRACE_COLUMNS = ("t", "y", "b_true", "post_mean", "post_var", "abs_error", "pred_err", "window_est")

# log-spaced checkpoints for error-vs-data curves
CHECKPOINTS = (50, 100, 200, 500, 1000, 2000, 5000)


@dataclass(frozen=True)
class TraceRow:
    t: int
    y: float
    b_true: float
    post_mean: float
    post_var: float
    abs_error: float
    pred_err: float | None = None
    window_est: float | None = None


@dataclass
class RunTrace:
    """Per-step record of one run.

    ``config`` is ``None`` for traces read back from CSV, which carry only the
    row data.
    """

    config: ScenarioConfig | None
    rows: list[TraceRow]
    metadata: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.rows)

    def column(self, name: str) -> np.ndarray:
        """Column as a float array; absent cells become NaN."""
        if name not in TRACE_COLUMNS:
            raise KeyError(name)
        vals = [getattr(r, name) for r in self.rows]
        return np.array([np.nan if v is None else v for v in vals], dtype=np.float64)


def run_metadata(config: ScenarioConfig, **extra) -> dict:
    meta = {
        "tool_version": __version__,
        "created": datetime.now(timezone.utc).replace(microsecond=0).isoformat(),
        "seed": config.seed,
        "config_hash": config.config_hash(),
    }
    meta.update(extra)
    return meta


def run_scenario(config: ScenarioConfig) -> RunTrace:
    """Generate the stream and run the estimators step by step.

    The predictive error at step ``t`` is taken against the posterior fitted
    on ``y_1..y_{t-1}``, before ``y_t`` is absorbed.
    """
    y, bias = stream_arrays(config)
    sigma, theta_star = config.sigma, config.theta_star
    post = GaussianPosterior.prior(config.prior_mean, config.prior_var)
    win = WindowEstimator(config.window) if config.window else None

    rows = []
    for i, (yt, bt) in enumerate(zip(y.tolist(), bias.tolist())):
        pred = one_step_predictive_error(post, yt) if post.count else None
        post = conjugate_update(post, yt, sigma)
        west = None
        if win is not None:
            win = window_update(win, yt)
            west = window_estimate(win)
        mean = post.mean
        rows.append(TraceRow(i + 1, yt, bt, mean, post.variance,
                             absolute_error(mean, theta_star), pred, west))
    return RunTrace(config, rows, run_metadata(config))


# --------------------------------------------------------------------------
# trace CSV
# --------------------------------------------------------------------------

def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, int):
        return str(v)
    return repr(float(v))


def trace_to_csv(trace: RunTrace) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRACE_COLUMNS)
    for r in trace.rows:
        w.writerow([_fmt(getattr(r, c)) for c in TRACE_COLUMNS])
    return buf.getvalue()


def write_trace_csv(trace: RunTrace, path) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(trace_to_csv(trace))
    return path


def read_trace_csv(path) -> RunTrace:
    """Load a trace written by :func:`write_trace_csv`."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise DataError(f"{path}: empty trace file")
        if tuple(header) != TRACE_COLUMNS:
            raise DataError(f"{path}: expected columns {','.join(TRACE_COLUMNS)}, got {','.join(header)}")
        rows = []
        for lineno, rec in enumerate(reader, start=2):
            if len(rec) != len(TRACE_COLUMNS):
                raise DataError(f"{path}: line {lineno} has {len(rec)} fields")
            try:
                t = int(rec[0])
                vals = [float(v) if v != "" else None for v in rec[1:]]
            except ValueError as exc:
                raise DataError(f"{path}: line {lineno}: {exc}") from None
            if any(v is None for v in vals[:5]):
                raise DataError(f"{path}: line {lineno}: missing required value")
            rows.append(TraceRow(t, *vals))
    if not rows:
        raise DataError(f"{path}: trace has no rows")
    return RunTrace(None, rows, {})


# --------------------------------------------------------------------------
# replication
# --------------------------------------------------------------------------

def _checkpoints(n: int) -> list[int]:
    pts = [c for c in CHECKPOINTS if c <= n]
    if not pts or pts[-1] != n:
        pts.append(n)
    return pts


def replicate_runs(config: ScenarioConfig, n_seeds: int) -> pd.DataFrame:
    """Checkpoint values for seeds ``config.seed, config.seed + 1, ...``.

    One row per (seed, checkpoint); columns ``seed, n, abs_error, post_mean,
    post_var, pred_err, window_est``.
    """
    if n_seeds < 1:
        raise InsufficientDataError("n_seeds must be >= 1")
    pts = _checkpoints(config.n)
    records = []
    for k in range(n_seeds):
        trace = run_scenario(config.with_seed(config.seed + k))
        for n in pts:
            r = trace.rows[n - 1]
            records.append({
                "seed": config.seed + k,
                "n": n,
                "abs_error": r.abs_error,
                "post_mean": r.post_mean,
                "post_var": r.post_var,
                "pred_err": np.nan if r.pred_err is None else r.pred_err,
                "window_est": np.nan if r.window_est is None else r.window_est,
            })
    return pd.DataFrame.from_records(records)


def summarize_runs(runs: pd.DataFrame) -> pd.DataFrame:
    metrics = ["abs_error", "post_var", "pred_err"]
    if runs["window_est"].notna().any():
        metrics.append("window_est")
    g = runs.groupby("n", sort=True)[metrics]
    mean = g.mean().add_suffix("_mean")
    sd = g.std(ddof=1).add_suffix("_sd")
    out = pd.concat([mean, sd], axis=1)
    cols = [f"{m}_{s}" for m in metrics for s in ("mean", "sd")]
    out = out[cols].reset_index()
    out.insert(1, "n_seeds", runs["seed"].nunique())
    return out


def replicate(config: ScenarioConfig, n_seeds: int) -> pd.DataFrame:
    """Per-checkpoint mean and standard deviation across ``n_seeds`` runs."""
    return summarize_runs(replicate_runs(config, n_seeds))


# --------------------------------------------------------------------------
# external data
# --------------------------------------------------------------------------

def _parse_real(text: str, what: str, row: int) -> float:
    try:
        v = float(text)
    except (TypeError, ValueError):
        raise DataError(f"row {row}: cannot parse {what} value {text!r}") from None
    if not math.isfinite(v):
        raise DataError(f"row {row}: non-finite {what} value {text!r}")
    return v


def ingest_csv(path, value_column: str, time_column: str | None = None) -> list[tuple[float, float]]:
    """Read ``(t, value)`` pairs from a CSV file with a header row.

    Without ``time_column`` the 1-based data-row number serves as ``t``.
    With one, pairs are sorted by time (stable for equal times). Row numbers
    in error messages count data rows, starting at 1 below the header.
    """
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise DataError(f"{path}: empty file")
        for col in (value_column, time_column):
            if col is not None and col not in reader.fieldnames:
                raise DataError(f"{path}: no column named {col!r} (have {reader.fieldnames})")
        out = []
        for i, rec in enumerate(reader, start=1):
            v = _parse_real(rec[value_column], value_column, i)
            t = float(i) if time_column is None else _parse_real(rec[time_column], time_column, i)
            out.append((t, v))
    if not out:
        raise DataError(f"{path}: no data rows")
    if time_column is not None:
        out.sort(key=lambda p: p[0])
    return out


def values_only(pairs: Sequence[tuple[float, float]]) -> np.ndarray:
    return np.array([v for _, v in pairs], dtype=np.float64)
