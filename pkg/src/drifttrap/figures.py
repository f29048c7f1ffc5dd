"""Figure presets: canonical CSV data plus a derived SVG plot per preset.

``F1``-``F7`` cover the synthetic experiments (observations, posterior
trajectory, error versus data volume with and without drift, random-walk
drift, sliding window, confidence versus predictive error). ``E2_1``-``E2_4``
replay the same mechanics read as photometric measurements under a linear
zeropoint drift; their numbers are identical to the synthetic setting.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .audit import rolling_pred_err  # noqa: E402
from .drift import DriftSpec, ScenarioConfig  # noqa: E402
from .harness import CHECKPOINTS, RunTrace, run_scenario  # noqa: E402

PRESET_SEED = 2024
ALPHA = 0.002
SIGMA_RW = 0.01
WINDOW = 200
ROLLING = 50

_LINEAR = ScenarioConfig(drift=DriftSpec.linear(ALPHA), seed=PRESET_SEED)
_NONE = ScenarioConfig(drift=DriftSpec.none(), seed=PRESET_SEED)
_RW = ScenarioConfig(drift=DriftSpec.random_walk(SIGMA_RW), seed=PRESET_SEED)
_WINDOWED = ScenarioConfig(drift=DriftSpec.linear(ALPHA), seed=PRESET_SEED, window=WINDOW)


@dataclass(frozen=True)
class FigurePreset:
    id: str
    config: ScenarioConfig
    kind: str  # "series" | "error-curve" | "scatter"
    data: str  # which table builder to use
    title: str
    xscale: str = "linear"


PRESETS: dict[str, FigurePreset] = {p.id: p for p in [
    FigurePreset("F1", _LINEAR, "series", "observations", "Observations under hidden linear drift"),
    FigurePreset("F2", _LINEAR, "series", "posterior", "Posterior mean under hidden linear drift"),
    FigurePreset("F3", _LINEAR, "error-curve", "error", "Absolute error vs data volume, linear drift", "log"),
    FigurePreset("F4", _NONE, "error-curve", "error", "Absolute error vs data volume, no drift", "log"),
    FigurePreset("F5", _RW, "error-curve", "error", "Absolute error vs data volume, random-walk drift", "log"),
    FigurePreset("F6", _WINDOWED, "series", "window", f"Sliding-window (W={WINDOW}) estimate under linear drift"),
    FigurePreset("F7", _LINEAR, "scatter", "decoupling", "Rolling predictive error vs posterior variance"),
    FigurePreset("E2_1", _LINEAR, "series", "observations", "Photometric measurements under zeropoint drift"),
    FigurePreset("E2_2", _LINEAR, "series", "posterior", "Posterior brightness under zeropoint drift"),
    FigurePreset("E2_3", _LINEAR, "error-curve", "error", "Inference error vs data volume, zeropoint drift", "log"),
    FigurePreset("E2_4", _LINEAR, "scatter", "decoupling", "Predictive error vs posterior variance, zeropoint drift"),
]}


def normalize_id(figure_id: str) -> str:
    fid = figure_id.strip().upper().replace("-", "_")
    if fid not in PRESETS:
        raise KeyError(f"unknown figure id {figure_id!r}; choose from {sorted(PRESETS)}")
    return fid


def figure_table(preset: FigurePreset, trace: RunTrace) -> tuple[list[str], list[list]]:
    """Column names and rows of the canonical CSV for ``preset``."""
    rows = trace.rows
    if preset.data == "observations":
        return ["t", "y", "b_true"], [[r.t, r.y, r.b_true] for r in rows]
    if preset.data == "posterior":
        return ["t", "post_mean", "post_var"], [[r.t, r.post_mean, r.post_var] for r in rows]
    if preset.data == "error":
        pts = [c for c in CHECKPOINTS if c <= len(rows)]
        return ["n", "abs_error", "post_var"], [[n, rows[n - 1].abs_error, rows[n - 1].post_var] for n in pts]
    if preset.data == "window":
        return (["t", "window_est", "post_mean", "b_true"],
                [[r.t, r.window_est, r.post_mean, r.b_true] for r in rows])
    if preset.data == "decoupling":
        roll = rolling_pred_err(trace.column("pred_err"), ROLLING)
        return (["post_var", "pred_err_rolling"],
                [[r.post_var, float(m)] for r, m in zip(rows, roll) if not np.isnan(m)])
    raise ValueError(preset.data)


def _csv_text(columns, table) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in table:
        w.writerow([v if isinstance(v, int) else repr(float(v)) for v in row])
    return buf.getvalue()


def _plot(preset: FigurePreset, columns, table, trace: RunTrace, path: Path):
    data = np.array(table, dtype=np.float64)
    theta = trace.config.theta_star
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    if preset.data == "observations":
        ax.plot(data[:, 0], data[:, 1], ".", ms=1.5, alpha=0.5, label="observed y")
        ax.plot(data[:, 0], theta + data[:, 2], lw=1.5, label="hidden drifting mean")
        ax.set_xlabel("t"), ax.set_ylabel("y")
    elif preset.data == "posterior":
        sd = np.sqrt(data[:, 2])
        ax.plot(data[:, 0], data[:, 1], label="posterior mean")
        ax.fill_between(data[:, 0], data[:, 1] - 2 * sd, data[:, 1] + 2 * sd, alpha=0.3, label="±2 sd")
        ax.axhline(theta, color="k", ls="--", lw=1, label="true θ")
        ax.set_xlabel("number of observations"), ax.set_ylabel("θ estimate")
    elif preset.data == "error":
        ax.plot(data[:, 0], data[:, 1], "o-")
        ax.set_xlabel("number of observations"), ax.set_ylabel("|θ̂ − θ*|")
    elif preset.data == "window":
        ax.plot(data[:, 0], data[:, 1], label=f"window mean (W={WINDOW})")
        ax.plot(data[:, 0], data[:, 2], label="posterior mean")
        ax.axhline(theta, color="k", ls="--", lw=1, label="true θ")
        ax.set_xlabel("t"), ax.set_ylabel("estimate")
    else:
        sc = ax.scatter(data[:, 0], data[:, 1], c=np.arange(len(data)), s=2, cmap="viridis")
        fig.colorbar(sc, ax=ax, label="time order")
        ax.set_xscale("log")
        ax.invert_xaxis()
        ax.set_xlabel("posterior variance"), ax.set_ylabel(f"rolling predictive error ({ROLLING})")
    if preset.data != "decoupling":
        ax.set_xscale(preset.xscale)
    if ax.get_legend_handles_labels()[0]:
        ax.legend(fontsize=8)
    ax.set_title(preset.title, fontsize=10)
    fig.tight_layout()
    with matplotlib.rc_context({"svg.hashsalt": "drifttrap"}):
        fig.savefig(path, format="svg", metadata={
            "Date": None,
            "Title": preset.id,
            "Description": f"kind={preset.kind}; xscale={preset.xscale}; seed={trace.config.seed}",
        })
    plt.close(fig)


def reproduce_figure(figure_id: str, out_dir) -> list[Path]:
    """Write ``<id>.csv`` and ``<id>.svg`` into ``out_dir``; return both paths."""
    preset = PRESETS[normalize_id(figure_id)]
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    trace = run_scenario(preset.config)
    columns, table = figure_table(preset, trace)
    csv_path = out_dir / f"{preset.id}.csv"
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(_csv_text(columns, table))
    svg_path = out_dir / f"{preset.id}.svg"
    _plot(preset, columns, table, trace, svg_path)
    return [csv_path, svg_path]
