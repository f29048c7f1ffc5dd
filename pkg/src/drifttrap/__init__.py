"""Simulation and audit toolkit for sequential inference under hidden observation drift."""

__version__ = "0.1.0"

from .audit import AuditPolicy, AuditVerdict, calibrate_policy, decoupling_detect, right_to_infer
from .diagnostics import (
    TrendResult,
    absolute_error,
    blocked_trend,
    cumulative_estimates,
    kendall_tau_test,
    prop1_limit,
    residual_stats,
)
from .drift import DriftKind, DriftSpec, ObservationRecord, ScenarioConfig, generate_stream, realize_bias
from .errors import (
    ConfigurationError,
    DataError,
    DegenerateResultError,
    DriftTrapError,
    EstimatorNotReadyError,
    InsufficientDataError,
)
from .estimators import (
    GaussianPosterior,
    WindowEstimator,
    conjugate_update,
    one_step_predictive_error,
    window_estimate,
    window_update,
)
from .figures import PRESETS, reproduce_figure
from .harness import RunTrace, TraceRow, ingest_csv, replicate, run_scenario
