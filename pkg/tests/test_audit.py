import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from drifttrap.audit import (
    AuditPolicy,
    Finding,
    Status,
    calibrate_policy,
    decoupling_detect,
    right_to_infer,
    rolling_pred_err,
    status_from_findings,
)
from drifttrap.drift import DriftSpec, ScenarioConfig
from drifttrap.errors import ConfigurationError, InsufficientDataError
from drifttrap.harness import RunTrace, TraceRow, run_scenario


def synthetic_trace(n, pred_err, y=None):
    y = np.zeros(n) if y is None else y
    rows = [
        TraceRow(t, float(y[t - 1]), 0.0, 0.0, 1.0 / t, 0.0, None if t == 1 else float(pred_err[t - 1]))
        for t in range(1, n + 1)
    ]
    return RunTrace(None, rows)


def test_rolling_pred_err():
    pe = np.array([np.nan, 1.0, 2.0, 3.0, 4.0])
    out = rolling_pred_err(pe, 2)
    assert np.isnan(out[:2]).all()
    assert out[2:].tolist() == [1.5, 2.5, 3.5]


def test_constructed_rising_error_flags():
    n = 1000
    pe = np.linspace(1.0, 5.0, n)
    flag, ev = decoupling_detect(synthetic_trace(n, pe))
    assert flag and ev.variance_contracting
    assert ev.pred_err_trend.tau == 1.0
    assert len(ev.checkpoints) == 10 and min(ev.checkpoints) >= n // 2


def test_constructed_flat_error_does_not_flag():
    # a flat predictive error is what an undrifted stream produces, so it must not trip the detector
    n = 1000
    flag, ev = decoupling_detect(synthetic_trace(n, np.ones(n)))
    assert ev.variance_contracting
    assert ev.pred_err_trend is None
    assert not flag


def test_no_contraction_no_flag():
    n = 1000
    rows = [TraceRow(t, 0.0, 0.0, 0.0, 1.0, 0.0, None if t == 1 else float(t)) for t in range(1, n + 1)]
    flag, ev = decoupling_detect(RunTrace(None, rows))
    assert not ev.variance_contracting and not flag


def test_audit_ignores_hidden_fields():
    tr = run_scenario(ScenarioConfig(n=1000, drift=DriftSpec.linear(0.002), seed=3))
    scrubbed = RunTrace(None, [
        TraceRow(r.t, r.y, np.nan, r.post_mean, r.post_var, np.nan, r.pred_err) for r in tr.rows
    ])
    assert right_to_infer(tr).to_dict() == right_to_infer(scrubbed).to_dict()


def test_short_trace_rejected():
    tr = run_scenario(ScenarioConfig(n=150, seed=1))
    with pytest.raises(InsufficientDataError):
        right_to_infer(tr)
    with pytest.raises(InsufficientDataError):
        decoupling_detect(tr)


def test_linear_drift_suspends_and_no_drift_proceeds():
    drift = run_scenario(ScenarioConfig(drift=DriftSpec.linear(0.002), seed=1))
    clean = run_scenario(ScenarioConfig(seed=1))
    v = right_to_infer(drift)
    assert v.status is Status.SUSPEND and v.decoupling_flag
    assert right_to_infer(clean).status is Status.PROCEED


def test_verdict_is_pure():
    tr = run_scenario(ScenarioConfig(n=2000, drift=DriftSpec.random_walk(0.01), seed=5))
    assert right_to_infer(tr).to_json() == right_to_infer(tr).to_json()


def test_verdict_json_shape():
    v = right_to_infer(run_scenario(ScenarioConfig(n=1000, seed=2)))
    doc = json.loads(v.to_json())
    assert doc["status"] in {"Proceed", "RedFlag", "Suspend"}
    for item in doc["evidence"]:
        assert set(item) == {"check", "statistic", "threshold", "triggered"}
    assert {e["check"] for e in doc["evidence"]} == {"decoupling", "drift_trend"}


@given(st.lists(st.booleans(), min_size=0, max_size=4), st.booleans())
def test_status_monotone_severity(flags, extra_hit):
    findings = [Finding(f"c{i}", 0.0, 0.0, f) for i, f in enumerate(flags)]
    rank = {Status.PROCEED: 0, Status.RED_FLAG: 1, Status.SUSPEND: 2}
    before = status_from_findings(findings)
    after = status_from_findings(findings + [Finding("x", 0.0, 0.0, True)])
    assert rank[after] >= rank[before]
    if before is Status.PROCEED:
        assert not any(flags)
    if before is Status.SUSPEND:
        assert any(flags)


def test_policy_validation_and_json(tmp_path):
    AuditPolicy()
    for bad in ({"pred_window": 1}, {"decouple_horizon": 2}, {"trend_blocks": 2},
                {"trend_alpha": 0.0}, {"trend_alpha": 1.0}):
        with pytest.raises(ConfigurationError):
            AuditPolicy(**bad)
    p = tmp_path / "policy.json"
    p.write_text(json.dumps({"pred_window": 40, "trend_alpha": 0.05}))
    pol = AuditPolicy.load(p)
    assert pol.pred_window == 40 and pol.trend_alpha == 0.05 and pol.min_n == 200
    p.write_text(json.dumps({"window": 40}))
    with pytest.raises(ConfigurationError):
        AuditPolicy.load(p)


def test_calibration_report_shape():
    report = calibrate_policy(
        {"F3": ScenarioConfig(n=600, drift=DriftSpec.linear(0.002)), "F4": ScenarioConfig(n=600)},
        n_seeds=10,
    )
    assert len(report.rates) == 4
    assert report.rates["rate"].between(0, 1).all()
    assert set(report.rates.check) == {"decoupling", "drift_trend"}


def test_calibration_rejects_bad_input():
    with pytest.raises(ConfigurationError):
        calibrate_policy({"a": ScenarioConfig(n=300), "b": ScenarioConfig(n=300)}, 20)
    with pytest.raises(ConfigurationError):
        calibrate_policy({"a": ScenarioConfig(n=300, drift=DriftSpec.linear(0.002)), "b": ScenarioConfig(n=300)}, 9)


def test_calibration_trend_null_rate():
    report = calibrate_policy(
        {"null": ScenarioConfig(n=400), "lin": ScenarioConfig(n=400, drift=DriftSpec.linear(0.002))},
        n_seeds=1000,
        policy=AuditPolicy(trend_alpha=0.05),
    )
    assert abs(report.rate("null", "drift_trend") - 0.05) <= 0.02


def test_calibration_alpha_zero_matches_null():
    scen = {"null": ScenarioConfig(n=400), "lin0": ScenarioConfig(n=400, drift=DriftSpec.linear(0.0))}
    report = calibrate_policy(scen, n_seeds=50)
    for check in ("decoupling", "drift_trend"):
        assert abs(report.rate("null", check) - report.rate("lin0", check)) <= 0.03
