"""Command-line entry point.

Exit status: 0 success, 1 data/config error, 2 usage error, 3 audit verdict
``Suspend``. Machine-readable output (JSON or CSV) goes to stdout or the
named file; messages go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, replace

from . import __version__
from .audit import AuditPolicy, Status, right_to_infer
from .diagnostics import blocked_trend, kendall_tau_test, prop1_limit, residual_stats
from .drift import load_config
from .errors import DriftTrapError
from .figures import reproduce_figure
from .harness import ingest_csv, read_trace_csv, replicate, run_scenario, values_only, write_trace_csv

EXIT_OK, EXIT_DATA, EXIT_USAGE, EXIT_SUSPEND = 0, 1, 2, 3


def _emit_json(obj):
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def cmd_simulate(args) -> int:
    config = load_config(args.config)
    override = args.seed is not None
    if override:
        config = replace(config, seed=args.seed)
    trace = run_scenario(config)
    trace.metadata["seed_override"] = override
    write_trace_csv(trace, args.out)
    if args.meta:
        meta = dict(trace.metadata, config=config.to_dict())
        with open(args.meta, "w", encoding="utf-8") as fh:
            json.dump(meta, fh, indent=2)
            fh.write("\n")
    print(f"wrote {len(trace)} rows to {args.out}", file=sys.stderr)
    return EXIT_OK


def cmd_diagnose(args) -> int:
    trace = read_trace_csv(args.trace)
    y, b = trace.column("y"), trace.column("b_true")
    final = trace.rows[-1].post_mean
    limit = prop1_limit(b, args.theta_star)
    _emit_json({
        "n": len(trace),
        "final_post_mean": final,
        "final_abs_error": abs(final - args.theta_star),
        "residuals": asdict(residual_stats(y, final)),
        "prop1_limit": limit,
        "prop1_gap": abs(final - limit),
    })
    return EXIT_OK


def cmd_audit(args) -> int:
    policy = AuditPolicy.load(args.policy) if args.policy else AuditPolicy()
    verdict = right_to_infer(read_trace_csv(args.trace), policy)
    text = verdict.to_json() + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(f"verdict: {verdict.status.value}", file=sys.stderr)
    return EXIT_SUSPEND if verdict.status is Status.SUSPEND else EXIT_OK


def cmd_trend(args) -> int:
    values = values_only(ingest_csv(args.input, args.value_col, args.time_col))
    if args.blocks:
        result = blocked_trend(values, args.blocks, alternative=args.alternative)
    else:
        result = kendall_tau_test(values, alternative=args.alternative)
    _emit_json(result.to_dict())
    return EXIT_OK


def cmd_replicate(args) -> int:
    config = load_config(args.config)
    if args.seed is not None:
        config = replace(config, seed=args.seed)
    table = replicate(config, args.seeds)
    text = table.to_csv(index=False, lineterminator="\n")
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_reproduce(args) -> int:
    try:
        paths = reproduce_figure(args.figure, args.out)
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return EXIT_USAGE
    for p in paths:
        print(f"wrote {p}", file=sys.stderr)
    return EXIT_OK


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="drifttrap",
        description="Simulate, diagnose and audit sequential inference under hidden observation drift.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("simulate", help="run one scenario and write its trace CSV")
    p.add_argument("--config", required=True, help="scenario config JSON")
    p.add_argument("--out", required=True, help="trace CSV to write")
    p.add_argument("--seed", type=int, help="override the config seed")
    p.add_argument("--meta", help="also write run metadata JSON here")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("diagnose", help="residual statistics and bias-limit gap of a trace")
    p.add_argument("trace")
    p.add_argument("--theta-star", type=float, required=True, help="true parameter value")
    p.set_defaults(func=cmd_diagnose)

    p = sub.add_parser("audit", help="right-to-infer verdict for a trace (exit 3 on Suspend)")
    p.add_argument("trace")
    p.add_argument("--policy", help="audit policy JSON (defaults if omitted)")
    p.add_argument("--out", help="write verdict JSON here instead of stdout")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("trend", help="Kendall trend test on a CSV column")
    p.add_argument("--input", required=True)
    p.add_argument("--value-col", required=True)
    p.add_argument("--time-col")
    p.add_argument("--blocks", type=_positive, help="test block means instead of raw values")
    p.add_argument("--alternative", choices=["two-sided", "increasing", "decreasing"], default="two-sided")
    p.set_defaults(func=cmd_trend)

    p = sub.add_parser("replicate", help="multi-seed checkpoint summary as CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--seeds", type=_positive, required=True)
    p.add_argument("--seed", type=int, help="first seed (overrides the config seed)")
    p.add_argument("--out", help="write CSV here instead of stdout")
    p.set_defaults(func=cmd_replicate)

    p = sub.add_parser("reproduce", help="write <figure>.csv and <figure>.svg")
    p.add_argument("--figure", required=True, help="F1..F7 or E2_1..E2_4")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (DriftTrapError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
