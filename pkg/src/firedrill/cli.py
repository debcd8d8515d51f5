"""Command-line entry point.

Exit codes: 0 success outcome, 2 timeout (DNF), 1 any error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .agents import get_agent
from .analytics import (AnalyticsError, emit_plot_data, load_attempts, per_user_trend,
                        phase_stats)
from .assessment import build_report, report_to_json
from .scenario import ScenarioError, parse_scenario, validate
from .sessionlog import (LogError, deserialize_log, record_session, replay,
                         serialize_log)

FIXTURES = Path(__file__).parent / "fixtures"


def _load_scenario(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_scenario(text)


def cmd_run(args: argparse.Namespace) -> int:
    s = _load_scenario(args.scenario)
    if args.agent is not None:
        agent = get_agent(args.agent)
        session_log = record_session(s, agent)
        report = build_report(session_log, s)
        out_path = Path(args.out) if args.out else Path(f"{s.id}.fslog")
        out_path.write_text(serialize_log(session_log), encoding="utf-8")
    else:
        session_log = deserialize_log(Path(args.trace).read_text(encoding="utf-8"))
        _, report = replay(s, session_log)

    report_json = report_to_json(report)
    if args.report:
        Path(args.report).write_text(report_json, encoding="utf-8")
    if args.format == "json" or not args.report:
        sys.stdout.write(report_json)
    elif args.format == "text":
        print(f"outcome: {report.outcome}  time: "
              f"{'DNF' if report.dnf else f'{report.time_taken:.2f}s'}  "
              f"aiming: {report.aiming_score:.1f}%  usage: {report.correct_usage:.2f}  "
              f"evacuation: {report.evacuation_completion:.2f}")
    return 0 if report.outcome == "success" else 2


def cmd_validate(args: argparse.Namespace) -> int:
    try:
        s = _load_scenario(args.scenario)
    except ScenarioError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    violations = validate(s)
    if not violations:
        print("OK")
        return 0
    for v in violations:
        print(str(v), file=sys.stderr)
    return 1


def cmd_analyze(args: argparse.Namespace) -> int:
    path = Path(args.csv)
    try:
        ds = load_attempts(path.read_text(encoding="utf-8"))
        stats = phase_stats(ds)
    except OSError as exc:
        print(f"cannot read {path}: {exc.strerror}", file=sys.stderr)
        return 1

    if args.out:
        Path(args.out).write_text(emit_plot_data(stats), encoding="utf-8")

    if args.format == "json":
        payload = {
            "phases": [
                {"phase": st.phase, "completed": st.completed, "dnf": st.dnf,
                 "mean_s": st.mean_s}
                for st in stats
            ],
            "trends": [
                {"user": tr.user, "first_s": tr.first_s, "last_s": tr.last_s,
                 "delta_s": tr.delta_s, "flagged": tr.flagged}
                for tr in per_user_trend(ds)
            ],
        }
        json.dump(payload, sys.stdout, indent=2)
        sys.stdout.write("\n")
    elif args.format == "csv":
        sys.stdout.write(emit_plot_data(stats))
    else:
        print(f"{'phase':<14}{'completed':>10}{'dnf':>6}{'mean_s':>10}")
        for st in stats:
            mean = "-" if st.mean_s is None else f"{st.mean_s:.3f}"
            print(f"{st.phase:<14}{st.completed:>10}{st.dnf:>6}{mean:>10}")
        print()
        print("per-user trend (first -> last completed):")
        for tr in per_user_trend(ds):
            if tr.flagged:
                print(f"  {tr.user}: fewer than 2 completions")
            else:
                print(f"  {tr.user}: {tr.first_s:g}s -> {tr.last_s:g}s "
                      f"({tr.delta_s:+g}s)")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    from .server import run_server

    s = _load_scenario(args.scenario)
    try:
        run_server(s, host=args.host, port=args.port, log_dir=args.log_dir)
    except OSError as exc:
        print(f"cannot listen on port {args.port}: {exc.strerror}", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="firedrill",
        description="Deterministic fire-emergency training simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a session with an agent or replay a trace")
    p_run.add_argument("--scenario", required=True)
    src = p_run.add_mutually_exclusive_group(required=True)
    src.add_argument("--agent",
                     help="builtin agent: perfect, idle, delayed:<s>, "
                          "wrong-extinguisher, random:<seed>")
    src.add_argument("--trace", help="replay a recorded .fslog")
    p_run.add_argument("--out", help="output .fslog path (agent runs)")
    p_run.add_argument("--report", help="write report JSON here")
    p_run.add_argument("--format", choices=["json", "text"], default="json")
    p_run.set_defaults(func=cmd_run)

    p_val = sub.add_parser("validate", help="validate a scenario file")
    p_val.add_argument("--scenario", required=True)
    p_val.set_defaults(func=cmd_validate)

    p_an = sub.add_parser("analyze", help="phase statistics over an attempts CSV")
    p_an.add_argument("--csv", required=True)
    p_an.add_argument("--out", help="write plot-ready CSV here")
    p_an.add_argument("--format", choices=["json", "csv", "text"], default="text")
    p_an.set_defaults(func=cmd_analyze)

    p_srv = sub.add_parser("serve", help="serve live sessions over WebSocket")
    p_srv.add_argument("--scenario", required=True)
    p_srv.add_argument("--host", default="127.0.0.1")
    p_srv.add_argument("--port", type=int, default=8765)
    p_srv.add_argument("--log-dir", help="persist session .fslog files here")
    p_srv.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ScenarioError, LogError, AnalyticsError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
