"""Replayable session traces.

A session log stores every input sample and every derived event; replaying it
against the same scenario must reproduce the identical event stream and final
state, byte-for-byte in serialized form. The `.fslog` file is line-delimited
JSON: a header line, one record per tick, event records, then a final outcome
record.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

from .scenario import Scenario, serialize_scenario
from .sim import (Event, FirePhase, InputSample, Outcome, SimState, SprayGeometry,
                  init_session, step)

LOG_VERSION = 1

AgentFn = Callable[[SimState, Scenario], InputSample]


class LogError(ValueError):
    """Malformed, truncated or mismatched session trace."""


class ReplayDivergence(LogError):
    """Re-simulation produced a different event stream than the recorded one."""


@dataclass
class SessionLog:
    scenario_id: str
    scenario_hash: str
    tick_dt: float
    samples: list[InputSample] = field(default_factory=list)
    events: list[Event] = field(default_factory=list)
    geometry: dict[int, SprayGeometry] = field(default_factory=dict)
    final_outcome: str = "abort"  # success|timeout|abort

    @property
    def final_tick(self) -> int:
        return len(self.samples)

    def duration(self) -> float:
        return self.final_tick * self.tick_dt


def scenario_hash(s: Scenario) -> str:
    return hashlib.sha256(serialize_scenario(s).encode("utf-8")).hexdigest()


def record_session(s: Scenario, inputs: AgentFn | Iterable[InputSample]) -> SessionLog:
    """Run a session to termination, capturing samples and derived events.

    `inputs` is either an agent function (state, scenario) -> InputSample or a
    finite iterable of per-tick samples. An iterable that runs out before the
    session terminates raises LogError.
    """
    log = SessionLog(s.id, scenario_hash(s), s.tick_dt)
    state = init_session(s)
    log.events.append(Event(0, "ignite", s.initial_object.id))

    source: Iterator[InputSample] | None = None
    if not callable(inputs):
        source = iter(inputs)

    while state.outcome is Outcome.RUNNING:
        if source is None:
            sample = inputs(state, s)  # type: ignore[operator]
        else:
            try:
                sample = next(source)
            except StopIteration:
                raise LogError(
                    f"input source exhausted at tick {state.tick} before termination")
        result = step(state, s, sample)
        log.samples.append(sample)
        log.events.extend(result.events)
        if result.geometry is not None:
            log.geometry[state.tick] = result.geometry
        state = result.state

    log.final_outcome = state.outcome.value
    return log


def replay(s: Scenario, log: SessionLog):
    """Re-run a recorded log and verify it reproduces the identical events.

    Returns (final SimState, AssessmentReport). Raises LogError on scenario
    hash or tick_dt mismatch, ReplayDivergence if the regenerated event
    stream, geometry or outcome differs from the recorded one.
    """
    from .assessment import build_report  # local import to avoid a cycle

    expected_hash = scenario_hash(s)
    if log.scenario_hash != expected_hash:
        raise LogError(f"scenario hash mismatch: log has {log.scenario_hash[:12]}…, "
                       f"scenario is {expected_hash[:12]}…")
    if log.tick_dt != s.tick_dt:
        raise LogError(f"tick_dt mismatch: log {log.tick_dt}, scenario {s.tick_dt}")

    state = init_session(s)
    events: list[Event] = [Event(0, "ignite", s.initial_object.id)]
    geometry: dict[int, SprayGeometry] = {}
    for sample in log.samples:
        if state.outcome is not Outcome.RUNNING:
            raise ReplayDivergence(
                f"log has samples past termination at tick {state.tick}")
        result = step(state, s, sample)
        events.extend(result.events)
        if result.geometry is not None:
            geometry[state.tick] = result.geometry
        state = result.state
    if state.outcome is Outcome.RUNNING:
        raise ReplayDivergence("log ended before the session terminated")

    if events != log.events:
        tick = _first_divergent_tick(events, log.events)
        raise ReplayDivergence(f"event stream diverges at tick {tick}")
    if geometry != log.geometry:
        raise ReplayDivergence("spray geometry diverges from the recorded log")
    if state.outcome.value != log.final_outcome:
        raise ReplayDivergence(
            f"outcome diverges: replay {state.outcome.value}, log {log.final_outcome}")

    report = build_report(log, s)
    return state, report


def _first_divergent_tick(a: list[Event], b: list[Event]) -> int:
    for ea, eb in zip(a, b):
        if ea != eb:
            return min(ea.tick, eb.tick)
    longer = a if len(a) > len(b) else b
    return longer[min(len(a), len(b))].tick


# ---------------------------------------------------------------------------
# .fslog serialization (line-delimited JSON)


def _dump(obj: dict) -> str:
    return json.dumps(obj, separators=(",", ":"), allow_nan=False)


def serialize_log(log: SessionLog) -> str:
    lines = [_dump({
        "version": LOG_VERSION,
        "scenario_id": log.scenario_id,
        "scenario_hash": log.scenario_hash,
        "tick_dt_s": log.tick_dt,
    })]
    for tick, sample in enumerate(log.samples):
        rec: dict = {
            "t": tick,
            "mv": list(sample.move),
            "aim": list(sample.aim),
            "trig": sample.trigger,
        }
        if sample.select is not None:
            rec["sel"] = sample.select
        g = log.geometry.get(tick)
        if g is not None:
            rec["g"] = [g.theta, g.d, g.effectiveness]
        lines.append(_dump(rec))
    for ev in log.events:
        rec = {"ev": ev.kind, "t": ev.tick}
        if ev.arg is not None:
            rec["arg"] = ev.arg
        lines.append(_dump(rec))
    lines.append(_dump({"outcome": log.final_outcome}))
    return "\n".join(lines) + "\n"


def deserialize_log(text: str) -> SessionLog:
    lines = [ln for ln in text.split("\n") if ln.strip()]
    if not lines:
        raise LogError("empty trace file")

    def parse_line(i: int) -> dict:
        try:
            rec = json.loads(lines[i])
        except json.JSONDecodeError as exc:
            raise LogError(f"line {i + 1}: malformed JSON ({exc.msg})") from exc
        if not isinstance(rec, dict):
            raise LogError(f"line {i + 1}: expected a JSON object")
        return rec

    header = parse_line(0)
    for key in ("version", "scenario_id", "scenario_hash", "tick_dt_s"):
        if key not in header:
            raise LogError(f"line 1: header missing {key!r}")
    if header["version"] != LOG_VERSION:
        raise LogError(f"unsupported trace version {header['version']!r}")

    log = SessionLog(header["scenario_id"], header["scenario_hash"],
                     float(header["tick_dt_s"]))
    outcome_seen = False
    for i in range(1, len(lines)):
        rec = parse_line(i)
        if outcome_seen:
            raise LogError(f"line {i + 1}: record after final outcome")
        if "outcome" in rec:
            if rec["outcome"] not in ("success", "timeout", "abort"):
                raise LogError(f"line {i + 1}: unknown outcome {rec['outcome']!r}")
            log.final_outcome = rec["outcome"]
            outcome_seen = True
        elif "ev" in rec:
            log.events.append(Event(int(rec["t"]), rec["ev"], rec.get("arg")))
        elif "t" in rec:
            try:
                if rec["t"] != len(log.samples):
                    raise LogError(
                        f"line {i + 1}: tick {rec['t']} out of order "
                        f"(expected {len(log.samples)})")
                sample = InputSample(
                    move=tuple(rec["mv"]),
                    aim=tuple(rec["aim"]),
                    trigger=bool(rec["trig"]),
                    select=rec.get("sel"),
                )
            except (KeyError, TypeError, ValueError) as exc:
                if isinstance(exc, LogError):
                    raise
                raise LogError(f"line {i + 1}: bad tick record ({exc})") from exc
            if "g" in rec:
                g = rec["g"]
                if not (isinstance(g, list) and len(g) == 3):
                    raise LogError(f"line {i + 1}: bad geometry record")
                log.geometry[int(rec["t"])] = SprayGeometry(*map(float, g))
            log.samples.append(sample)
        else:
            raise LogError(f"line {i + 1}: unrecognized record")
    if not outcome_seen:
        raise LogError("truncated trace: missing final outcome record")
    return log
