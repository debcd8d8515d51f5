"""Performance scoring over a completed session log.

A "spray tick" is a tick with the trigger held while an extinguisher is
selected. A spray tick is "effective" when its recorded spray geometry has
effectiveness >= EFFECTIVE_E_MIN (which already implies being within range).
"""
from __future__ import annotations

import json
from dataclasses import dataclass

from .scenario import Scenario
from .sessionlog import LogError, SessionLog

# Minimum effectiveness for a spray sample to count as aimed at the fire base.
EFFECTIVE_E_MIN = 0.25

NO_SPRAY_FLAG = "no-spray"


@dataclass(frozen=True)
class AssessmentReport:
    outcome: str  # success|timeout
    time_taken: float | None  # None = DNF
    response_time: float | None  # first effective spray; None if never
    first_trigger_time: float | None
    aiming_score: float  # percentage in [0, 100]
    correct_usage: float  # fraction in [0, 1]
    evacuation_completion: float  # fraction in [0, 1]
    overall: float  # unweighted mean of the three fraction scores
    flags: tuple[str, ...]
    per_fire: tuple[tuple[str, float | None], ...]  # (object id, extinguish time)

    @property
    def dnf(self) -> bool:
        return self.time_taken is None


def _spray_ticks(log: SessionLog) -> list[int]:
    """Ticks with trigger held and an extinguisher selected, derived the same
    way the simulation derives them (selection changes come from the event
    stream, so unknown-id selections are ignored consistently)."""
    changes = {ev.tick: ev.arg for ev in log.events if ev.kind == "select"}
    selected: str | None = None
    out = []
    for tick, sample in enumerate(log.samples):
        if tick in changes:
            selected = changes[tick]
        if sample.trigger and selected is not None:
            out.append(tick)
    return out


def _effective(log: SessionLog, tick: int) -> bool:
    g = log.geometry.get(tick)
    return g is not None and g.effectiveness >= EFFECTIVE_E_MIN


def aiming_counts(log: SessionLog) -> tuple[int, int]:
    """(F, n): effective spray ticks and total spray ticks."""
    ticks = _spray_ticks(log)
    return sum(1 for t in ticks if _effective(log, t)), len(ticks)


def aiming_score(log: SessionLog) -> float:
    """F/n * 100; 0 when no spray ever happened."""
    f, n = aiming_counts(log)
    if n == 0:
        return 0.0
    return f / n * 100.0


def response_time(log: SessionLog) -> float | None:
    """Time of the first effective spray tick; None if none occurred."""
    for tick in _spray_ticks(log):
        if _effective(log, tick):
            return tick * log.tick_dt
    return None


def first_trigger_time(log: SessionLog) -> float | None:
    for tick, sample in enumerate(log.samples):
        if sample.trigger:
            return tick * log.tick_dt
    return None


def correct_usage(log: SessionLog) -> float:
    """Fraction of spray ticks not flagged wrong-extinguisher; 0 when none."""
    ticks = _spray_ticks(log)
    if not ticks:
        return 0.0
    wrong = {ev.tick for ev in log.events if ev.kind == "wrong_extinguisher"}
    ok = sum(1 for t in ticks if t not in wrong)
    return ok / len(ticks)


def evacuation_completion(log: SessionLog, s: Scenario) -> float:
    """(in-order waypoints visited + exit reached) / (waypoint count + 1)."""
    visited = sum(1 for ev in log.events if ev.kind == "waypoint")
    exited = any(ev.kind == "exit" for ev in log.events)
    return (visited + (1 if exited else 0)) / (len(s.evacuation.waypoints) + 1)


def build_report(log: SessionLog, s: Scenario) -> AssessmentReport:
    """Assemble the full scorecard from a terminated session log."""
    if log.final_outcome not in ("success", "timeout"):
        raise LogError(f"cannot assess an incomplete session (outcome {log.final_outcome!r})")

    _, n = aiming_counts(log)
    flags: list[str] = []
    if n == 0:
        flags.append(NO_SPRAY_FLAG)

    ignited = [ev.arg for ev in log.events if ev.kind in ("ignite", "spread")]
    out_at = {ev.arg: ev.tick * log.tick_dt
              for ev in log.events if ev.kind == "extinguished"}
    per_fire = tuple((str(oid), out_at.get(oid)) for oid in ignited)

    aim = aiming_score(log)
    usage = correct_usage(log)
    evac = evacuation_completion(log, s)
    return AssessmentReport(
        outcome=log.final_outcome,
        time_taken=log.duration() if log.final_outcome == "success" else None,
        response_time=response_time(log),
        first_trigger_time=first_trigger_time(log),
        aiming_score=aim,
        correct_usage=usage,
        evacuation_completion=evac,
        overall=(aim / 100.0 + usage + evac) / 3.0,
        flags=tuple(flags),
        per_fire=per_fire,
    )


def report_to_dict(r: AssessmentReport) -> dict:
    return {
        "outcome": r.outcome,
        "time_taken_s": r.time_taken,
        "dnf": r.dnf,
        "response_time_s": r.response_time,
        "first_trigger_s": r.first_trigger_time,
        "aiming_score_pct": r.aiming_score,
        "correct_usage": r.correct_usage,
        "evacuation_completion": r.evacuation_completion,
        "overall": r.overall,
        "flags": list(r.flags),
        "per_fire": [{"id": oid, "extinguished_at_s": t} for oid, t in r.per_fire],
        "config": {"effective_E_min": EFFECTIVE_E_MIN},
    }


def report_to_json(r: AssessmentReport) -> str:
    """Canonical JSON form (stable key order, compact floats)."""
    return json.dumps(report_to_dict(r), indent=2, allow_nan=False) + "\n"
