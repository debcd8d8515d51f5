"""Deterministic fixed-timestep simulation: fire spread, spray physics,
suppression, user movement and completion detection.

All physics is plain 64-bit float arithmetic with a fixed order of operations;
the same scenario and input sequence always produce bit-identical trajectories.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from . import geometry as geo
from .geometry import Point2
from .scenario import ExtinguisherSpec, HazardClass, Scenario, ScenarioError, validate

UNIT_TOL = 1e-9


class FirePhase(str, Enum):
    UNLIT = "unlit"
    BURNING = "burning"
    EXTINGUISHED = "extinguished"


class Outcome(str, Enum):
    RUNNING = "running"
    SUCCESS = "success"
    TIMEOUT = "timeout"


@dataclass(frozen=True)
class InputSample:
    """One tick of trainee input."""

    move: Point2 = (0.0, 0.0)
    aim: Point2 = (1.0, 0.0)
    trigger: bool = False
    select: str | None = None

    def __post_init__(self) -> None:
        m = geo.norm(self.move)
        if not (m <= UNIT_TOL or abs(m - 1.0) <= UNIT_TOL):
            raise ValueError(f"move must be a unit or zero vector, |move|={m}")
        if abs(geo.norm(self.aim) - 1.0) > UNIT_TOL:
            raise ValueError(f"aim must be a unit vector, |aim|={geo.norm(self.aim)}")


@dataclass(frozen=True)
class FireState:
    object_id: str
    phase: FirePhase
    intensity: float
    progress: float  # accumulated effectiveness-seconds while sprayed


@dataclass(frozen=True)
class SprayGeometry:
    theta: float  # radians between aim and the direction to the fire base
    d: float  # meters between user and fire base
    effectiveness: float  # in [0, 1]


@dataclass(frozen=True)
class Event:
    tick: int
    kind: str  # ignite|spread|extinguished|wrong_extinguisher|waypoint|exit|select
    arg: str | int | None = None


@dataclass(frozen=True)
class SimState:
    tick: int
    user_pos: Point2
    current_aim: Point2
    selected: str | None
    fires: dict[str, FireState]
    visited_waypoints: int
    exit_reached: bool
    outcome: Outcome

    def time(self, tick_dt: float) -> float:
        return self.tick * tick_dt


@dataclass(frozen=True)
class StepResult:
    state: SimState
    events: tuple[Event, ...]
    geometry: SprayGeometry | None  # present when a spray was attempted this tick


def init_session(s: Scenario) -> SimState:
    violations = validate(s)
    if violations:
        raise ScenarioError("invalid scenario: " + "; ".join(str(v) for v in violations))
    initial = s.initial_object
    fires = {
        obj.id: FireState(obj.id, FirePhase.BURNING, obj.max_intensity, 0.0)
        if obj.id == initial.id
        else FireState(obj.id, FirePhase.UNLIT, 0.0, 0.0)
        for obj in s.objects
    }
    return SimState(
        tick=0,
        user_pos=s.user_spawn,
        current_aim=(1.0, 0.0),
        selected=None,
        fires=fires,
        visited_waypoints=0,
        exit_reached=False,
        outcome=Outcome.RUNNING,
    )


def spray_effectiveness(user_pos: Point2, aim: Point2, fire_pos: Point2,
                        d_max: float) -> SprayGeometry:
    """Aim/distance falloff: E = cos(theta) * (1 - d/d_max), clamped to [0, 1].

    E is forced to 0 beyond the maximum effective range or when aiming away
    (theta >= pi/2). At d = 0 the angle is defined as 0.
    """
    d = geo.dist(user_pos, fire_pos)
    if d == 0.0:
        theta = 0.0
    else:
        to_fire = geo.sub(fire_pos, user_pos)
        cos_theta = geo.dot(aim, to_fire) / d
        cos_theta = max(-1.0, min(1.0, cos_theta))
        theta = math.acos(cos_theta)
    if d >= d_max or theta >= math.pi / 2:
        e = 0.0
    else:
        e = math.cos(theta) * (1.0 - d / d_max)
        e = max(0.0, min(1.0, e))
    return SprayGeometry(theta=theta, d=d, effectiveness=e)


def apply_suppression(f: FireState, effectiveness: float, ext: ExtinguisherSpec,
                      hazard: HazardClass, dt: float,
                      max_intensity: float | None = None,
                      threshold_mode: bool = False) -> tuple[FireState, bool]:
    """One tick of spraying; returns (new state, wrong-extinguisher flag).

    An incompatible extinguisher leaves the fire untouched. Otherwise intensity
    drops by rate*E*dt and progress accumulates E*dt; the fire is out when
    intensity reaches 0 (or, in threshold mode, when progress reaches
    max_intensity/rate).
    """
    if hazard not in ext.effective_classes:
        return f, True
    intensity = max(0.0, f.intensity - ext.extinguish_rate * effectiveness * dt)
    progress = f.progress + effectiveness * dt
    if threshold_mode and max_intensity is not None:
        out = progress >= max_intensity / ext.extinguish_rate
    else:
        out = intensity == 0.0
    if out:
        return FireState(f.object_id, FirePhase.EXTINGUISHED, 0.0, progress), False
    return FireState(f.object_id, FirePhase.BURNING, intensity, progress), False


def _nearest_burning(fires: dict[str, FireState], s: Scenario,
                     pos: Point2) -> str | None:
    best: str | None = None
    best_key: tuple[float, str] | None = None
    for oid, f in fires.items():
        if f.phase is not FirePhase.BURNING:
            continue
        key = (geo.dist(pos, s.object_by_id(oid).position), oid)
        if best_key is None or key < best_key:
            best, best_key = oid, key
    return best


def check_completion(state: SimState, s: Scenario) -> Outcome:
    """Pure read of the termination rule at the state's current time."""
    all_out = all(f.phase is not FirePhase.BURNING for f in state.fires.values())
    inside_exit = geo.dist(state.user_pos, s.evacuation.exit.pos) <= s.evacuation.exit.radius
    if all_out and inside_exit:
        return Outcome.SUCCESS
    if state.time(s.tick_dt) >= s.duration_limit:
        return Outcome.TIMEOUT
    return Outcome.RUNNING


def step(state: SimState, s: Scenario, sample: InputSample) -> StepResult:
    """Advance one tick. Order within a tick: select, move, spread, spray,
    waypoints, completion check, tick increment. Terminal states are frozen.
    """
    if state.outcome is not Outcome.RUNNING:
        return StepResult(state, (), None)

    dt = s.tick_dt
    t = state.tick * dt
    tick = state.tick
    events: list[Event] = []

    # 1. extinguisher selection
    selected = state.selected
    if sample.select is not None and sample.select != selected:
        try:
            s.extinguisher_by_id(sample.select)
        except KeyError:
            pass  # unknown id: ignored, selection unchanged
        else:
            selected = sample.select
            events.append(Event(tick, "select", selected))

    # 2. movement
    pos = geo.add(state.user_pos, geo.scale(sample.move, s.walk_speed * dt))

    # 3. scheduled spread in (t, t+dt]
    fires = dict(state.fires)
    for ev in s.spread_events:
        if t < ev.at_time <= t + dt:
            if s.spread_requires_burning and not any(
                    f.phase is FirePhase.BURNING for f in fires.values()):
                continue
            target = fires[ev.target_object]
            if target.phase is FirePhase.UNLIT:
                obj = s.object_by_id(ev.target_object)
                fires[ev.target_object] = FireState(
                    obj.id, FirePhase.BURNING, obj.max_intensity, 0.0)
                events.append(Event(tick, "spread", obj.id))

    # 4. spray against the nearest burning fire
    geometry: SprayGeometry | None = None
    if sample.trigger and selected is not None:
        target_id = _nearest_burning(fires, s, pos)
        if target_id is not None:
            obj = s.object_by_id(target_id)
            ext = s.extinguisher_by_id(selected)
            geometry = spray_effectiveness(pos, sample.aim, obj.position, ext.d_max)
            new_fire, wrong = apply_suppression(
                fires[target_id], geometry.effectiveness, ext, obj.hazard_class, dt,
                max_intensity=obj.max_intensity,
                threshold_mode=s.progress_threshold_mode)
            if wrong:
                events.append(Event(tick, "wrong_extinguisher", target_id))
            else:
                fires[target_id] = new_fire
                if new_fire.phase is FirePhase.EXTINGUISHED:
                    events.append(Event(tick, "extinguished", target_id))

    # 5. in-order waypoint visits and exit entry
    visited = state.visited_waypoints
    waypoints = s.evacuation.waypoints
    if visited < len(waypoints):
        wp = waypoints[visited]
        if geo.dist(pos, wp.pos) <= wp.radius:
            events.append(Event(tick, "waypoint", visited))
            visited += 1
    exit_reached = state.exit_reached
    if not exit_reached and geo.dist(pos, s.evacuation.exit.pos) <= s.evacuation.exit.radius:
        exit_reached = True
        events.append(Event(tick, "exit"))

    # 6. completion
    all_out = all(f.phase is not FirePhase.BURNING for f in fires.values())
    inside_exit = geo.dist(pos, s.evacuation.exit.pos) <= s.evacuation.exit.radius
    if all_out and inside_exit:
        outcome = Outcome.SUCCESS
    elif t + dt >= s.duration_limit:
        outcome = Outcome.TIMEOUT
    else:
        outcome = Outcome.RUNNING

    new_state = SimState(
        tick=tick + 1,
        user_pos=pos,
        current_aim=sample.aim,
        selected=selected,
        fires=fires,
        visited_waypoints=visited,
        exit_reached=exit_reached,
        outcome=outcome,
    )
    return StepResult(new_state, tuple(events), geometry)
