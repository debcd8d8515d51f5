"""Scripted agents that stand in for a human trainee in batch runs and CI.

Every agent is a pure function of (SimState, Scenario) apart from the seeded
random agent, whose RNG stream is part of its construction; repeated runs are
therefore deterministic. Agents only read fields that are also visible in
live-session snapshots (tick, user_pos, selected, fire phases/intensities,
visited_waypoints), so a protocol client can drive the same policy remotely.
"""
from __future__ import annotations

import math
import random
from typing import Callable

from . import geometry as geo
from .scenario import ExtinguisherSpec, FlammableObject, Scenario
from .sim import FirePhase, InputSample, SimState

AgentFn = Callable[[SimState, Scenario], InputSample]

APPROACH_DISTANCE = 1.0  # stand this close before spraying, capped below d_max


def _nearest_burning(state: SimState, s: Scenario) -> FlammableObject | None:
    best = None
    best_key = None
    for oid, f in state.fires.items():
        if f.phase is not FirePhase.BURNING:
            continue
        obj = s.object_by_id(oid)
        key = (geo.dist(state.user_pos, obj.position), oid)
        if best_key is None or key < best_key:
            best, best_key = obj, key
    return best


def _pick_extinguisher(s: Scenario, obj: FlammableObject,
                       compatible: bool) -> ExtinguisherSpec | None:
    candidates = [e for e in s.extinguishers
                  if (obj.hazard_class in e.effective_classes) == compatible]
    if not candidates:
        return None
    return sorted(candidates, key=lambda e: (-e.extinguish_rate, e.id))[0]


def _fight_or_evacuate(state: SimState, s: Scenario,
                       want_compatible: bool) -> InputSample:
    target = _nearest_burning(state, s)
    if target is not None:
        ext = _pick_extinguisher(s, target, want_compatible)
        if ext is None:
            ext = _pick_extinguisher(s, target, not want_compatible)
        if ext is None:
            return InputSample()
        d = geo.dist(state.user_pos, target.position)
        to_fire = geo.normalize(geo.sub(target.position, state.user_pos))
        aim = to_fire if d > 0 else (1.0, 0.0)
        stand_off = min(APPROACH_DISTANCE, ext.d_max * 0.5)
        move = to_fire if d > stand_off else geo.ZERO
        return InputSample(
            move=move,
            aim=aim,
            trigger=d < ext.d_max * 0.95,
            select=ext.id,
        )

    # all fires out: walk the evacuation route, then hold at the exit
    waypoints = s.evacuation.waypoints
    if state.visited_waypoints < len(waypoints):
        goal = waypoints[state.visited_waypoints]
    else:
        goal = s.evacuation.exit
    d = geo.dist(state.user_pos, goal.pos)
    if d <= goal.radius * 0.5:
        return InputSample()
    direction = geo.normalize(geo.sub(goal.pos, state.user_pos))
    aim = direction if d > 0 else (1.0, 0.0)
    return InputSample(move=direction, aim=aim)


def idle(state: SimState, s: Scenario) -> InputSample:
    """Does nothing; the fire wins."""
    return InputSample()


def perfect(state: SimState, s: Scenario) -> InputSample:
    """Walks to the nearest burning fire, selects a compatible extinguisher,
    sprays with exact aim, then walks the evacuation route."""
    return _fight_or_evacuate(state, s, want_compatible=True)


def wrong_extinguisher(state: SimState, s: Scenario) -> InputSample:
    """Like perfect, but deliberately grabs an incompatible extinguisher."""
    return _fight_or_evacuate(state, s, want_compatible=False)


def make_delayed(delay_s: float) -> AgentFn:
    """Idle for delay_s seconds, then behave like perfect."""
    def agent(state: SimState, s: Scenario) -> InputSample:
        if state.tick * s.tick_dt < delay_s:
            return InputSample()
        return perfect(state, s)
    return agent


def make_random(seed: int) -> AgentFn:
    """Seeded chaotic trainee: random walking, aiming and triggering."""
    rng = random.Random(seed)

    def agent(state: SimState, s: Scenario) -> InputSample:
        angle = rng.uniform(0.0, 2.0 * math.pi)
        aim = geo.normalize((rng.uniform(-1, 1), rng.uniform(-1, 1)))
        if aim == geo.ZERO:
            aim = (1.0, 0.0)
        move = geo.ZERO
        if rng.random() < 0.7:
            move = (math.cos(angle), math.sin(angle))
        select = None
        if rng.random() < 0.05 and s.extinguishers:
            select = rng.choice([e.id for e in s.extinguishers])
        return InputSample(move=move, aim=aim, trigger=rng.random() < 0.5, select=select)

    return agent


def get_agent(name: str) -> AgentFn:
    """Resolve a builtin agent name (perfect, idle, delayed:<s>,
    wrong-extinguisher, random:<seed>)."""
    if name == "perfect":
        return perfect
    if name == "idle":
        return idle
    if name == "wrong-extinguisher":
        return wrong_extinguisher
    if name.startswith("delayed:"):
        return make_delayed(float(name.split(":", 1)[1]))
    if name.startswith("random:"):
        return make_random(int(name.split(":", 1)[1]))
    raise ValueError(f"unknown agent {name!r}")
