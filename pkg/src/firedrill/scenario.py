"""Static world description: flammable objects, spread schedule, extinguisher
catalog, evacuation plan, plus the JSON file format (parse / validate /
serialize).

Units: meters, seconds, dimensionless intensity. The scenario file is a single
JSON document; NaN/Infinity are rejected.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from enum import Enum

from .geometry import Point2, dist


class HazardClass(str, Enum):
    NORMAL = "normal"
    ELECTRICAL = "electrical"
    CHEMICAL = "chemical"


class ExtinguisherKind(str, Enum):
    WATER = "water"
    CO2 = "co2"
    FOAM = "foam"


# Which hazard classes each extinguisher kind handles when the scenario file
# does not say otherwise. Modeled on real extinguisher classes.
DEFAULT_EFFECTIVE_CLASSES: dict[ExtinguisherKind, frozenset[HazardClass]] = {
    ExtinguisherKind.WATER: frozenset({HazardClass.NORMAL}),
    ExtinguisherKind.CO2: frozenset({HazardClass.NORMAL, HazardClass.ELECTRICAL}),
    ExtinguisherKind.FOAM: frozenset({HazardClass.NORMAL, HazardClass.CHEMICAL}),
}

DEFAULT_SPREAD_TIMES = (10.0, 20.0, 30.0, 40.0)
DEFAULT_D_MAX = 3.0
DEFAULT_TICK_DT = 0.05
DEFAULT_BASE_RADIUS = 0.5
DEFAULT_DURATION_LIMIT = 120.0
DEFAULT_WALK_SPEED = 2.0


class ScenarioError(ValueError):
    """Raised for malformed or invalid scenario documents."""


@dataclass(frozen=True)
class FlammableObject:
    id: str
    position: Point2
    hazard_class: HazardClass
    max_intensity: float
    base_radius: float = DEFAULT_BASE_RADIUS
    ignition_time: float | None = None  # 0.0 marks the initial fire


@dataclass(frozen=True)
class SpreadEvent:
    at_time: float
    target_object: str


@dataclass(frozen=True)
class ExtinguisherSpec:
    id: str
    kind: ExtinguisherKind
    extinguish_rate: float
    d_max: float = DEFAULT_D_MAX
    effective_classes: frozenset[HazardClass] = frozenset()


@dataclass(frozen=True)
class Zone:
    """A circular trigger region (waypoint or exit)."""

    pos: Point2
    radius: float


@dataclass(frozen=True)
class EvacuationPlan:
    waypoints: tuple[Zone, ...]
    exit: Zone


@dataclass(frozen=True)
class Scenario:
    id: str
    duration_limit: float
    tick_dt: float
    objects: tuple[FlammableObject, ...]
    spread_events: tuple[SpreadEvent, ...]
    extinguishers: tuple[ExtinguisherSpec, ...]
    user_spawn: Point2
    walk_speed: float
    evacuation: EvacuationPlan
    progress_threshold_mode: bool = False
    spread_requires_burning: bool = True

    def object_by_id(self, oid: str) -> FlammableObject:
        for obj in self.objects:
            if obj.id == oid:
                return obj
        raise KeyError(oid)

    def extinguisher_by_id(self, eid: str) -> ExtinguisherSpec:
        for ext in self.extinguishers:
            if ext.id == eid:
                return ext
        raise KeyError(eid)

    @property
    def initial_object(self) -> FlammableObject:
        for obj in self.objects:
            if obj.ignition_time == 0.0:
                return obj
        raise ScenarioError("scenario has no initial fire")


@dataclass(frozen=True)
class Violation:
    field: str
    rule: str
    message: str

    def __str__(self) -> str:
        return f"{self.field}: {self.message} [{self.rule}]"


# ---------------------------------------------------------------------------
# parsing


def _reject_constant(text: str) -> float:
    raise ScenarioError(f"non-finite number not permitted: {text}")


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ScenarioError(msg)


def _as_number(value, ctx: str) -> float:
    _require(isinstance(value, (int, float)) and not isinstance(value, bool),
             f"{ctx}: expected a number, got {value!r}")
    out = float(value)
    _require(math.isfinite(out), f"{ctx}: non-finite number")
    return out


def _as_point(value, ctx: str) -> Point2:
    _require(isinstance(value, list) and len(value) == 2,
             f"{ctx}: expected [x, y]")
    return (_as_number(value[0], ctx + "[0]"), _as_number(value[1], ctx + "[1]"))


def _as_str(value, ctx: str) -> str:
    _require(isinstance(value, str) and value != "", f"{ctx}: expected a non-empty string")
    return value


def _parse_object(raw, i: int) -> FlammableObject:
    ctx = f"objects[{i}]"
    _require(isinstance(raw, dict), f"{ctx}: expected an object")
    oid = _as_str(raw.get("id"), ctx + ".id")
    pos = _as_point(raw.get("pos"), ctx + ".pos")
    cls_raw = _as_str(raw.get("class"), ctx + ".class")
    try:
        hazard = HazardClass(cls_raw)
    except ValueError:
        raise ScenarioError(f"{ctx}.class: unknown hazard class {cls_raw!r}") from None
    max_intensity = _as_number(raw.get("max_intensity"), ctx + ".max_intensity")
    base_radius = _as_number(raw.get("base_radius_m", DEFAULT_BASE_RADIUS), ctx + ".base_radius_m")
    ignition = raw.get("ignition_time_s")
    ignition_time = None if ignition is None else _as_number(ignition, ctx + ".ignition_time_s")
    return FlammableObject(oid, pos, hazard, max_intensity, base_radius, ignition_time)


def _parse_extinguisher(raw, i: int) -> ExtinguisherSpec:
    ctx = f"extinguishers[{i}]"
    _require(isinstance(raw, dict), f"{ctx}: expected an object")
    eid = _as_str(raw.get("id"), ctx + ".id")
    kind_raw = _as_str(raw.get("kind"), ctx + ".kind")
    try:
        kind = ExtinguisherKind(kind_raw)
    except ValueError:
        raise ScenarioError(f"{ctx}.kind: unknown extinguisher kind {kind_raw!r}") from None
    rate = _as_number(raw.get("rate"), ctx + ".rate")
    d_max = _as_number(raw.get("d_max_m", DEFAULT_D_MAX), ctx + ".d_max_m")
    if "classes" in raw:
        classes_raw = raw["classes"]
        _require(isinstance(classes_raw, list), f"{ctx}.classes: expected a list")
        classes = set()
        for j, c in enumerate(classes_raw):
            try:
                classes.add(HazardClass(_as_str(c, f"{ctx}.classes[{j}]")))
            except ValueError:
                raise ScenarioError(f"{ctx}.classes[{j}]: unknown hazard class {c!r}") from None
        effective = frozenset(classes)
    else:
        effective = DEFAULT_EFFECTIVE_CLASSES[kind]
    return ExtinguisherSpec(eid, kind, rate, d_max, effective)


def _parse_zone(raw, ctx: str) -> Zone:
    _require(isinstance(raw, dict), f"{ctx}: expected an object")
    return Zone(_as_point(raw.get("pos"), ctx + ".pos"), _as_number(raw.get("r_m"), ctx + ".r_m"))


def _default_spread_schedule(objects: tuple[FlammableObject, ...]) -> tuple[SpreadEvent, ...]:
    """Nearest-unlit ordering from the initial fire at 10/20/30/40 s."""
    initial = next((o for o in objects if o.ignition_time == 0.0), None)
    if initial is None:
        return ()
    rest = sorted((o for o in objects if o.id != initial.id),
                  key=lambda o: (dist(o.position, initial.position), o.id))
    return tuple(SpreadEvent(t, o.id)
                 for t, o in zip(DEFAULT_SPREAD_TIMES, rest))


def parse_scenario(text: str) -> Scenario:
    """Parse a scenario JSON document; raises ScenarioError on any problem."""
    try:
        raw = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ScenarioError(
            f"syntax error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    _require(isinstance(raw, dict), "top level: expected a JSON object")

    sid = _as_str(raw.get("id"), "id")
    duration = _as_number(raw.get("duration_limit_s", DEFAULT_DURATION_LIMIT), "duration_limit_s")
    tick_dt = _as_number(raw.get("tick_dt_s", DEFAULT_TICK_DT), "tick_dt_s")
    walk_speed = _as_number(raw.get("walk_speed_mps", DEFAULT_WALK_SPEED), "walk_speed_mps")
    spawn = _as_point(raw.get("user_spawn", [0.0, 0.0]), "user_spawn")

    objects_raw = raw.get("objects")
    _require(isinstance(objects_raw, list) and objects_raw, "objects: expected a non-empty list")
    objects = tuple(_parse_object(o, i) for i, o in enumerate(objects_raw))

    ext_raw = raw.get("extinguishers")
    _require(isinstance(ext_raw, list) and ext_raw, "extinguishers: expected a non-empty list")
    extinguishers = tuple(_parse_extinguisher(e, i) for i, e in enumerate(ext_raw))

    if "spread" in raw:
        spread_raw = raw["spread"]
        _require(isinstance(spread_raw, list), "spread: expected a list")
        spread = tuple(
            SpreadEvent(_as_number(ev.get("t_s"), f"spread[{i}].t_s"),
                        _as_str(ev.get("target"), f"spread[{i}].target"))
            for i, ev in enumerate(spread_raw))
    else:
        spread = _default_spread_schedule(objects)

    evac_raw = raw.get("evacuation")
    _require(isinstance(evac_raw, dict), "evacuation: expected an object")
    waypoints_raw = evac_raw.get("waypoints", [])
    _require(isinstance(waypoints_raw, list), "evacuation.waypoints: expected a list")
    waypoints = tuple(_parse_zone(w, f"evacuation.waypoints[{i}]")
                      for i, w in enumerate(waypoints_raw))
    exit_zone = _parse_zone(evac_raw.get("exit"), "evacuation.exit")

    scenario = Scenario(
        id=sid,
        duration_limit=duration,
        tick_dt=tick_dt,
        objects=objects,
        spread_events=spread,
        extinguishers=extinguishers,
        user_spawn=spawn,
        walk_speed=walk_speed,
        evacuation=EvacuationPlan(waypoints, exit_zone),
        progress_threshold_mode=bool(raw.get("progress_threshold_mode", False)),
        spread_requires_burning=bool(raw.get("spread_requires_burning", True)),
    )
    violations = validate(scenario)
    if violations:
        raise ScenarioError("invalid scenario: " + "; ".join(str(v) for v in violations))
    return scenario


# ---------------------------------------------------------------------------
# validation


def validate(s: Scenario) -> list[Violation]:
    """Return every invariant breach; empty list means the scenario is valid."""
    out: list[Violation] = []

    def bad(field: str, rule: str, message: str) -> None:
        out.append(Violation(field, rule, message))

    if not s.duration_limit > 0:
        bad("duration_limit", "positive", f"must be > 0, got {s.duration_limit}")
    if not s.tick_dt > 0:
        bad("tick_dt", "positive", f"must be > 0, got {s.tick_dt}")
    if not s.walk_speed > 0:
        bad("walk_speed", "positive", f"must be > 0, got {s.walk_speed}")

    seen_ids: set[str] = set()
    initial_ids: list[str] = []
    for obj in s.objects:
        if obj.id in seen_ids:
            bad(f"objects[{obj.id}]", "unique-id", f"duplicate object id {obj.id!r}")
        seen_ids.add(obj.id)
        if not obj.max_intensity > 0:
            bad(f"objects[{obj.id}].max_intensity", "positive",
                f"must be > 0, got {obj.max_intensity}")
        if not obj.base_radius > 0:
            bad(f"objects[{obj.id}].base_radius", "positive",
                f"must be > 0, got {obj.base_radius}")
        if obj.ignition_time is not None:
            if obj.ignition_time == 0.0:
                initial_ids.append(obj.id)
            else:
                bad(f"objects[{obj.id}].ignition_time", "initial-only",
                    "ignition_time may only be 0 (the initial fire); "
                    "later ignitions belong in the spread schedule")
    if len(initial_ids) != 1:
        bad("objects", "one-initial-fire",
            f"exactly one object must have ignition_time 0, found {len(initial_ids)}")
    initial = initial_ids[0] if len(initial_ids) == 1 else None

    for i, ev in enumerate(s.spread_events):
        if not ev.at_time > 0:
            bad(f"spread[{i}].at_time", "positive", f"must be > 0, got {ev.at_time}")
        if ev.target_object not in seen_ids:
            bad(f"spread[{i}].target", "dangling-reference",
                f"unknown object id {ev.target_object!r}")
        elif initial is not None and ev.target_object == initial:
            bad(f"spread[{i}].target", "not-initial",
                "spread may not target the initial fire")

    seen_ext: set[str] = set()
    for ext in s.extinguishers:
        if ext.id in seen_ext:
            bad(f"extinguishers[{ext.id}]", "unique-id", f"duplicate extinguisher id {ext.id!r}")
        seen_ext.add(ext.id)
        if not ext.extinguish_rate > 0:
            bad(f"extinguishers[{ext.id}].rate", "positive",
                f"must be > 0, got {ext.extinguish_rate}")
        if not ext.d_max > 0:
            bad(f"extinguishers[{ext.id}].d_max", "positive", f"must be > 0, got {ext.d_max}")
        if not ext.effective_classes:
            bad(f"extinguishers[{ext.id}].classes", "non-empty",
                "must handle at least one hazard class")

    for i, wp in enumerate(s.evacuation.waypoints):
        if not wp.radius > 0:
            bad(f"evacuation.waypoints[{i}].r", "positive", f"must be > 0, got {wp.radius}")
    if not s.evacuation.exit.radius > 0:
        bad("evacuation.exit.r", "positive", f"must be > 0, got {s.evacuation.exit.radius}")

    return out


# ---------------------------------------------------------------------------
# serialization


def scenario_to_dict(s: Scenario) -> dict:
    return {
        "id": s.id,
        "duration_limit_s": s.duration_limit,
        "tick_dt_s": s.tick_dt,
        "walk_speed_mps": s.walk_speed,
        "user_spawn": list(s.user_spawn),
        "objects": [
            {
                "id": o.id,
                "pos": list(o.position),
                "class": o.hazard_class.value,
                "max_intensity": o.max_intensity,
                "base_radius_m": o.base_radius,
                **({"ignition_time_s": o.ignition_time} if o.ignition_time is not None else {}),
            }
            for o in s.objects
        ],
        "spread": [{"t_s": ev.at_time, "target": ev.target_object} for ev in s.spread_events],
        "extinguishers": [
            {
                "id": e.id,
                "kind": e.kind.value,
                "rate": e.extinguish_rate,
                "d_max_m": e.d_max,
                "classes": sorted(c.value for c in e.effective_classes),
            }
            for e in s.extinguishers
        ],
        "evacuation": {
            "waypoints": [{"pos": list(w.pos), "r_m": w.radius} for w in s.evacuation.waypoints],
            "exit": {"pos": list(s.evacuation.exit.pos), "r_m": s.evacuation.exit.radius},
        },
        "progress_threshold_mode": s.progress_threshold_mode,
        "spread_requires_burning": s.spread_requires_burning,
    }


def serialize_scenario(s: Scenario) -> str:
    """Canonical JSON form; parse_scenario(serialize_scenario(s)) == s."""
    violations = validate(s)
    if violations:
        raise ScenarioError("refusing to serialize invalid scenario: "
                            + "; ".join(str(v) for v in violations))
    return json.dumps(scenario_to_dict(s), indent=2, allow_nan=False) + "\n"
