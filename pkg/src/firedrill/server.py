"""Live interactive sessions over a WebSocket JSON protocol.

Handshake: client sends {"hello":1}, server answers {"hello":1,"scenario":{...}},
client sends {"start":{}}. During the session the client sends
{"input":{"mv":[x,y],"aim":[x,y],"trig":bool,"sel":"id"?}} messages; the server
emits {"snap":{...}} state digests and finally exactly one {"report":{...}}.

Two pacing modes:
  realtime  - ticks advance on a wall-clock timer; the most recent input
              message wins within a tick, absent input repeats the previous
              sample. Snapshots every `snapshot_every` ticks.
  lockstep  - one snapshot per tick, then the server waits for exactly one
              client message. Deterministic; used by tests and scripted
              clients.

Replays stay deterministic in both modes because the log stores the sampled
inputs per tick, never wall-clock timing.
"""
from __future__ import annotations

import asyncio
import itertools
import json
import logging
from pathlib import Path

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from .assessment import build_report, report_to_dict, report_to_json
from .scenario import Scenario, scenario_to_dict
from .sessionlog import SessionLog, scenario_hash, serialize_log
from .sim import Event, InputSample, Outcome, SimState, init_session, step

log = logging.getLogger(__name__)


class ProtocolError(Exception):
    pass


def parse_input_message(payload) -> InputSample:
    if not isinstance(payload, dict):
        raise ProtocolError("input payload must be an object")
    try:
        return InputSample(
            move=(float(payload["mv"][0]), float(payload["mv"][1])),
            aim=(float(payload["aim"][0]), float(payload["aim"][1])),
            trigger=bool(payload["trig"]),
            select=payload.get("sel"),
        )
    except (KeyError, IndexError, TypeError, ValueError) as exc:
        raise ProtocolError(f"bad input message: {exc}") from exc


def snapshot_message(state: SimState, s: Scenario) -> dict:
    return {"snap": {
        "tick": state.tick,
        "time_s": state.tick * s.tick_dt,
        "user_pos": list(state.user_pos),
        "fires": [
            {
                "id": obj.id,
                "phase": state.fires[obj.id].phase.value,
                "intensity": state.fires[obj.id].intensity,
                "max": obj.max_intensity,
            }
            for obj in s.objects
        ],
        "selected": state.selected,
        "visited_waypoints": state.visited_waypoints,
        "outcome": state.outcome.value,
    }}


class SessionServer:
    """One scenario, many isolated sessions (one per connection)."""

    def __init__(self, scenario: Scenario, *, log_dir: str | Path | None = None,
                 lockstep: bool = False, snapshot_every: int = 2) -> None:
        self.scenario = scenario
        self.log_dir = Path(log_dir) if log_dir is not None else None
        self.lockstep = lockstep
        self.snapshot_every = snapshot_every
        self.last_log: SessionLog | None = None
        self.last_report: dict | None = None
        self._counter = itertools.count(1)

    async def handle(self, ws: WebSocket) -> None:
        await ws.accept()
        try:
            hello = await self._receive(ws)
            if hello.get("hello") != 1:
                raise ProtocolError("expected {\"hello\":1} handshake")
            await ws.send_text(_dump({"hello": 1,
                                      "scenario": scenario_to_dict(self.scenario)}))
            start = await self._receive(ws)
            if "start" not in start:
                raise ProtocolError("expected {\"start\":{}} after handshake")
        except ProtocolError as exc:
            await self._error_close(ws, str(exc))
            return
        except WebSocketDisconnect:
            return

        s = self.scenario
        session_log = SessionLog(s.id, scenario_hash(s), s.tick_dt)
        state = init_session(s)
        session_log.events.append(Event(0, "ignite", s.initial_object.id))
        sample = InputSample()
        aborted = False

        try:
            if self.lockstep:
                while state.outcome is Outcome.RUNNING:
                    await ws.send_text(_dump(snapshot_message(state, s)))
                    msg = await self._receive(ws)
                    if "abort" in msg:
                        aborted = True
                        break
                    if "input" not in msg:
                        raise ProtocolError("expected an input or abort message")
                    sample = parse_input_message(msg["input"])
                    state = self._advance(state, sample, session_log)
            else:
                mailbox: list[dict] = []
                reader = asyncio.create_task(self._reader(ws, mailbox))
                loop = asyncio.get_running_loop()
                next_tick = loop.time()
                try:
                    while state.outcome is Outcome.RUNNING:
                        next_tick += s.tick_dt
                        delay = next_tick - loop.time()
                        if delay > 0:
                            await asyncio.sleep(delay)
                        if reader.done():
                            exc = reader.exception()
                            if isinstance(exc, WebSocketDisconnect):
                                aborted = True
                                break
                            if exc is not None:
                                raise exc
                        while mailbox:
                            msg = mailbox.pop(0)
                            if "abort" in msg:
                                aborted = True
                                break
                            if "input" in msg:
                                sample = parse_input_message(msg["input"])
                        if aborted:
                            break
                        state = self._advance(state, sample, session_log)
                        if state.tick % self.snapshot_every == 0 \
                                or state.outcome is not Outcome.RUNNING:
                            await ws.send_text(_dump(snapshot_message(state, s)))
                finally:
                    reader.cancel()
        except WebSocketDisconnect:
            aborted = True
        except ProtocolError as exc:
            self._finish(session_log, "abort")
            await self._error_close(ws, str(exc))
            return

        if aborted:
            self._finish(session_log, "abort")
            try:
                await ws.close()
            except RuntimeError:
                pass
            return

        log_path = self._finish(session_log, state.outcome.value)
        report = build_report(session_log, s)
        self.last_report = report_to_dict(report)
        if log_path is not None:
            log_path.with_suffix(".report.json").write_text(
                report_to_json(report), encoding="utf-8")
        try:
            await ws.send_text(_dump(snapshot_message(state, s)))
            await ws.send_text(_dump({"report": self.last_report}))
            await ws.close()
        except (WebSocketDisconnect, RuntimeError):
            pass

    def _advance(self, state: SimState, sample: InputSample,
                 session_log: SessionLog) -> SimState:
        result = step(state, self.scenario, sample)
        session_log.samples.append(sample)
        session_log.events.extend(result.events)
        if result.geometry is not None:
            session_log.geometry[state.tick] = result.geometry
        return result.state

    def _finish(self, session_log: SessionLog, outcome: str) -> Path | None:
        session_log.final_outcome = outcome
        self.last_log = session_log
        if self.log_dir is None:
            return None
        self.log_dir.mkdir(parents=True, exist_ok=True)
        path = self.log_dir / f"{self.scenario.id}-{next(self._counter):04d}.fslog"
        path.write_text(serialize_log(session_log), encoding="utf-8")
        log.info("session persisted to %s (outcome %s)", path, outcome)
        return path

    async def _reader(self, ws: WebSocket, mailbox: list[dict]) -> None:
        while True:
            mailbox.append(await self._receive(ws))

    async def _receive(self, ws: WebSocket) -> dict:
        text = await ws.receive_text()
        try:
            msg = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ProtocolError(f"malformed frame: {exc.msg}") from exc
        if not isinstance(msg, dict):
            raise ProtocolError("malformed frame: expected a JSON object")
        return msg

    async def _error_close(self, ws: WebSocket, text: str) -> None:
        try:
            await ws.send_text(_dump({"error": text}))
            await ws.close()
        except (WebSocketDisconnect, RuntimeError):
            pass


def _dump(obj: dict) -> str:
    return json.dumps(obj, separators=(",", ":"), allow_nan=False)


def create_app(scenario: Scenario, *, log_dir: str | Path | None = None,
               lockstep: bool = False, snapshot_every: int = 2) -> FastAPI:
    app = FastAPI()
    server = SessionServer(scenario, log_dir=log_dir, lockstep=lockstep,
                           snapshot_every=snapshot_every)
    app.state.session_server = server

    @app.websocket("/session")
    async def session(ws: WebSocket) -> None:
        await server.handle(ws)

    return app


def run_server(scenario: Scenario, *, host: str = "127.0.0.1", port: int = 8765,
               log_dir: str | Path | None = None) -> None:
    import uvicorn

    app = create_app(scenario, log_dir=log_dir)
    print(f"serving scenario {scenario.id!r} on ws://{host}:{port}/session")
    uvicorn.run(app, host=host, port=port, log_level="warning")
