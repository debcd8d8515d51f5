import dataclasses
import random

import pytest

from firedrill import (InputSample, LogError, ReplayDivergence, SessionLog,
                       deserialize_log, record_session, replay, report_to_json,
                       scenario_hash, serialize_log)
from firedrill.agents import idle, make_random, perfect, wrong_extinguisher
from firedrill.sim import Event, SprayGeometry

from conftest import minimal_doc
from firedrill import parse_scenario


class TestRecord:
    def test_perfect_agent_succeeds(self, lab):
        log = record_session(lab, perfect)
        assert log.final_outcome == "success"
        assert log.duration() < lab.duration_limit
        assert len(log.samples) == log.final_tick

    def test_idle_agent_times_out_at_limit(self, lab):
        log = record_session(lab, idle)
        assert log.final_outcome == "timeout"
        assert log.duration() == pytest.approx(lab.duration_limit)

    def test_wrong_extinguisher_events_logged(self):
        doc = minimal_doc(
            objects=[{"id": "panel", "pos": [2.0, 0.0], "class": "electrical",
                      "max_intensity": 20.0, "ignition_time_s": 0.0}],
            extinguishers=[{"id": "w1", "kind": "water", "rate": 5.0}],
            duration_limit_s=5.0)
        s = parse_scenario(doc)
        log = record_session(s, wrong_extinguisher)
        assert log.final_outcome == "timeout"
        assert any(ev.kind == "wrong_extinguisher" for ev in log.events)

    def test_events_sorted_by_tick(self, lab):
        log = record_session(lab, perfect)
        ticks = [ev.tick for ev in log.events]
        assert ticks == sorted(ticks)

    def test_exhausted_iterable_raises(self, lab):
        with pytest.raises(LogError, match="exhausted"):
            record_session(lab, [InputSample()] * 10)

    def test_iterable_input_source(self, lab):
        n = int(round(lab.duration_limit / lab.tick_dt))
        log = record_session(lab, [InputSample()] * n)
        assert log.final_outcome == "timeout"


class TestReplay:
    def test_roundtrip_byte_identical(self, lab):
        log = record_session(lab, perfect)
        report_a = report_to_json(__import__("firedrill").build_report(log, lab))
        state, report = replay(lab, log)
        assert state.outcome.value == "success"
        assert report_to_json(report) == report_a

    def test_edited_sample_diverges(self, lab):
        log = record_session(lab, perfect)
        tick = len(log.samples) // 2
        log.samples[tick] = dataclasses.replace(log.samples[tick], trigger=False,
                                                move=(0.0, 1.0))
        with pytest.raises(ReplayDivergence):
            replay(lab, log)

    def test_wrong_scenario_hash_mismatch(self, lab):
        log = record_session(lab, idle)
        other = parse_scenario(minimal_doc())
        with pytest.raises(LogError, match="hash mismatch"):
            replay(other, log)

    def test_tick_dt_mismatch(self, lab):
        log = record_session(lab, idle)
        log.tick_dt = 0.1
        log.scenario_hash = scenario_hash(lab)
        with pytest.raises(LogError, match="tick_dt"):
            replay(lab, log)

    def test_replay_of_random_agents(self, lab):
        for seed in range(3):
            log = record_session(lab, make_random(seed))
            replay(lab, log)  # must not diverge


class TestSerialization:
    def test_roundtrip_fixture_run(self, lab):
        log = record_session(lab, perfect)
        text = serialize_log(log)
        assert deserialize_log(text) == log
        assert serialize_log(deserialize_log(text)) == text

    def test_roundtrip_random_logs(self, lab):
        for seed in range(5):
            log = record_session(lab, make_random(seed))
            assert deserialize_log(serialize_log(log)) == log

    def test_truncated_file_rejected(self, lab):
        log = record_session(lab, perfect)
        text = serialize_log(log)
        truncated = "\n".join(text.split("\n")[:-3])
        with pytest.raises(LogError, match="truncated"):
            deserialize_log(truncated)

    def test_malformed_line_position_reported(self):
        with pytest.raises(LogError, match="line 1"):
            deserialize_log("not json\n")

    def test_empty_session_artifact(self, lab):
        log = SessionLog(lab.id, scenario_hash(lab), lab.tick_dt,
                         final_outcome="abort")
        assert deserialize_log(serialize_log(log)) == log

    def test_synthetic_log_with_geometry_roundtrip(self):
        log = SessionLog("x", "ab" * 32, 0.05,
                         samples=[InputSample(trigger=True, select="w")],
                         events=[Event(0, "ignite", "bin"), Event(0, "select", "w")],
                         geometry={0: SprayGeometry(0.1, 2.345678901234567, 0.5)},
                         final_outcome="timeout")
        assert deserialize_log(serialize_log(log)) == log
