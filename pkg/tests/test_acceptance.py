"""Acceptance gate: one test per release criterion, each printing a PASS line
(run with -s to see them). Tolerances are fixed here, not configurable.
"""
import json
import random
import subprocess
import sys
import time
from pathlib import Path

import pytest
from starlette.testclient import TestClient

from firedrill import (FirePhase, InputSample, init_session, parse_scenario,
                       record_session, replay, report_to_json, build_report,
                       serialize_log, spray_effectiveness, step)
from firedrill.agents import idle, make_random, perfect
from firedrill.assessment import EFFECTIVE_E_MIN, aiming_counts, aiming_score
from firedrill.cli import main as cli_main
from firedrill.server import create_app
from firedrill.sim import Outcome

from conftest import FIXTURES, minimal_doc
from test_assessment import _naive_recount, _random_trace
from test_server import play_lockstep

import math


def ok(name):
    print(f"\nACCEPTANCE PASS: {name}")


def test_spread_schedule_exact_counts(lab):
    started = time.perf_counter()
    state = init_session(lab)
    expected = {5.0: 1, 15.0: 2, 25.0: 3, 35.0: 4, 45.0: 5}
    checkpoints = {int(round(t / lab.tick_dt)): n for t, n in expected.items()}
    for _ in range(max(checkpoints) ):
        state = step(state, lab, InputSample()).state
        if state.tick in checkpoints:
            burning = sum(1 for f in state.fires.values()
                          if f.phase is FirePhase.BURNING)
            assert burning == checkpoints[state.tick], \
                f"t={state.tick * lab.tick_dt}: {burning} burning"
    elapsed = time.perf_counter() - started
    assert elapsed < 1.0, f"took {elapsed:.2f}s"
    ok(f"spread schedule 1/2/3/4/5 at 5/15/25/35/45 s ({elapsed * 1000:.0f} ms)")


def _stationary_spray_run(i0, rate, d, d_max):
    """Simulate a user standing at distance d with perfect aim; returns
    (extinguish tick, list of (tick, progress) for the threshold check)."""
    doc = minimal_doc(
        duration_limit_s=200.0,
        objects=[{"id": "bin", "pos": [d, 0.0], "class": "normal",
                  "max_intensity": i0, "ignition_time_s": 0.0}],
        extinguishers=[{"id": "w", "kind": "water", "rate": rate,
                        "d_max_m": d_max}])
    s = parse_scenario(doc)
    state = init_session(s)
    sample = InputSample(aim=(1.0, 0.0), trigger=True, select="w")
    extinguish_tick = None
    threshold = i0 / rate
    threshold_flip_tick = None
    while state.outcome is Outcome.RUNNING and extinguish_tick is None:
        result = step(state, s, sample)
        fire = result.state.fires["bin"]
        if threshold_flip_tick is None and fire.progress >= threshold:
            threshold_flip_tick = state.tick
        for ev in result.events:
            if ev.kind == "extinguished":
                extinguish_tick = ev.tick
        state = result.state
    return s, extinguish_tick, threshold_flip_tick


def test_closed_form_extinguish_oracle_and_threshold_equivalence():
    started = time.perf_counter()
    rng = random.Random(2024)
    tick_dt = 0.05
    for i in range(100):
        i0 = rng.uniform(5.0, 60.0)
        rate = rng.uniform(5.0, 20.0)
        d_max = rng.uniform(2.0, 5.0)
        d = rng.uniform(0.05, 0.7) * d_max
        s, extinguish_tick, flip_tick = _stationary_spray_run(i0, rate, d, d_max)
        assert extinguish_tick is not None, f"config {i}: never extinguished"
        # independent closed form: t* = I0 / (rate * cos0 * (1 - d/d_max))
        effectiveness = math.cos(0.0) * (1.0 - d / d_max)
        t_star = i0 / (rate * effectiveness)
        t_sim = (extinguish_tick + 1) * tick_dt
        assert abs(t_sim - t_star) <= tick_dt + 1e-9, \
            f"config {i}: t_sim={t_sim} t*={t_star}"
        # progress >= I0/rate must flip on exactly the extinguish tick
        assert flip_tick == extinguish_tick, \
            f"config {i}: threshold flip at {flip_tick}, extinguish at {extinguish_tick}"
    elapsed = time.perf_counter() - started
    assert elapsed < 5.0, f"took {elapsed:.2f}s"
    ok(f"closed-form extinguish oracle, 100 configs within one tick ({elapsed:.2f} s)")
    ok("threshold equivalence: progress >= I0/rate flips on the extinguish tick")


def test_effectiveness_properties_10000_geometries():
    rng = random.Random(99)
    for _ in range(10_000):
        d_max = rng.uniform(0.5, 8.0)
        d = rng.uniform(0.0, 1.6 * d_max)
        theta = rng.uniform(0.0, math.pi)
        aim = (math.cos(theta), math.sin(theta))
        g = spray_effectiveness((0.0, 0.0), aim, (d, 0.0), d_max)
        assert 0.0 <= g.effectiveness <= 1.0
        if d >= d_max or theta >= math.pi / 2:
            assert g.effectiveness == 0.0
        if theta < math.pi / 2:
            theta2 = min(math.pi / 2, theta + rng.uniform(0.0, 0.3))
            g2 = spray_effectiveness((0.0, 0.0),
                                     (math.cos(theta2), math.sin(theta2)),
                                     (d, 0.0), d_max)
            assert g2.effectiveness <= g.effectiveness
        g3 = spray_effectiveness((0.0, 0.0), aim, (d + rng.uniform(0.0, d_max), 0.0),
                                 d_max)
        assert g3.effectiveness <= g.effectiveness
    ok("effectiveness bounds and monotonicity over 10,000 geometries")


def test_aiming_score_oracle_1000_traces():
    rng = random.Random(7)
    for _ in range(1000):
        log = _random_trace(rng)
        f, n = _naive_recount(log)
        expected = 0.0 if n == 0 else f / n * 100.0
        assert aiming_score(log) == expected  # bit-exact
        assert aiming_counts(log) == (f, n)
    ok("aiming score equals naive recount on 1,000 random traces, bit-exact")


def test_determinism_replay_20_random_runs(lab, tmp_path):
    for seed in range(20):
        log_a = record_session(lab, make_random(seed))
        log_b = record_session(lab, make_random(seed))
        text_a, text_b = serialize_log(log_a), serialize_log(log_b)
        assert text_a == text_b, f"seed {seed}: repeated runs differ"
        _, report = replay(lab, log_a)
        _, report_b = replay(lab, log_b)
        assert report_to_json(report) == report_to_json(report_b)
    # fresh interpreter with different hash randomization stands in for a
    # second machine
    script = (
        "import sys; sys.path.insert(0, {!r});\n"
        "from firedrill import parse_scenario, record_session, serialize_log\n"
        "from firedrill.agents import make_random\n"
        "from pathlib import Path\n"
        "s = parse_scenario(Path({!r}).read_text())\n"
        "for seed in (0, 7, 19):\n"
        "    sys.stdout.write(serialize_log(record_session(s, make_random(seed))))\n"
    ).format(str(Path(__file__).parent), str(FIXTURES / "lab.json"))
    proc = subprocess.run([sys.executable, "-c", script], capture_output=True,
                          text=True, env={"PYTHONHASHSEED": "12345",
                                          "PATH": "/usr/bin:/bin"})
    assert proc.returncode == 0, proc.stderr
    local = "".join(serialize_log(record_session(lab, make_random(seed)))
                    for seed in (0, 7, 19))
    assert proc.stdout == local, "cross-process logs differ"
    ok("determinism: 20 random runs byte-identical, incl. fresh-interpreter check")


def test_analytics_reproduction(capsys):
    code = cli_main(["analyze", "--csv", str(FIXTURES / "reference_attempts.csv"),
                     "--format", "json"])
    out = capsys.readouterr().out
    assert code == 0
    payload = json.loads(out)
    phases = {p["phase"]: p for p in payload["phases"]}
    assert phases["initial"]["mean_s"] == pytest.approx(42.533, abs=0.001)
    assert phases["improvement"]["mean_s"] == pytest.approx(36.059, abs=0.001)
    assert phases["advanced"]["mean_s"] == pytest.approx(30.100, abs=0.001)
    assert [phases[k]["dnf"] for k in ("initial", "improvement", "advanced")] \
        == [5, 3, 0]
    means = [phases[k]["mean_s"] for k in ("initial", "improvement", "advanced")]
    assert means[0] > means[1] > means[2]
    ok("analytics reproduction: phase means 42.533/36.059/30.100, DNF 5/3/0")


def test_protocol_equivalence(lab, tmp_path):
    app = create_app(lab, log_dir=tmp_path, lockstep=True)
    client = TestClient(app)
    wire_report, _ = play_lockstep(client, lab, agent=perfect)

    log = record_session(lab, perfect)
    in_process = build_report(log, lab)
    from firedrill import report_to_dict
    assert wire_report == report_to_dict(in_process)
    assert json.dumps(wire_report, sort_keys=True) == \
        json.dumps(report_to_dict(in_process), sort_keys=True)
    ok("protocol equivalence: scripted wire client matches in-process agent")
