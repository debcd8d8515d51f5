// End-to-end check against the real Python server: spawns `firedrill serve`
// with a small scenario, drives a session through the view model over a live
// WebSocket, and compares the final report with the one the server persists.

import { afterAll, beforeAll, describe, expect, it } from 'vitest';
import { spawn, type ChildProcess } from 'node:child_process';
import { mkdtempSync, readFileSync, readdirSync, rmSync, writeFileSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';
import WebSocket from 'ws';

import { helloMessage, startMessage, type Snapshot } from '../src/protocol';
import { ViewModel } from '../src/viewmodel';

const PORT = 8871;
const URL = `ws://127.0.0.1:${PORT}/session`;

const SCENARIO = {
  id: 'mini-e2e',
  duration_limit_s: 20,
  tick_dt_s: 0.05,
  walk_speed_mps: 2.0,
  user_spawn: [0, 0],
  objects: [
    {
      id: 'bin',
      pos: [1.5, 0],
      class: 'normal',
      max_intensity: 3,
      base_radius_m: 0.5,
      ignition_time_s: 0,
    },
  ],
  spread: [],
  extinguishers: [
    { id: 'water', kind: 'water', rate: 12, d_max_m: 3, classes: ['normal'] },
  ],
  evacuation: {
    waypoints: [{ pos: [0, 0], r_m: 0.6 }],
    exit: { pos: [-1, 0], r_m: 0.8 },
  },
};

let workDir: string;
let server: ChildProcess;

function waitForServer(): Promise<void> {
  return new Promise((resolve, reject) => {
    const deadline = Date.now() + 15000;
    const attempt = () => {
      const probe = new WebSocket(URL);
      probe.on('open', () => {
        probe.close();
        resolve();
      });
      probe.on('error', () => {
        if (Date.now() > deadline) {
          reject(new Error('server did not come up'));
        } else {
          setTimeout(attempt, 200);
        }
      });
    };
    attempt();
  });
}

beforeAll(async () => {
  workDir = mkdtempSync(join(tmpdir(), 'firedrill-e2e-'));
  writeFileSync(join(workDir, 'mini.json'), JSON.stringify(SCENARIO));
  server = spawn(
    'python3',
    [
      '-m', 'firedrill.cli', 'serve',
      '--scenario', join(workDir, 'mini.json'),
      '--port', String(PORT),
      '--log-dir', workDir,
    ],
    { stdio: ['ignore', 'pipe', 'pipe'] },
  );
  await waitForServer();
}, 20000);

afterAll(() => {
  server.kill();
  rmSync(workDir, { recursive: true, force: true });
});

interface SessionResult {
  vm: ViewModel;
  snapshots: Snapshot[];
  sprayStartIndex: number;
}

/** Play one full session: spray the bin from the spawn point, then walk to
 * the exit. All decisions come from snapshot data, like the browser client. */
function playSession(): Promise<SessionResult> {
  return new Promise((resolve, reject) => {
    const vm = new ViewModel();
    const snapshots: Snapshot[] = [];
    const socket = new WebSocket(URL);
    const fail = (err: Error) => {
      socket.close();
      reject(err);
    };
    const timer = setTimeout(() => fail(new Error('session timed out')), 25000);
    let inputTimer: ReturnType<typeof setInterval> | null = null;
    let sprayStartIndex = -1;

    const applyControls = () => {
      const burning = vm.snapshot?.fires.some((f) => f.phase === 'burning') ?? false;
      if (burning) {
        if (sprayStartIndex < 0) sprayStartIndex = snapshots.length;
        vm.controls.trigger = true;
        vm.controls.pointerWorld = [1.5, 0];
        vm.controls.left = false;
      } else {
        vm.controls.trigger = false;
        vm.controls.left = true;
      }
    };

    socket.on('open', () => socket.send(helloMessage()));
    socket.on('error', fail);
    socket.on('message', (data) => {
      let msg;
      try {
        msg = vm.handleServerText(String(data));
      } catch (err) {
        fail(err as Error);
        return;
      }
      if (msg.kind === 'hello') {
        vm.selectExtinguisher('water');
        socket.send(startMessage());
        inputTimer = setInterval(() => {
          applyControls();
          socket.send(vm.buildInput());
        }, 25);
      } else if (msg.kind === 'snap') {
        snapshots.push(msg.snap);
      } else if (msg.kind === 'report') {
        clearTimeout(timer);
        if (inputTimer !== null) clearInterval(inputTimer);
        socket.close();
        resolve({ vm, snapshots, sprayStartIndex });
      } else {
        fail(new Error(`server error: ${msg.error}`));
      }
    });
  });
}

describe('live session against the Python server', () => {
  let result: SessionResult;

  beforeAll(async () => {
    result = await playSession();
  }, 30000);

  it('completes the scenario successfully', () => {
    expect(result.vm.sessionOver()).toBe(true);
    expect(result.vm.outcome()).toBe('success');
    expect(result.vm.report?.dnf).toBe(false);
  });

  it('shows the fire weakening within two snapshots of spraying', () => {
    const levels = result.snapshots.map(
      (s) => s.fires.find((f) => f.id === 'bin')?.intensity ?? 0,
    );
    const firstDrop = levels.findIndex((v, i) => i > 0 && v < levels[i - 1]);
    expect(firstDrop).toBeGreaterThan(0);
    expect(result.sprayStartIndex).toBeGreaterThanOrEqual(0);
    expect(firstDrop - result.sprayStartIndex).toBeLessThanOrEqual(2);
    const last = result.snapshots[result.snapshots.length - 1];
    expect(last.fires[0].phase).toBe('extinguished');
  });

  it('reports monotone snapshot ticks', () => {
    // the final snapshot may repeat the last periodic tick
    for (let i = 1; i < result.snapshots.length; i += 1) {
      expect(result.snapshots[i].tick).toBeGreaterThanOrEqual(result.snapshots[i - 1].tick);
    }
  });

  it('matches the report the server persisted on disk', () => {
    const files = readdirSync(workDir).filter((f) => f.endsWith('.report.json'));
    expect(files.length).toBeGreaterThan(0);
    files.sort();
    const persisted = JSON.parse(
      readFileSync(join(workDir, files[files.length - 1]), 'utf8'),
    );
    expect(result.vm.report).toEqual(persisted);
  });
});
