// Client-side session state. Strictly a thin client: every number shown on
// screen originates in a server message; this module only shapes local input
// into wire messages and holds the latest snapshot/report for rendering.

import {
  encodeInput,
  parseServerMessage,
  type InputFields,
  type ReportPayload,
  type ScenarioDoc,
  type ServerMessage,
  type Snapshot,
  type Vec2,
} from './protocol';

export type ConnectionState = 'idle' | 'connecting' | 'open' | 'closed' | 'error';

export interface LocalControls {
  up: boolean;
  down: boolean;
  left: boolean;
  right: boolean;
  trigger: boolean;
  /** pointer position in world coordinates, set by the renderer's unproject */
  pointerWorld: Vec2 | null;
}

export const emptyControls = (): LocalControls => ({
  up: false,
  down: false,
  left: false,
  right: false,
  trigger: false,
  pointerWorld: null,
});

export class ViewModel {
  scenario: ScenarioDoc | null = null;
  snapshot: Snapshot | null = null;
  report: ReportPayload | null = null;
  errorText: string | null = null;
  connection: ConnectionState = 'idle';
  controls: LocalControls = emptyControls();

  private pendingSelect: string | null = null;

  handleServerText(text: string): ServerMessage {
    const msg = parseServerMessage(text);
    this.applyMessage(msg);
    return msg;
  }

  applyMessage(msg: ServerMessage): void {
    switch (msg.kind) {
      case 'hello':
        this.scenario = msg.scenario;
        break;
      case 'snap':
        // drop stale frames; snapshots are monotone in tick
        if (this.snapshot === null || msg.snap.tick >= this.snapshot.tick) {
          this.snapshot = msg.snap;
        }
        if (this.pendingSelect !== null && msg.snap.selected === this.pendingSelect) {
          this.pendingSelect = null;
        }
        break;
      case 'report':
        this.report = msg.report;
        break;
      case 'error':
        this.errorText = msg.error;
        this.connection = 'error';
        break;
    }
  }

  /** Pick an extinguisher by catalog index (number-key shortcut) or id. */
  selectExtinguisher(choice: number | string): boolean {
    if (this.scenario === null) return false;
    const catalog = this.scenario.extinguishers;
    const entry =
      typeof choice === 'number'
        ? catalog[choice]
        : catalog.find((e) => e.id === choice);
    if (entry === undefined) return false;
    this.pendingSelect = entry.id;
    return true;
  }

  /** Build the per-tick input message from the current local controls. */
  buildInput(): string {
    const mv = this.moveVector();
    const aim = this.aimVector();
    const fields: InputFields = { mv, aim, trig: this.controls.trigger };
    // Repeat the selection until a snapshot confirms it: the server keeps only
    // the most recent input per tick, so a one-shot send can be overwritten.
    if (this.pendingSelect !== null) {
      fields.sel = this.pendingSelect;
    }
    return encodeInput(fields);
  }

  moveVector(): Vec2 {
    const x = (this.controls.right ? 1 : 0) - (this.controls.left ? 1 : 0);
    const y = (this.controls.up ? 1 : 0) - (this.controls.down ? 1 : 0);
    const n = Math.hypot(x, y);
    if (n === 0) return [0, 0];
    return [x / n, y / n];
  }

  aimVector(): Vec2 {
    const pos = this.snapshot?.user_pos ?? this.scenario?.user_spawn ?? [0, 0];
    const pointer = this.controls.pointerWorld;
    if (pointer === null) return [1, 0];
    const dx = pointer[0] - pos[0];
    const dy = pointer[1] - pos[1];
    const n = Math.hypot(dx, dy);
    if (n === 0) return [1, 0];
    return [dx / n, dy / n];
  }

  /** Intensity fraction for a fire's HUD bar; data comes from the snapshot. */
  fireLevel(id: string): { phase: string; fraction: number } | null {
    const fire = this.snapshot?.fires.find((f) => f.id === id);
    if (fire === undefined) return null;
    return {
      phase: fire.phase,
      fraction: fire.max > 0 ? fire.intensity / fire.max : 0,
    };
  }

  /** Warn when the selection cannot touch the nearest burning fire. This is a
   * display hint computed from server-sent catalog and snapshot data only. */
  wrongExtinguisherWarning(): boolean {
    if (this.scenario === null || this.snapshot === null) return false;
    const selected = this.snapshot.selected;
    if (selected === null) return false;
    const entry = this.scenario.extinguishers.find((e) => e.id === selected);
    if (entry === undefined) return false;
    const pos = this.snapshot.user_pos;
    let nearest: { cls: string; d: number } | null = null;
    for (const fire of this.snapshot.fires) {
      if (fire.phase !== 'burning') continue;
      const obj = this.scenario.objects.find((o) => o.id === fire.id);
      if (obj === undefined) continue;
      const d = Math.hypot(obj.pos[0] - pos[0], obj.pos[1] - pos[1]);
      if (nearest === null || d < nearest.d) {
        nearest = { cls: obj.class, d };
      }
    }
    if (nearest === null) return false;
    return !entry.classes.includes(nearest.cls);
  }

  outcome(): string {
    if (this.report?.outcome !== undefined) return this.report.outcome;
    return this.snapshot?.outcome ?? 'running';
  }

  sessionOver(): boolean {
    return this.report !== null;
  }
}
