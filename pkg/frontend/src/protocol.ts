// Wire protocol for the live-session WebSocket: one JSON message per frame.
// The client never simulates; these types mirror exactly what the server sends.

export type Vec2 = [number, number];
export type FirePhase = 'unlit' | 'burning' | 'extinguished';
export type OutcomeValue = 'running' | 'success' | 'timeout';

export interface ScenarioObject {
  id: string;
  pos: Vec2;
  class: 'normal' | 'electrical' | 'chemical';
  max_intensity: number;
  base_radius_m: number;
  ignition_time_s?: number;
}

export interface ExtinguisherEntry {
  id: string;
  kind: string;
  rate: number;
  d_max_m: number;
  classes: string[];
}

export interface ZoneDoc {
  pos: Vec2;
  r_m: number;
}

export interface ScenarioDoc {
  id: string;
  duration_limit_s: number;
  tick_dt_s: number;
  walk_speed_mps: number;
  user_spawn: Vec2;
  objects: ScenarioObject[];
  spread: { t_s: number; target: string }[];
  extinguishers: ExtinguisherEntry[];
  evacuation: { waypoints: ZoneDoc[]; exit: ZoneDoc };
}

export interface FireSnapshot {
  id: string;
  phase: FirePhase;
  intensity: number;
  max: number;
}

export interface Snapshot {
  tick: number;
  time_s: number;
  user_pos: Vec2;
  fires: FireSnapshot[];
  selected: string | null;
  visited_waypoints: number;
  outcome: OutcomeValue;
}

export interface PerFireResult {
  id: string;
  extinguished_at_s: number | null;
}

export interface ReportPayload {
  outcome?: 'success' | 'timeout';
  time_taken_s?: number | null;
  dnf?: boolean;
  response_time_s?: number | null;
  first_trigger_s?: number | null;
  aiming_score_pct?: number;
  correct_usage?: number;
  evacuation_completion?: number;
  overall?: number;
  flags?: string[];
  per_fire?: PerFireResult[];
  config?: { effective_E_min: number };
}

export type ServerMessage =
  | { kind: 'hello'; scenario: ScenarioDoc }
  | { kind: 'snap'; snap: Snapshot }
  | { kind: 'report'; report: ReportPayload }
  | { kind: 'error'; error: string };

export class ProtocolError extends Error {}

export function parseServerMessage(text: string): ServerMessage {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch {
    throw new ProtocolError(`malformed server frame: ${text.slice(0, 80)}`);
  }
  if (typeof raw !== 'object' || raw === null) {
    throw new ProtocolError('server frame is not an object');
  }
  const msg = raw as Record<string, unknown>;
  if (msg.hello === 1 && typeof msg.scenario === 'object' && msg.scenario !== null) {
    return { kind: 'hello', scenario: msg.scenario as ScenarioDoc };
  }
  if (typeof msg.snap === 'object' && msg.snap !== null) {
    return { kind: 'snap', snap: msg.snap as Snapshot };
  }
  if (typeof msg.report === 'object' && msg.report !== null) {
    return { kind: 'report', report: msg.report as ReportPayload };
  }
  if (typeof msg.error === 'string') {
    return { kind: 'error', error: msg.error };
  }
  throw new ProtocolError('unrecognized server message');
}

export interface InputFields {
  mv: Vec2;
  aim: Vec2;
  trig: boolean;
  sel?: string;
}

export const helloMessage = (): string => JSON.stringify({ hello: 1 });
export const startMessage = (): string => JSON.stringify({ start: {} });
export const abortMessage = (): string => JSON.stringify({ abort: {} });

export function encodeInput(input: InputFields): string {
  const payload: Record<string, unknown> = {
    mv: input.mv,
    aim: input.aim,
    trig: input.trig,
  };
  if (input.sel !== undefined) {
    payload.sel = input.sel;
  }
  return JSON.stringify({ input: payload });
}
