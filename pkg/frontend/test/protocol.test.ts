import { describe, expect, it } from 'vitest';

import {
  ProtocolError,
  encodeInput,
  helloMessage,
  parseServerMessage,
  startMessage,
} from '../src/protocol';

describe('parseServerMessage', () => {
  it('recognizes the handshake reply', () => {
    const msg = parseServerMessage('{"hello":1,"scenario":{"id":"lab"}}');
    expect(msg.kind).toBe('hello');
    if (msg.kind === 'hello') expect(msg.scenario.id).toBe('lab');
  });

  it('recognizes snapshots', () => {
    const msg = parseServerMessage(
      '{"snap":{"tick":4,"time_s":0.2,"user_pos":[0,0],"fires":[],"selected":null,"visited_waypoints":0,"outcome":"running"}}',
    );
    expect(msg.kind).toBe('snap');
    if (msg.kind === 'snap') expect(msg.snap.tick).toBe(4);
  });

  it('recognizes reports and errors', () => {
    expect(parseServerMessage('{"report":{"outcome":"success"}}').kind).toBe('report');
    expect(parseServerMessage('{"error":"boom"}').kind).toBe('error');
  });

  it('throws on malformed frames', () => {
    expect(() => parseServerMessage('not json')).toThrow(ProtocolError);
    expect(() => parseServerMessage('42')).toThrow(ProtocolError);
    expect(() => parseServerMessage('{"unknown":true}')).toThrow(ProtocolError);
  });
});

describe('client messages', () => {
  it('encodes the fixed handshake strings', () => {
    expect(JSON.parse(helloMessage())).toEqual({ hello: 1 });
    expect(JSON.parse(startMessage())).toEqual({ start: {} });
  });

  it('encodes input with optional selection', () => {
    const withSel = JSON.parse(
      encodeInput({ mv: [0, 1], aim: [1, 0], trig: true, sel: 'water' }),
    );
    expect(withSel).toEqual({
      input: { mv: [0, 1], aim: [1, 0], trig: true, sel: 'water' },
    });
    const without = JSON.parse(encodeInput({ mv: [0, 0], aim: [1, 0], trig: false }));
    expect(without.input.sel).toBeUndefined();
  });
});
