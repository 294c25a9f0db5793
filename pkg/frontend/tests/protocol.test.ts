import { describe, expect, it } from "vitest";
import { parseServerMessage, setM, setMode, setParam } from "../src/protocol.js";

describe("parseServerMessage", () => {
  it("accepts a frame", () => {
    const msg = parseServerMessage(
      '{"type":"frame","t":0.5,"m":0.9,"positions":[[1.0,-0.25],[0.0,0.0]]}',
    );
    expect(msg).toEqual({
      type: "frame",
      t: 0.5,
      m: 0.9,
      positions: [
        [1.0, -0.25],
        [0.0, 0.0],
      ],
    });
  });

  it("accepts a status", () => {
    const msg = parseServerMessage(
      '{"type":"status","source":"manual","poorSignal":0,"mode":"reverse","degraded":false}',
    );
    expect(msg).toEqual({
      type: "status",
      source: "manual",
      poorSignal: 0,
      mode: "reverse",
      degraded: false,
    });
  });

  it("accepts an error", () => {
    expect(parseServerMessage('{"type":"error","message":"nope"}')).toEqual({
      type: "error",
      message: "nope",
    });
  });

  it("returns null for garbage instead of throwing", () => {
    expect(parseServerMessage("not json at all")).toBeNull();
    expect(parseServerMessage("42")).toBeNull();
    expect(parseServerMessage("null")).toBeNull();
    expect(parseServerMessage('{"type":"frame","t":"x","m":0,"positions":[]}')).toBeNull();
    expect(parseServerMessage('{"type":"frame","t":0,"m":0,"positions":[[1]]}')).toBeNull();
    expect(parseServerMessage('{"type":"status","source":"manual","poorSignal":0,"mode":"sideways","degraded":false}')).toBeNull();
    expect(parseServerMessage('{"type":"mystery"}')).toBeNull();
  });
});

describe("control builders", () => {
  it("serialize to the exact wire shape", () => {
    expect(JSON.stringify(setM(0.5))).toBe('{"type":"setM","value":0.5}');
    expect(JSON.stringify(setMode("reverse"))).toBe('{"type":"setMode","value":"reverse"}');
    expect(JSON.stringify(setParam("noise_amplitude", 1.25))).toBe(
      '{"type":"setParam","name":"noise_amplitude","value":1.25}',
    );
  });
});
