import { describe, expect, it } from "vitest";

import type { SessionState } from "../src/api.js";
import { SessionModel, clampCoefficient, normalizeShift } from "../src/state.js";

function twoLayerState(): SessionState {
  return {
    id: "s-1",
    revision: 1,
    engine: "frequency",
    rows: 16,
    cols: 16,
    layers: [
      { name: "a.pgm", coefficient: 1, sx: 0, sy: 0 },
      { name: "b.pgm", coefficient: 1, sx: 0, sy: 0 },
    ],
  };
}

describe("clampCoefficient", () => {
  it("clamps into [0, 2]", () => {
    expect(clampCoefficient(-1)).toBe(0);
    expect(clampCoefficient(2.5)).toBe(2);
    expect(clampCoefficient(0)).toBe(0);
    expect(clampCoefficient(2)).toBe(2);
  });

  it("snaps to the 0.01 grid", () => {
    expect(clampCoefficient(0.124)).toBe(0.12);
    expect(clampCoefficient(0.126)).toBe(0.13);
    expect(clampCoefficient(1.499999)).toBe(1.5);
  });

  it("maps non-finite input to 0", () => {
    expect(clampCoefficient(Number.NaN)).toBe(0);
    expect(clampCoefficient(Number.POSITIVE_INFINITY)).toBe(0);
  });
});

describe("normalizeShift", () => {
  it("rounds to integers unless subpixel is on", () => {
    expect(normalizeShift(3.7, false)).toBe(4);
    expect(normalizeShift(-2.2, false)).toBe(-2);
    expect(normalizeShift(3.7, true)).toBe(3.7);
  });

  it("maps non-finite input to 0", () => {
    expect(normalizeShift(Number.NaN, true)).toBe(0);
    expect(normalizeShift(Number.NEGATIVE_INFINITY, false)).toBe(0);
  });
});

describe("SessionModel", () => {
  it("mirrors the initial server state", () => {
    const model = new SessionModel(twoLayerState());
    expect(model.revision).toBe(1);
    expect(model.engine).toBe("frequency");
    expect(model.layers.map((l) => l.name)).toEqual(["a.pgm", "b.pgm"]);
    expect(model.layers.every((l) => l.coefficient === 1 && !l.subpixel)).toBe(true);
  });

  it("applies acknowledged patches and advances the revision", () => {
    const model = new SessionModel(twoLayerState());
    model.ackLayerPatch(0, { coefficient: 0.4 }, 2);
    model.ackLayerPatch(1, { sx: 3, sy: -2 }, 3);
    expect(model.layers[0].coefficient).toBe(0.4);
    expect(model.layers[1]).toMatchObject({ sx: 3, sy: -2, coefficient: 1 });
    expect(model.revision).toBe(3);
  });

  it("never moves the revision backwards", () => {
    const model = new SessionModel(twoLayerState());
    model.ackLayerPatch(0, { coefficient: 0.4 }, 7);
    model.ackEngine("spatial", 3);
    expect(model.engine).toBe("spatial");
    expect(model.revision).toBe(7);
  });

  it("flags fractional shifts from the server as subpixel", () => {
    const state = twoLayerState();
    state.layers[1].sx = 0.5;
    const model = new SessionModel(state);
    expect(model.layers[0].subpixel).toBe(false);
    expect(model.layers[1].subpixel).toBe(true);
  });

  it("rejects patches to missing layers", () => {
    const model = new SessionModel(twoLayerState());
    expect(() => model.ackLayerPatch(5, { coefficient: 1 }, 2)).toThrow("no layer 5");
  });
});
