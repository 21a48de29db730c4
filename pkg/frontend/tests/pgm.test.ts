import { describe, expect, it } from "vitest";

import { decodePgm, encodePgm } from "../src/pgm.js";

describe("pgm codec", () => {
  it("writes the canonical header, columns first", () => {
    const bytes = encodePgm({ rows: 2, cols: 3, maxval: 255, samples: Uint16Array.of(0, 1, 2, 3, 4, 5) });
    const text = new TextDecoder().decode(bytes.subarray(0, 11));
    expect(text).toBe("P5\n3 2\n255\n");
    expect(bytes.length).toBe(11 + 6);
  });

  it("round trips 8-bit samples", () => {
    const samples = Uint16Array.of(0, 7, 64, 128, 200, 255);
    const image = { rows: 3, cols: 2, maxval: 255, samples };
    const back = decodePgm(encodePgm(image));
    expect(back.rows).toBe(3);
    expect(back.cols).toBe(2);
    expect(back.maxval).toBe(255);
    expect(Array.from(back.samples)).toEqual(Array.from(samples));
  });

  it("round trips 16-bit samples big-endian", () => {
    const samples = Uint16Array.of(0, 300, 65535, 1);
    const image = { rows: 2, cols: 2, maxval: 65535, samples };
    const bytes = encodePgm(image);
    expect(bytes.length).toBe(13 + 8);
    expect(bytes[13]).toBe(0); // 0 high byte
    expect(bytes[15]).toBe(300 >> 8);
    expect(bytes[16]).toBe(300 & 0xff);
    const back = decodePgm(bytes);
    expect(Array.from(back.samples)).toEqual(Array.from(samples));
  });

  it("tolerates header comments", () => {
    const header = new TextEncoder().encode("P5\n# made by hand\n2 1\n255\n");
    const bytes = new Uint8Array([...header, 9, 10]);
    const back = decodePgm(bytes);
    expect(back.cols).toBe(2);
    expect(Array.from(back.samples)).toEqual([9, 10]);
  });

  it("rejects short rasters and foreign magics", () => {
    const good = encodePgm({ rows: 2, cols: 2, maxval: 255, samples: Uint16Array.of(1, 2, 3, 4) });
    expect(() => decodePgm(good.subarray(0, good.length - 1))).toThrow("raster");
    expect(() => decodePgm(new TextEncoder().encode("P7\n1 1\n255\n0"))).toThrow("graymap");
  });

  it("rejects samples above maxval on encode", () => {
    expect(() =>
      encodePgm({ rows: 1, cols: 1, maxval: 100, samples: Uint16Array.of(101) }),
    ).toThrow("exceeds");
  });
});
