/**
 * Minimal binary PGM (P5) codec, layout-compatible with the server's files:
 * header "P5\n{cols} {rows}\n{maxval}\n", then row-major samples, one byte
 * each up to maxval 255 and big-endian byte pairs above that.
 */

export interface GrayImage {
  rows: number;
  cols: number;
  maxval: number;
  /** Row-major samples, length rows*cols. */
  samples: Uint16Array;
}

export function encodePgm(image: GrayImage): Uint8Array {
  const { rows, cols, maxval, samples } = image;
  if (rows < 1 || cols < 1 || maxval < 1 || maxval > 65535) {
    throw new Error(`bad image geometry ${rows}x${cols} maxval ${maxval}`);
  }
  if (samples.length !== rows * cols) {
    throw new Error(`expected ${rows * cols} samples, got ${samples.length}`);
  }
  const header = new TextEncoder().encode(`P5\n${cols} ${rows}\n${maxval}\n`);
  const wide = maxval > 255;
  const raster = new Uint8Array(samples.length * (wide ? 2 : 1));
  for (let i = 0; i < samples.length; i++) {
    const value = samples[i];
    if (value > maxval) throw new Error(`sample ${value} exceeds maxval ${maxval}`);
    if (wide) {
      raster[2 * i] = value >> 8;
      raster[2 * i + 1] = value & 0xff;
    } else {
      raster[i] = value;
    }
  }
  const out = new Uint8Array(header.length + raster.length);
  out.set(header, 0);
  out.set(raster, header.length);
  return out;
}

function isSpace(byte: number): boolean {
  return byte === 0x20 || byte === 0x09 || byte === 0x0a || byte === 0x0d || byte === 0x0c;
}

/** Reads the next whitespace-delimited header token, skipping # comments. */
function nextToken(bytes: Uint8Array, pos: number): [string, number] {
  while (pos < bytes.length) {
    if (isSpace(bytes[pos])) {
      pos++;
    } else if (bytes[pos] === 0x23) {
      while (pos < bytes.length && bytes[pos] !== 0x0a) pos++;
    } else {
      break;
    }
  }
  const start = pos;
  while (pos < bytes.length && !isSpace(bytes[pos]) && bytes[pos] !== 0x23) pos++;
  if (pos === start) throw new Error("truncated header");
  return [new TextDecoder().decode(bytes.subarray(start, pos)), pos];
}

export function decodePgm(bytes: Uint8Array): GrayImage {
  if (bytes.length < 2 || bytes[0] !== 0x50 || bytes[1] !== 0x35) {
    throw new Error("not a binary graymap");
  }
  let pos = 2;
  let cols: number, rows: number, maxval: number;
  let token: string;
  [token, pos] = nextToken(bytes, pos);
  cols = Number(token);
  [token, pos] = nextToken(bytes, pos);
  rows = Number(token);
  [token, pos] = nextToken(bytes, pos);
  maxval = Number(token);
  if (!Number.isInteger(cols) || !Number.isInteger(rows) || !Number.isInteger(maxval)) {
    throw new Error(`malformed header fields ${cols} ${rows} ${maxval}`);
  }
  if (cols < 1 || rows < 1 || maxval < 1 || maxval > 65535) {
    throw new Error(`bad image geometry ${rows}x${cols} maxval ${maxval}`);
  }
  pos++; // single whitespace byte separates header from raster
  const wide = maxval > 255;
  const count = rows * cols;
  const need = count * (wide ? 2 : 1);
  if (bytes.length - pos < need) {
    throw new Error(`raster needs ${need} bytes, found ${bytes.length - pos}`);
  }
  const samples = new Uint16Array(count);
  for (let i = 0; i < count; i++) {
    samples[i] = wide ? (bytes[pos + 2 * i] << 8) | bytes[pos + 2 * i + 1] : bytes[pos + i];
  }
  return { rows, cols, maxval, samples };
}
