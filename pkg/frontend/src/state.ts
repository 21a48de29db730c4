/**
 * Client-side session model: a mirror of the server state, advanced only by
 * acknowledged mutations, plus the input-normalization rules for the
 * controls (coefficient slider on a [0, 2] grid of 0.01, shifts integer
 * unless the subpixel toggle is on).
 */

import type { EngineName, SessionState } from "./api.js";

export const COEFFICIENT_MIN = 0;
export const COEFFICIENT_MAX = 2;
export const COEFFICIENT_STEP = 0.01;

/** Clamps to [0, 2] and snaps to the 0.01 slider grid; non-finite becomes 0. */
export function clampCoefficient(value: number): number {
  if (!Number.isFinite(value)) return COEFFICIENT_MIN;
  const bounded = Math.min(COEFFICIENT_MAX, Math.max(COEFFICIENT_MIN, value));
  return Math.round(bounded / COEFFICIENT_STEP) * COEFFICIENT_STEP;
}

/** Integer steps by default; the subpixel toggle admits fractional shifts. */
export function normalizeShift(value: number, subpixel: boolean): number {
  if (!Number.isFinite(value)) return 0;
  return subpixel ? value : Math.round(value);
}

export interface LayerView {
  name: string;
  coefficient: number;
  sx: number;
  sy: number;
  subpixel: boolean;
}

export class SessionModel {
  readonly id: string;
  revision: number;
  engine: EngineName;
  readonly layers: LayerView[];

  constructor(state: SessionState) {
    this.id = state.id;
    this.revision = state.revision;
    this.engine = state.engine;
    this.layers = state.layers.map((layer) => ({
      name: layer.name,
      coefficient: layer.coefficient,
      sx: layer.sx,
      sy: layer.sy,
      subpixel: !Number.isInteger(layer.sx) || !Number.isInteger(layer.sy),
    }));
  }

  /** Mirrors an acknowledged PATCH; the revision never moves backwards. */
  ackLayerPatch(
    index: number,
    patch: { coefficient?: number; sx?: number; sy?: number },
    revision: number,
  ): void {
    const layer = this.layers[index];
    if (layer === undefined) throw new Error(`no layer ${index}`);
    if (patch.coefficient !== undefined) layer.coefficient = patch.coefficient;
    if (patch.sx !== undefined) layer.sx = patch.sx;
    if (patch.sy !== undefined) layer.sy = patch.sy;
    this.revision = Math.max(this.revision, revision);
  }

  ackEngine(engine: EngineName, revision: number): void {
    this.engine = engine;
    this.revision = Math.max(this.revision, revision);
  }
}
