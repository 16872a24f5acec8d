/**
 * Parity checking against the primary evaluator's run reports.
 *
 * Reports are JSON files whose floats are decimal strings. A parity check
 * compares a locally recomputed value (or vector) against the primary's
 * and reports the maximum absolute difference alongside the verdict.
 */

import { readFileSync } from "node:fs";

import { decodeNumber } from "./numbers.js";

export const DEFAULT_TOLERANCE = 1e-9;

export interface ParityResult {
  passed: boolean;
  maxAbsDiff: number;
  tolerance: number;
}

function asArray(value: number | readonly number[]): readonly number[] {
  return typeof value === "number" ? [value] : value;
}

/**
 * Compare primary-reported values against a local recomputation.
 *
 * Fails when lengths differ, any entry is non-finite, or the largest
 * absolute difference exceeds the tolerance.
 */
export function parityCheck(
  primary: number | readonly number[],
  local: number | readonly number[],
  tolerance = DEFAULT_TOLERANCE
): ParityResult {
  const a = asArray(primary);
  const b = asArray(local);
  if (a.length !== b.length || a.length === 0) {
    return { passed: false, maxAbsDiff: Infinity, tolerance };
  }
  let maxAbsDiff = 0;
  for (let i = 0; i < a.length; i++) {
    if (!Number.isFinite(a[i]) || !Number.isFinite(b[i])) {
      return { passed: false, maxAbsDiff: Infinity, tolerance };
    }
    maxAbsDiff = Math.max(maxAbsDiff, Math.abs(a[i] - b[i]));
  }
  return { passed: maxAbsDiff <= tolerance, maxAbsDiff, tolerance };
}

/** Decoded subset of a primary run report used for parity checks. */
export interface PrimaryReport {
  mseClean: number;
  mseNoisy: number;
  perStepMse: number[];
  spectralError: number[] | null;
  metadata: Record<string, unknown>;
}

export function readPrimaryReport(path: string): PrimaryReport {
  let raw: Record<string, unknown>;
  try {
    raw = JSON.parse(readFileSync(path, "utf-8")) as Record<string, unknown>;
  } catch (exc) {
    throw new Error(`unreadable run report ${path}: ${(exc as Error).message}`);
  }
  const spectral = raw.spectral_error as unknown[] | null | undefined;
  return {
    mseClean: decodeNumber(raw.mse_clean),
    mseNoisy: decodeNumber(raw.mse_noisy),
    perStepMse: (raw.per_step_mse as unknown[]).map(decodeNumber),
    spectralError:
      spectral === null || spectral === undefined
        ? null
        : spectral.map(decodeNumber),
    metadata: (raw.metadata as Record<string, unknown>) ?? {},
  };
}
