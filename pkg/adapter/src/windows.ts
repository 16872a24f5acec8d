/**
 * Split ranges, window enumeration, and batch iteration.
 *
 * The arithmetic mirrors the generator's windowing exactly: train and val
 * lengths are floored fractions of the sample count, test takes the
 * remainder, and forecast windows slide as ([t, t+T), [t+T, t+T+H)) pairs.
 * Batches feed external forecasters the mixed observation as input while
 * carrying both the noised and the noise-free targets for scoring.
 */

import { ColumnMatrix, LoadedInstance } from "./loader.js";
import { SplitRatios } from "./manifest.js";
import { Tensor3 } from "./tensor.js";

export type Span = readonly [number, number];

export interface WindowPair {
  input: Span;
  target: Span;
}

export const SPLIT_NAMES = ["train", "val", "test"] as const;
export type SplitName = (typeof SPLIT_NAMES)[number];

/**
 * Chronological (train, val, test) index ranges covering [0, nSamples).
 *
 * Pass minLength = lookback + horizon to guarantee every split can hold at
 * least one forecast window.
 */
export function splitRanges(
  nSamples: number,
  split: SplitRatios,
  minLength = 1
): [Span, Span, Span] {
  if (!Number.isInteger(nSamples) || nSamples < 1) {
    throw new Error(`n_samples must be positive, got ${nSamples}`);
  }
  const total = split.train + split.val + split.test;
  if (!(split.train > 0 && split.val > 0 && split.test > 0)) {
    throw new Error(`split ratios must be positive, got ${JSON.stringify(split)}`);
  }
  if (Math.abs(total - 1.0) > 1e-9) {
    throw new Error(`split ratios sum to ${total}, expected 1`);
  }
  const trainEnd = Math.floor(nSamples * split.train);
  const valEnd = trainEnd + Math.floor(nSamples * split.val);
  const ranges: [Span, Span, Span] = [
    [0, trainEnd],
    [trainEnd, valEnd],
    [valEnd, nSamples],
  ];
  SPLIT_NAMES.forEach((name, i) => {
    const [lo, hi] = ranges[i];
    if (hi - lo < minLength) {
      throw new Error(
        `${name} split holds ${hi - lo} samples, fewer than the required ${minLength}`
      );
    }
  });
  return ranges;
}

/** Sliding ([t, t+T), [t+T, t+T+H)) pairs inside the span. */
export function enumerateWindows(
  span: Span,
  lookback: number,
  horizon: number,
  stride = 1
): WindowPair[] {
  const [lo, hi] = span;
  if (lookback < 1 || horizon < 1) {
    throw new Error(
      `lookback and horizon must be positive, got ${lookback} and ${horizon}`
    );
  }
  if (stride < 1) {
    throw new Error(`stride must be positive, got ${stride}`);
  }
  const pairs: WindowPair[] = [];
  for (let t = lo; t < hi - lookback - horizon + 1; t += stride) {
    pairs.push({
      input: [t, t + lookback],
      target: [t + lookback, t + lookback + horizon],
    });
  }
  return pairs;
}

/** Index range of one chronological split of a loaded instance. */
export function windowSpan(instance: LoadedInstance, split: SplitName): Span {
  const index = SPLIT_NAMES.indexOf(split);
  if (index < 0) {
    throw new Error(`unknown split '${split}'; expected one of ${SPLIT_NAMES}`);
  }
  const config = instance.config;
  const ranges = splitRanges(
    config.nSamples,
    config.split,
    config.lookback + config.horizon
  );
  return ranges[index];
}

/** Copy the window slices of a matrix into (windows, variates, steps) tensors. */
export function windowTensors(
  matrix: ColumnMatrix,
  pairs: WindowPair[],
  lookback: number,
  horizon: number
): { inputs: Tensor3; targets: Tensor3 } {
  const nVariates = matrix.nVariates;
  const inputs = new Tensor3([pairs.length, nVariates, lookback]);
  const targets = new Tensor3([pairs.length, nVariates, horizon]);
  pairs.forEach((pair, w) => {
    const [inLo] = pair.input;
    const [tgLo] = pair.target;
    for (let v = 0; v < nVariates; v++) {
      const column = matrix.column(v);
      for (let k = 0; k < lookback; k++) {
        inputs.set(w, v, k, column[inLo + k]);
      }
      for (let k = 0; k < horizon; k++) {
        targets.set(w, v, k, column[tgLo + k]);
      }
    }
  });
  return { inputs, targets };
}

export interface WindowBatch {
  /** Absolute sample-index pairs of the windows in this batch. */
  windows: WindowPair[];
  /** (batch, variates, lookback) slice of the mixed observation. */
  inputs: Tensor3;
  /** (batch, variates, horizon) slice of the mixed observation. */
  noisedTargets: Tensor3;
  /** (batch, variates, horizon) slice of the noise-free signal. */
  cleanTargets: Tensor3;
}

/**
 * Iterate a split's forecast windows in fixed-size batches.
 *
 * Enumeration order and window indices are identical to the generator's
 * own windowing; the final batch may be short. Inputs and noised targets
 * come from the mixed matrix, clean targets from the noise-free one, so a
 * model trains on what it would observe but can be scored on the signal.
 */
export function* batches(
  instance: LoadedInstance,
  split: SplitName,
  lookback: number,
  horizon: number,
  batchSize: number,
  stride = 1
): Generator<WindowBatch> {
  if (!Number.isInteger(batchSize) || batchSize < 1) {
    throw new Error(`batch size must be a positive integer, got ${batchSize}`);
  }
  const span = windowSpan(instance, split);
  const pairs = enumerateWindows(span, lookback, horizon, stride);
  if (pairs.length === 0) {
    throw new Error(
      `${split} split holds no (${lookback}, ${horizon}) windows at stride ${stride}`
    );
  }
  for (let start = 0; start < pairs.length; start += batchSize) {
    const chunk = pairs.slice(start, start + batchSize);
    const mixed = windowTensors(instance.mixed, chunk, lookback, horizon);
    const clean = windowTensors(instance.clean, chunk, lookback, horizon);
    yield {
      windows: chunk,
      inputs: mixed.inputs,
      noisedTargets: mixed.targets,
      cleanTargets: clean.targets,
    };
  }
}
