/**
 * Local metric recomputation for parity checks.
 *
 * Only the headline metric is reimplemented here; everything else is read
 * from the primary evaluator's reports. Sums use pairwise accumulation so
 * the result stays within a few ulps of the reference value regardless of
 * tensor size.
 */

import { Tensor3 } from "./tensor.js";

function pairwiseSum(values: Float64Array, lo: number, hi: number): number {
  const n = hi - lo;
  if (n <= 8) {
    let total = 0;
    for (let i = lo; i < hi; i++) {
      total += values[i];
    }
    return total;
  }
  const mid = lo + (n >> 1);
  return pairwiseSum(values, lo, mid) + pairwiseSum(values, mid, hi);
}

/** Mean squared error over all windows, variates, and horizon steps. */
export function mseClean(predictions: Tensor3, targets: Tensor3): number {
  const [a, b, c] = predictions.shape;
  const [x, y, z] = targets.shape;
  if (a !== x || b !== y || c !== z) {
    throw new Error(
      `prediction shape (${predictions.shape}) does not match target ` +
        `shape (${targets.shape})`
    );
  }
  if (predictions.size === 0) {
    throw new Error("cannot evaluate zero windows");
  }
  const squares = new Float64Array(predictions.size);
  for (let i = 0; i < squares.length; i++) {
    const diff = predictions.data[i] - targets.data[i];
    squares[i] = diff * diff;
  }
  return pairwiseSum(squares, 0, squares.length) / squares.length;
}
