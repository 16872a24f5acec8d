/**
 * Prediction exchange files, byte-compatible with the evaluator CLI.
 *
 * Binary layout:
 *
 *     bytes 0..7    magic "SBPRED01"
 *     bytes 8..31   little-endian uint64 triple (n_windows, n_variates, horizon)
 *     bytes 32..63  SHA-256 of the payload
 *     bytes 64..    payload: float64 little-endian, C order
 *
 * The CSV alternative carries one row per (window, variate) pair under a
 * "window,variate,h0,h1,..." header.
 */

import { createHash } from "node:crypto";
import { readFileSync, writeFileSync } from "node:fs";

import { Tensor3 } from "./tensor.js";

export const PREDICTION_MAGIC = "SBPRED01";
const MAGIC_LENGTH = 8;
const SHAPE_LENGTH = 24;
const DIGEST_LENGTH = 32;
const HEADER_LENGTH = MAGIC_LENGTH + SHAPE_LENGTH + DIGEST_LENGTH;

function checkTensor(predictions: Tensor3): void {
  if (predictions.size === 0) {
    throw new Error("prediction tensor is empty");
  }
}

/** Write the binary container. */
export function writePredictions(predictions: Tensor3, path: string): void {
  checkTensor(predictions);
  const payload = Buffer.alloc(predictions.size * 8);
  const view = new DataView(payload.buffer, payload.byteOffset, payload.byteLength);
  for (let i = 0; i < predictions.data.length; i++) {
    view.setFloat64(i * 8, predictions.data[i], true);
  }
  const header = Buffer.alloc(MAGIC_LENGTH + SHAPE_LENGTH);
  header.write(PREDICTION_MAGIC, 0, "ascii");
  predictions.shape.forEach((dim, i) => {
    header.writeBigUInt64LE(BigInt(dim), MAGIC_LENGTH + i * 8);
  });
  const digest = createHash("sha256").update(payload).digest();
  writeFileSync(path, Buffer.concat([header, digest, payload]));
}

/** Read and verify a binary container. */
export function readPredictions(path: string): Tensor3 {
  let blob: Buffer;
  try {
    blob = readFileSync(path);
  } catch {
    throw new Error(`prediction file not found: ${path}`);
  }
  if (blob.length < HEADER_LENGTH) {
    throw new Error(`prediction file ${path} is truncated`);
  }
  if (blob.toString("ascii", 0, MAGIC_LENGTH) !== PREDICTION_MAGIC) {
    throw new Error(`${path} is not a prediction exchange file`);
  }
  const shape: [number, number, number] = [0, 0, 0];
  for (let i = 0; i < 3; i++) {
    const dim = blob.readBigUInt64LE(MAGIC_LENGTH + i * 8);
    if (dim > BigInt(Number.MAX_SAFE_INTEGER)) {
      throw new Error(`prediction dimension ${dim} is not representable`);
    }
    shape[i] = Number(dim);
  }
  const digest = blob.subarray(MAGIC_LENGTH + SHAPE_LENGTH, HEADER_LENGTH);
  const payload = blob.subarray(HEADER_LENGTH);
  const expected = shape[0] * shape[1] * shape[2] * 8;
  if (payload.length !== expected) {
    throw new Error(
      `prediction payload holds ${payload.length} bytes, expected ${expected} ` +
        `for shape (${shape})`
    );
  }
  const actual = createHash("sha256").update(payload).digest();
  if (!actual.equals(digest)) {
    throw new Error(`prediction payload checksum mismatch in ${path}`);
  }
  const data = new Float64Array(shape[0] * shape[1] * shape[2]);
  const view = new DataView(payload.buffer, payload.byteOffset, payload.byteLength);
  for (let i = 0; i < data.length; i++) {
    data[i] = view.getFloat64(i * 8, true);
  }
  return new Tensor3(shape, data);
}

/** Write the CSV alternative; one row per (window, variate) pair. */
export function writePredictionsCsv(predictions: Tensor3, path: string): void {
  checkTensor(predictions);
  const [nWindows, nVariates, horizon] = predictions.shape;
  const headings: string[] = ["window", "variate"];
  for (let i = 0; i < horizon; i++) {
    headings.push(`h${i}`);
  }
  const lines: string[] = [headings.join(",")];
  for (let w = 0; w < nWindows; w++) {
    for (let v = 0; v < nVariates; v++) {
      const row: string[] = [String(w), String(v)];
      for (let k = 0; k < horizon; k++) {
        row.push(String(predictions.get(w, v, k)));
      }
      lines.push(row.join(","));
    }
  }
  writeFileSync(path, lines.join("\n") + "\n");
}

/** Read the CSV alternative back into a (windows, variates, H) tensor. */
export function readPredictionsCsv(path: string): Tensor3 {
  let text: string;
  try {
    text = readFileSync(path, "utf-8");
  } catch {
    throw new Error(`prediction file not found: ${path}`);
  }
  const lines = text.split("\n");
  const header = (lines[0] ?? "").trim().split(",");
  if (header[0] !== "window" || header[1] !== "variate" || header.length < 3) {
    throw new Error(`${path} does not start with a prediction header`);
  }
  const horizon = header.length - 2;
  const cells = new Map<string, number[]>();
  let maxWindow = -1;
  let maxVariate = -1;
  for (let i = 1; i < lines.length; i++) {
    const line = lines[i].trim();
    if (line === "") continue;
    const lineNo = i + 1;
    const parts = line.split(",");
    if (parts.length !== horizon + 2) {
      throw new Error(
        `${path}:${lineNo} holds ${parts.length} fields, expected ${horizon + 2}`
      );
    }
    const w = Number(parts[0]);
    const v = Number(parts[1]);
    const values = parts.slice(2).map(Number);
    if (
      !Number.isInteger(w) ||
      !Number.isInteger(v) ||
      values.some((x) => Number.isNaN(x))
    ) {
      throw new Error(`${path}:${lineNo}: non-numeric prediction row`);
    }
    cells.set(`${w},${v}`, values);
    maxWindow = Math.max(maxWindow, w);
    maxVariate = Math.max(maxVariate, v);
  }
  if (cells.size === 0) {
    throw new Error(`${path} holds no prediction rows`);
  }
  const nWindows = maxWindow + 1;
  const nVariates = maxVariate + 1;
  if (cells.size !== nWindows * nVariates) {
    throw new Error(
      `${path} holds ${cells.size} rows, expected ${nWindows * nVariates} ` +
        `for a full (window, variate) grid`
    );
  }
  const out = new Tensor3([nWindows, nVariates, horizon]);
  for (const [key, values] of cells) {
    const [w, v] = key.split(",").map(Number);
    for (let k = 0; k < horizon; k++) {
      out.set(w, v, k, values[k]);
    }
  }
  return out;
}
