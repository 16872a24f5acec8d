/**
 * Instance loading with checksum verification.
 *
 * Array files are float64 little-endian in column-major order, so one
 * variate's samples are contiguous on disk. Loading verifies each file's
 * SHA-256 against the manifest before decoding, which makes the in-memory
 * values bit-equal to what the generator wrote.
 */

import { createHash } from "node:crypto";
import { readFileSync } from "node:fs";
import { join } from "node:path";

import {
  ArrayEntry,
  InstanceConfig,
  Manifest,
  decodeConfig,
  readManifest,
} from "./manifest.js";

/** Two-dimensional float64 matrix stored column-major, like the files. */
export class ColumnMatrix {
  constructor(
    readonly nSamples: number,
    readonly nVariates: number,
    readonly data: Float64Array
  ) {
    if (data.length !== nSamples * nVariates) {
      throw new Error(
        `matrix data holds ${data.length} values, expected ` +
          `${nSamples * nVariates} for (${nSamples}, ${nVariates})`
      );
    }
  }

  get(sample: number, variate: number): number {
    if (sample < 0 || sample >= this.nSamples) {
      throw new Error(`sample index ${sample} outside [0, ${this.nSamples})`);
    }
    return this.data[this.columnOffset(variate) + sample];
  }

  /** Zero-copy view of one variate's full series. */
  column(variate: number): Float64Array {
    const start = this.columnOffset(variate);
    return this.data.subarray(start, start + this.nSamples);
  }

  /** Re-serialize to the on-disk layout (float64 LE, column-major). */
  toBytes(): Buffer {
    const buffer = Buffer.alloc(this.data.length * 8);
    const view = new DataView(buffer.buffer, buffer.byteOffset, buffer.byteLength);
    for (let i = 0; i < this.data.length; i++) {
      view.setFloat64(i * 8, this.data[i], true);
    }
    return buffer;
  }

  private columnOffset(variate: number): number {
    if (variate < 0 || variate >= this.nVariates) {
      throw new Error(`variate index ${variate} outside [0, ${this.nVariates})`);
    }
    return variate * this.nSamples;
  }
}

export interface LoadedInstance {
  directory: string;
  manifest: Manifest;
  config: InstanceConfig;
  clean: ColumnMatrix;
  mixed: ColumnMatrix;
}

export function sha256Hex(payload: Buffer): string {
  return createHash("sha256").update(payload).digest("hex");
}

function loadMatrix(directory: string, entry: ArrayEntry): ColumnMatrix {
  const path = join(directory, entry.file);
  let payload: Buffer;
  try {
    payload = readFileSync(path);
  } catch {
    throw new Error(`missing array file ${path}`);
  }
  const digest = sha256Hex(payload);
  if (digest !== entry.sha256) {
    throw new Error(
      `checksum mismatch for ${path}: manifest says ${entry.sha256}, ` +
        `file hashes to ${digest}`
    );
  }
  if (entry.dtype !== "float64-le" || entry.order !== "F") {
    throw new Error(`unsupported array encoding ${entry.dtype}/${entry.order}`);
  }
  const [nSamples, nVariates] = entry.shape.map(Number);
  const expected = nSamples * nVariates * 8;
  if (payload.length !== expected) {
    throw new Error(
      `array file ${entry.file} holds ${payload.length} bytes, expected ${expected}`
    );
  }
  const data = new Float64Array(nSamples * nVariates);
  const view = new DataView(payload.buffer, payload.byteOffset, payload.byteLength);
  for (let i = 0; i < data.length; i++) {
    data[i] = view.getFloat64(i * 8, true);
  }
  return new ColumnMatrix(nSamples, nVariates, data);
}

/**
 * Load a generated instance directory.
 *
 * Both matrices are checksum-verified against the manifest; a truncated,
 * corrupted, or re-encoded file fails loudly rather than returning skewed
 * data.
 */
export function loadInstance(directory: string): LoadedInstance {
  const manifest = readManifest(directory);
  const config = decodeConfig(manifest.config);
  const clean = loadMatrix(directory, manifest.arrays.clean);
  const mixed = loadMatrix(directory, manifest.arrays.mixed);
  for (const [name, matrix] of [
    ["clean", clean],
    ["mixed", mixed],
  ] as const) {
    if (
      matrix.nSamples !== config.nSamples ||
      matrix.nVariates !== config.nVariates
    ) {
      throw new Error(
        `${name} matrix is (${matrix.nSamples}, ${matrix.nVariates}), config ` +
          `says (${config.nSamples}, ${config.nVariates})`
      );
    }
  }
  return { directory, manifest, config, clean, mixed };
}
