/**
 * Manifest reading for generated instance directories.
 *
 * A directory holds manifest.json plus the clean.f64 / mixed.f64 array
 * files it describes. The manifest pins the generator config, per-variate
 * recipes, realized mixing weights, and SHA-256 checksums of the arrays.
 */

import { readFileSync } from "node:fs";
import { join } from "node:path";

import { decodeNumber } from "./numbers.js";

export const FORMAT_VERSION = 1;
export const MANIFEST_NAME = "manifest.json";

export interface ArrayEntry {
  file: string;
  shape: number[];
  dtype: string;
  order: string;
  sha256: string;
}

/** Raw manifest JSON; config numbers are still encoded strings here. */
export interface Manifest {
  format_version: number;
  generator: { name: string; version: string };
  config: Record<string, unknown>;
  recipes: unknown[];
  mixing: unknown[];
  arrays: { clean: ArrayEntry; mixed: ArrayEntry };
}

export interface SplitRatios {
  train: number;
  val: number;
  test: number;
}

/** Decoded generation parameters, in the adapter's own field casing. */
export interface InstanceConfig {
  nSamples: number;
  nVariates: number;
  seasonalKind: string;
  band: [number, number];
  trendEnabled: boolean;
  exponentRange: [number, number];
  noiseKind: string | null;
  snr: number;
  sigmaSnr: number;
  penalty: number;
  lookback: number;
  horizon: number;
  seed: number;
  split: SplitRatios;
}

export function readManifest(directory: string): Manifest {
  const path = join(directory, MANIFEST_NAME);
  let text: string;
  try {
    text = readFileSync(path, "utf-8");
  } catch {
    throw new Error(`no manifest at ${path}`);
  }
  let manifest: Manifest;
  try {
    manifest = JSON.parse(text) as Manifest;
  } catch (exc) {
    throw new Error(`malformed manifest ${path}: ${(exc as Error).message}`);
  }
  const version = Number(manifest.format_version ?? -1);
  if (version !== FORMAT_VERSION) {
    throw new Error(
      `manifest format version ${version} is not the supported ${FORMAT_VERSION}`
    );
  }
  for (const name of ["clean", "mixed"] as const) {
    const entry = manifest.arrays?.[name];
    if (!entry || typeof entry.file !== "string" || typeof entry.sha256 !== "string") {
      throw new Error(`manifest ${path} is missing the ${name} array entry`);
    }
  }
  return manifest;
}

function decodePair(value: unknown, field: string): [number, number] {
  if (!Array.isArray(value) || value.length !== 2) {
    throw new Error(`config field ${field} is not a pair`);
  }
  return [decodeNumber(value[0]), decodeNumber(value[1])];
}

/** Decode the manifest's config block into native numbers. */
export function decodeConfig(raw: Record<string, unknown>): InstanceConfig {
  const split = raw.split as Record<string, unknown> | undefined;
  if (!split) {
    throw new Error("config is missing the split ratios");
  }
  return {
    nSamples: decodeNumber(raw.n_samples),
    nVariates: decodeNumber(raw.n_variates),
    seasonalKind: String(raw.seasonal_kind),
    band: decodePair(raw.band, "band"),
    trendEnabled: Boolean(raw.trend_enabled),
    exponentRange: decodePair(raw.exponent_range, "exponent_range"),
    noiseKind: raw.noise_kind === null ? null : String(raw.noise_kind),
    snr: decodeNumber(raw.snr),
    sigmaSnr: decodeNumber(raw.sigma_snr),
    penalty: decodeNumber(raw.penalty),
    lookback: decodeNumber(raw.lookback),
    horizon: decodeNumber(raw.horizon),
    seed: decodeNumber(raw.seed),
    split: {
      train: decodeNumber(split.train),
      val: decodeNumber(split.val),
      test: decodeNumber(split.test),
    },
  };
}
