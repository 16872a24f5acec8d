import { mkdirSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ColumnMatrix, loadInstance, sha256Hex } from "../src/loader.js";
import { decodeConfig } from "../src/manifest.js";

const TEST_DIR = join(process.cwd(), "test-output", "loader");

const N = 6;
const V = 2;

/** Hand-built instance directory matching the generator's on-disk layout. */
function writeFixture(directory: string, tamper?: (name: string) => void): void {
  mkdirSync(directory, { recursive: true });
  const clean = new Float64Array(N * V);
  const mixed = new Float64Array(N * V);
  for (let i = 0; i < clean.length; i++) {
    clean[i] = Math.sin(i + 1);
    mixed[i] = clean[i] + 0.25;
  }
  const entries: Record<string, { file: string; sha256: string }> = {};
  for (const [name, data] of [
    ["clean", clean],
    ["mixed", mixed],
  ] as const) {
    const matrix = new ColumnMatrix(N, V, data);
    const payload = matrix.toBytes();
    const file = `${name}.f64`;
    writeFileSync(join(directory, file), payload);
    entries[name] = { file, sha256: sha256Hex(payload) };
  }
  const manifest = {
    format_version: 1,
    generator: { name: "synthbench", version: "0.0.0" },
    config: {
      n_samples: N,
      n_variates: V,
      seasonal_kind: "sine",
      band: ["1.0", "2.0"],
      trend_enabled: false,
      exponent_range: ["0.5", "2.0"],
      noise_kind: "white",
      snr: "10.0",
      sigma_snr: "0.0",
      penalty: "2.0",
      lookback: 2,
      horizon: 1,
      seed: 0,
      census: null,
      split: { train: "0.7", val: "0.1", test: "0.2" },
    },
    recipes: [],
    mixing: [null, null],
    arrays: {
      clean: { ...entries.clean, shape: [N, V], dtype: "float64-le", order: "F" },
      mixed: { ...entries.mixed, shape: [N, V], dtype: "float64-le", order: "F" },
    },
  };
  writeFileSync(
    join(directory, "manifest.json"),
    JSON.stringify(manifest, null, 2) + "\n"
  );
  if (tamper) tamper(directory);
}

beforeAll(() => {
  rmSync(TEST_DIR, { recursive: true, force: true });
  mkdirSync(TEST_DIR, { recursive: true });
});

afterAll(() => {
  rmSync(TEST_DIR, { recursive: true, force: true });
});

describe("ColumnMatrix", () => {
  it("indexes column-major data and exposes zero-copy columns", () => {
    const data = new Float64Array([1, 2, 3, 10, 20, 30]);
    const matrix = new ColumnMatrix(3, 2, data);
    expect(matrix.get(1, 0)).toBe(2);
    expect(matrix.get(1, 1)).toBe(20);
    expect([...matrix.column(1)]).toEqual([10, 20, 30]);
    expect(() => matrix.get(3, 0)).toThrow(/sample index/);
    expect(() => matrix.column(2)).toThrow(/variate index/);
  });

  it("re-serializes to the exact on-disk bytes", () => {
    const data = new Float64Array([0.1, -2.5, 3e7, 1 / 3, -0.0, 42]);
    const matrix = new ColumnMatrix(3, 2, data);
    const bytes = matrix.toBytes();
    expect(bytes.length).toBe(48);
    expect(bytes.readDoubleLE(0)).toBe(0.1);
    expect(bytes.readDoubleLE(24)).toBe(1 / 3);
  });

  it("rejects mismatched data length", () => {
    expect(() => new ColumnMatrix(3, 2, new Float64Array(5))).toThrow(
      /holds 5 values/
    );
  });
});

describe("loadInstance", () => {
  it("loads a well-formed directory and decodes the config", () => {
    const dir = join(TEST_DIR, "ok");
    writeFixture(dir);
    const instance = loadInstance(dir);
    expect(instance.config.nSamples).toBe(N);
    expect(instance.config.band).toEqual([1, 2]);
    expect(instance.config.snr).toBe(10);
    expect(instance.config.split.train).toBe(0.7);
    expect(instance.clean.get(0, 0)).toBe(Math.sin(1));
    expect(instance.mixed.get(0, 0)).toBe(Math.sin(1) + 0.25);
  });

  it("rejects checksum mismatches", () => {
    const dir = join(TEST_DIR, "corrupt");
    writeFixture(dir, (d) => {
      const path = join(d, "mixed.f64");
      const blob = readFileSync(path);
      blob[7] ^= 0x01;
      writeFileSync(path, blob);
    });
    expect(() => loadInstance(dir)).toThrow(/checksum mismatch/);
  });

  it("rejects truncated array files", () => {
    const dir = join(TEST_DIR, "truncated");
    writeFixture(dir, (d) => {
      const path = join(d, "clean.f64");
      writeFileSync(path, readFileSync(path).subarray(0, 17));
    });
    expect(() => loadInstance(dir)).toThrow(/checksum mismatch/);
  });

  it("rejects missing files and unsupported versions", () => {
    expect(() => loadInstance(join(TEST_DIR, "absent"))).toThrow(/no manifest/);
    const dir = join(TEST_DIR, "version");
    writeFixture(dir, (d) => {
      const path = join(d, "manifest.json");
      const manifest = JSON.parse(readFileSync(path, "utf-8"));
      manifest.format_version = 99;
      writeFileSync(path, JSON.stringify(manifest));
    });
    expect(() => loadInstance(dir)).toThrow(/format version 99/);
  });

  it("rejects array shapes that disagree with the config", () => {
    const dir = join(TEST_DIR, "shape");
    writeFixture(dir, (d) => {
      const path = join(d, "manifest.json");
      const manifest = JSON.parse(readFileSync(path, "utf-8"));
      manifest.config.n_samples = N + 1;
      writeFileSync(path, JSON.stringify(manifest));
    });
    expect(() => loadInstance(dir)).toThrow(/config says/);
  });
});

describe("decodeConfig", () => {
  it("decodes a noise-free config with infinite snr", () => {
    const config = decodeConfig({
      n_samples: 16,
      n_variates: 1,
      seasonal_kind: "square",
      band: ["1.0", "2.0"],
      trend_enabled: true,
      exponent_range: ["0.5", "2.0"],
      noise_kind: null,
      snr: "inf",
      sigma_snr: "0.0",
      penalty: "2.0",
      lookback: 4,
      horizon: 2,
      seed: 7,
      split: { train: "0.7", val: "0.1", test: "0.2" },
    });
    expect(config.noiseKind).toBeNull();
    expect(config.snr).toBe(Infinity);
    expect(config.trendEnabled).toBe(true);
  });

  it("rejects malformed pairs and missing splits", () => {
    expect(() => decodeConfig({ band: ["1.0"] } as never)).toThrow(/split/);
  });
});
