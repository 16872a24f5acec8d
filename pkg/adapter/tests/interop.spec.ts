import { execFileSync } from "node:child_process";
import { mkdirSync, rmSync, writeFileSync } from "node:fs";
import { join } from "node:path";
import { beforeAll, describe, expect, it } from "vitest";

import { loadInstance, sha256Hex } from "../src/loader.js";
import { mseClean } from "../src/metrics.js";
import { parityCheck, readPrimaryReport } from "../src/parity.js";
import {
  readPredictions,
  readPredictionsCsv,
  writePredictions,
  writePredictionsCsv,
} from "../src/predictions.js";
import { Tensor3 } from "../src/tensor.js";
import { batches, enumerateWindows, windowSpan, windowTensors } from "../src/windows.js";

/**
 * Cross-implementation parity against the Python reference.
 *
 * Fixtures are generated by the real CLI, loaded here, and results are
 * compared value-for-value: arrays must be bit-equal, window enumeration
 * identical, and metrics within 1e-9 of the evaluator's reports.
 */

const TEST_DIR = join(process.cwd(), "test-output", "interop");
const DATA_ROOT = join(TEST_DIR, "data");
const NOISY_DIR = join(DATA_ROOT, "sine-b20-40-white-snr10-s0");
const CLEAN_DIR = join(DATA_ROOT, "sine-b20-40-nonoise-snrinf-s1");

function runPython(args: string[]): string {
  return execFileSync("python3", args, { encoding: "utf-8", timeout: 90_000 });
}

/** Rank-3 tensor with data[i] = (i - 11) / 7, matching the Python fixture. */
function rampTensor(shape: [number, number, number]): Tensor3 {
  const tensor = new Tensor3(shape);
  for (let i = 0; i < tensor.data.length; i++) {
    tensor.data[i] = (i - 11) / 7;
  }
  return tensor;
}

beforeAll(() => {
  rmSync(TEST_DIR, { recursive: true, force: true });
  mkdirSync(DATA_ROOT, { recursive: true });
  const noisy = {
    n_samples: 2000,
    n_variates: 4,
    seasonal_kind: "sine",
    band: [20, 40],
    noise_kind: "white",
    snr: 10.0,
    lookback: 48,
    horizon: 48,
    seed: 0,
  };
  const noiseFree = { ...noisy, noise_kind: null, snr: "inf", seed: 1 };
  const noisyConfig = join(TEST_DIR, "noisy.json");
  const cleanConfig = join(TEST_DIR, "noise-free.json");
  writeFileSync(noisyConfig, JSON.stringify(noisy));
  writeFileSync(cleanConfig, JSON.stringify(noiseFree));
  for (const config of [noisyConfig, cleanConfig]) {
    runPython([
      "-m",
      "synthbench",
      "generate",
      "--config",
      config,
      "--out",
      DATA_ROOT,
    ]);
  }
});

describe("instance loading", () => {
  it("loads arrays bit-equal to the generator's", () => {
    const instance = loadInstance(NOISY_DIR);
    expect(instance.config.nSamples).toBe(2000);
    expect(instance.config.nVariates).toBe(4);
    expect(instance.config.snr).toBe(10);
    // Re-serializing the decoded matrices reproduces the checksummed bytes,
    // so every float64 survived the trip unchanged.
    for (const name of ["clean", "mixed"] as const) {
      const digest = sha256Hex(instance[name].toBytes());
      expect(digest).toBe(instance.manifest.arrays[name].sha256);
    }
    // Spot-check exact values against the reference in-memory arrays.
    const points = [
      [0, 0],
      [1, 3],
      [777, 2],
      [1999, 3],
    ];
    const dump = JSON.parse(
      runPython([
        "-c",
        `
import json, sys
from synthbench.dataset import read_instance
inst = read_instance(sys.argv[1])
pts = ${JSON.stringify(points)}
print(json.dumps({
    "clean": [repr(float(inst.clean[k, v])) for k, v in pts],
    "mixed": [repr(float(inst.mixed[k, v])) for k, v in pts],
}))
`,
        NOISY_DIR,
      ])
    ) as { clean: string[]; mixed: string[] };
    points.forEach(([k, v], i) => {
      expect(instance.clean.get(k, v)).toBe(Number(dump.clean[i]));
      expect(instance.mixed.get(k, v)).toBe(Number(dump.mixed[i]));
    });
  });

  it("refuses a corrupted copy", () => {
    const copy = join(TEST_DIR, "corrupted-instance");
    rmSync(copy, { recursive: true, force: true });
    runPython([
      "-c",
      `
import shutil, sys
shutil.copytree(sys.argv[1], sys.argv[2])
path = sys.argv[2] + "/mixed.f64"
blob = bytearray(open(path, "rb").read())
blob[100] ^= 0xFF
open(path, "wb").write(bytes(blob))
`,
      NOISY_DIR,
      copy,
    ]);
    expect(() => loadInstance(copy)).toThrow(/checksum mismatch/);
  });
});

describe("window enumeration", () => {
  it("matches the generator's split ranges and window pairs", () => {
    const instance = loadInstance(NOISY_DIR);
    for (const [split, stride] of [
      ["train", 1],
      ["val", 7],
      ["test", 48],
    ] as const) {
      const reference = JSON.parse(
        runPython([
          "-c",
          `
import json, sys
from synthbench.bench import window_span
from synthbench.dataset import read_instance, windows
inst = read_instance(sys.argv[1])
span = window_span(inst, sys.argv[2])
pairs = windows(span, inst.config.lookback, inst.config.horizon, int(sys.argv[3]))
print(json.dumps({"span": span, "pairs": pairs}))
`,
          NOISY_DIR,
          split,
          String(stride),
        ])
      ) as { span: [number, number]; pairs: number[][][] };
      const span = windowSpan(instance, split);
      expect([...span]).toEqual(reference.span);
      const pairs = enumerateWindows(span, 48, 48, stride).map((p) => [
        [...p.input],
        [...p.target],
      ]);
      expect(pairs).toEqual(reference.pairs);
    }
  });

  it("starts the train split at ([0, T), [T, T+H))", () => {
    const instance = loadInstance(NOISY_DIR);
    const [first] = [...batches(instance, "train", 48, 48, 1)];
    expect(first.windows[0]).toEqual({ input: [0, 48], target: [48, 96] });
  });

  it("separates noised and clean targets exactly when snr is finite", () => {
    const instance = loadInstance(NOISY_DIR);
    let differing = 0;
    for (const batch of batches(instance, "test", 48, 48, 16, 48)) {
      for (let i = 0; i < batch.cleanTargets.data.length; i++) {
        if (batch.cleanTargets.data[i] !== batch.noisedTargets.data[i]) {
          differing += 1;
        }
      }
    }
    expect(differing).toBeGreaterThan(0);
  });

  it("yields identical targets when the instance is noise-free", () => {
    const instance = loadInstance(CLEAN_DIR);
    expect(instance.config.snr).toBe(Infinity);
    for (const batch of batches(instance, "test", 48, 48, 16, 48)) {
      expect([...batch.cleanTargets.data]).toEqual([...batch.noisedTargets.data]);
    }
  });
});

describe("prediction exchange and metric parity", () => {
  it("evaluator accepts adapter files and the MSE matches within 1e-9", () => {
    const instance = loadInstance(NOISY_DIR);
    const span = windowSpan(instance, "test");
    const pairs = enumerateWindows(span, 48, 48, 48);
    const zeros = new Tensor3([pairs.length, 4, 48]);
    const binPath = join(TEST_DIR, "zeros.pred");
    writePredictions(zeros, binPath);

    const stdout = runPython([
      "-m",
      "synthbench",
      "eval",
      "--predictions",
      binPath,
      "--data",
      NOISY_DIR,
      "--model",
      "ts-adapter",
    ]);
    const reportPath = stdout.trim().split(" -> ").pop() as string;
    const report = readPrimaryReport(reportPath);
    expect(report.metadata.model).toBe("ts-adapter");
    expect(report.metadata.n_windows).toBe(pairs.length);

    const cleanTargets = windowTensors(instance.clean, pairs, 48, 48).targets;
    const noisedTargets = windowTensors(instance.mixed, pairs, 48, 48).targets;
    const localClean = mseClean(zeros, cleanTargets);
    const localNoisy = mseClean(zeros, noisedTargets);

    const clean = parityCheck(report.mseClean, localClean);
    expect(clean.passed).toBe(true);
    expect(clean.maxAbsDiff).toBeLessThanOrEqual(1e-9);
    const noisy = parityCheck(report.mseNoisy, localNoisy);
    expect(noisy.passed).toBe(true);

    // A deliberate perturbation well above tolerance must be caught.
    const perturbed = parityCheck(report.mseClean, localClean + 1e-6);
    expect(perturbed.passed).toBe(false);
    expect(perturbed.maxAbsDiff).toBeGreaterThan(perturbed.tolerance);
  });

  it("csv predictions score identically to the binary container", () => {
    const instance = loadInstance(NOISY_DIR);
    const pairs = enumerateWindows(windowSpan(instance, "test"), 48, 48, 48);
    const zeros = new Tensor3([pairs.length, 4, 48]);
    const csvPath = join(TEST_DIR, "zeros.csv");
    writePredictionsCsv(zeros, csvPath);
    const stdout = runPython([
      "-m",
      "synthbench",
      "eval",
      "--predictions",
      csvPath,
      "--data",
      NOISY_DIR,
      "--format",
      "csv",
      "--model",
      "ts-adapter-csv",
    ]);
    const report = readPrimaryReport(stdout.trim().split(" -> ").pop() as string);
    const binReport = readPrimaryReport(
      stdout.trim().split(" -> ").pop()!.replace("ts-adapter-csv", "ts-adapter")
    );
    expect(report.mseClean).toBe(binReport.mseClean);
    expect(report.mseNoisy).toBe(binReport.mseNoisy);
  });

  it("reads prediction files written by the reference implementation", () => {
    const binPath = join(TEST_DIR, "py-written.pred");
    const csvPath = join(TEST_DIR, "py-written.csv");
    runPython([
      "-c",
      `
import sys
import numpy as np
from synthbench.predictions import write_predictions, write_predictions_csv
tensor = (np.arange(30, dtype=np.float64).reshape(5, 3, 2) - 11.0) / 7.0
write_predictions(tensor, sys.argv[1])
write_predictions_csv(tensor, sys.argv[2])
`,
      binPath,
      csvPath,
    ]);
    const expected = rampTensor([5, 3, 2]);
    for (const loaded of [readPredictions(binPath), readPredictionsCsv(csvPath)]) {
      expect(loaded.shape).toEqual([5, 3, 2]);
      expect([...loaded.data]).toEqual([...expected.data]);
    }
  });

  it("writes prediction files the reference implementation reads back", () => {
    const binPath = join(TEST_DIR, "ts-written.pred");
    const csvPath = join(TEST_DIR, "ts-written.csv");
    const tensor = rampTensor([3, 2, 4]);
    writePredictions(tensor, binPath);
    writePredictionsCsv(tensor, csvPath);
    const stdout = runPython([
      "-c",
      `
import sys
import numpy as np
from synthbench.predictions import read_predictions, read_predictions_csv
binary = read_predictions(sys.argv[1])
csv = read_predictions_csv(sys.argv[2])
expected = (np.arange(24, dtype=np.float64).reshape(3, 2, 4) - 11.0) / 7.0
assert binary.shape == (3, 2, 4), binary.shape
assert np.array_equal(binary, expected), "binary values differ"
assert np.array_equal(csv, expected), "csv values differ"
print("ok")
`,
      binPath,
      csvPath,
    ]);
    expect(stdout.trim()).toBe("ok");
  });
});
