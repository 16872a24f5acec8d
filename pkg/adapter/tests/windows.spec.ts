import { describe, expect, it } from "vitest";

import { ColumnMatrix, LoadedInstance } from "../src/loader.js";
import { InstanceConfig, Manifest } from "../src/manifest.js";
import {
  batches,
  enumerateWindows,
  splitRanges,
  windowSpan,
  windowTensors,
} from "../src/windows.js";

const SPLIT = { train: 0.7, val: 0.1, test: 0.2 };

/** In-memory instance with clean[k, v] = k + 1000 v and mixed = clean + 0.5. */
function fakeInstance(nSamples: number, nVariates: number): LoadedInstance {
  const cleanData = new Float64Array(nSamples * nVariates);
  const mixedData = new Float64Array(nSamples * nVariates);
  for (let v = 0; v < nVariates; v++) {
    for (let k = 0; k < nSamples; k++) {
      cleanData[v * nSamples + k] = k + 1000 * v;
      mixedData[v * nSamples + k] = k + 1000 * v + 0.5;
    }
  }
  const config: InstanceConfig = {
    nSamples,
    nVariates,
    seasonalKind: "sine",
    band: [20, 40],
    trendEnabled: false,
    exponentRange: [0.5, 2.0],
    noiseKind: "white",
    snr: 10,
    sigmaSnr: 0,
    penalty: 2,
    lookback: 10,
    horizon: 5,
    seed: 0,
    split: SPLIT,
  };
  return {
    directory: "",
    manifest: {} as Manifest,
    config,
    clean: new ColumnMatrix(nSamples, nVariates, cleanData),
    mixed: new ColumnMatrix(nSamples, nVariates, mixedData),
  };
}

describe("splitRanges", () => {
  it("floors train and val and gives test the remainder", () => {
    expect(splitRanges(35040, SPLIT)).toEqual([
      [0, 24528],
      [24528, 28032],
      [28032, 35040],
    ]);
  });

  it("matches the reference arithmetic at the default sample count", () => {
    expect(splitRanges(8760, SPLIT)).toEqual([
      [0, 6132],
      [6132, 7008],
      [7008, 8760],
    ]);
  });

  it("covers [0, n) without gaps", () => {
    const [train, val, test] = splitRanges(997, SPLIT);
    expect(train[0]).toBe(0);
    expect(train[1]).toBe(val[0]);
    expect(val[1]).toBe(test[0]);
    expect(test[1]).toBe(997);
  });

  it("rejects splits that leave a range too short", () => {
    expect(() => splitRanges(100, SPLIT, 50)).toThrow(/val split holds/);
  });

  it("rejects ratios that do not sum to one", () => {
    expect(() => splitRanges(100, { train: 0.5, val: 0.1, test: 0.2 })).toThrow(
      /sum to/
    );
  });

  it("rejects non-positive sample counts", () => {
    expect(() => splitRanges(0, SPLIT)).toThrow(/positive/);
  });
});

describe("enumerateWindows", () => {
  it("yields one window when the span exactly fits", () => {
    expect(enumerateWindows([0, 192], 96, 96)).toEqual([
      { input: [0, 96], target: [96, 192] },
    ]);
  });

  it("slides by one sample at stride 1", () => {
    const pairs = enumerateWindows([0, 193], 96, 96);
    expect(pairs.length).toBe(2);
    expect(pairs[1]).toEqual({ input: [1, 97], target: [97, 193] });
  });

  it("applies the stride between starts", () => {
    const pairs = enumerateWindows([100, 200], 10, 5, 20);
    expect(pairs.map((p) => p.input[0])).toEqual([100, 120, 140, 160, 180]);
    expect(pairs.every((p) => p.target[1] - p.input[0] === 15)).toBe(true);
  });

  it("returns no windows for spans that are too short", () => {
    expect(enumerateWindows([0, 14], 10, 5)).toEqual([]);
  });

  it("rejects non-positive lookback, horizon, and stride", () => {
    expect(() => enumerateWindows([0, 100], 0, 5)).toThrow(/positive/);
    expect(() => enumerateWindows([0, 100], 10, 0)).toThrow(/positive/);
    expect(() => enumerateWindows([0, 100], 10, 5, 0)).toThrow(/stride/);
  });
});

describe("windowSpan", () => {
  it("returns the chronological range of each split", () => {
    const instance = fakeInstance(200, 2);
    expect(windowSpan(instance, "train")).toEqual([0, 140]);
    expect(windowSpan(instance, "val")).toEqual([140, 160]);
    expect(windowSpan(instance, "test")).toEqual([160, 200]);
  });

  it("rejects unknown split names", () => {
    const instance = fakeInstance(200, 2);
    expect(() => windowSpan(instance, "holdout" as never)).toThrow(
      /unknown split/
    );
  });
});

describe("windowTensors", () => {
  it("copies the exact matrix slices", () => {
    const instance = fakeInstance(200, 2);
    const pairs = enumerateWindows([0, 40], 10, 5);
    const { inputs, targets } = windowTensors(instance.clean, pairs, 10, 5);
    expect(inputs.shape).toEqual([26, 2, 10]);
    expect(targets.shape).toEqual([26, 2, 5]);
    // Window w starts at sample w, so input step k holds w + k.
    expect(inputs.get(3, 0, 7)).toBe(10);
    expect(inputs.get(3, 1, 7)).toBe(1010);
    expect(targets.get(3, 0, 2)).toBe(15);
  });
});

describe("batches", () => {
  it("tiles the split into fixed-size batches with a short tail", () => {
    const instance = fakeInstance(200, 2);
    // Test split [160, 200) holds 26 stride-1 windows of (10, 5).
    const all = [...batches(instance, "test", 10, 5, 8)];
    expect(all.map((b) => b.windows.length)).toEqual([8, 8, 8, 2]);
    expect(all[0].windows[0]).toEqual({ input: [160, 170], target: [170, 175] });
    const flat = all.flatMap((b) => b.windows.map((p) => p.input[0]));
    expect(flat).toEqual(Array.from({ length: 26 }, (_, i) => 160 + i));
  });

  it("feeds mixed inputs and both target variants", () => {
    const instance = fakeInstance(200, 2);
    const [first] = [...batches(instance, "test", 10, 5, 4)];
    // Mixed series is clean + 0.5 everywhere.
    expect(first.inputs.get(0, 0, 0)).toBe(160.5);
    expect(first.noisedTargets.get(0, 0, 0)).toBe(170.5);
    expect(first.cleanTargets.get(0, 0, 0)).toBe(170);
    expect(first.inputs.shape).toEqual([4, 2, 10]);
    expect(first.noisedTargets.shape).toEqual([4, 2, 5]);
    expect(first.cleanTargets.shape).toEqual([4, 2, 5]);
  });

  it("honors the stride when enumerating windows", () => {
    const instance = fakeInstance(200, 2);
    const all = [...batches(instance, "test", 10, 5, 100, 5)];
    expect(all.length).toBe(1);
    expect(all[0].windows.map((p) => p.input[0])).toEqual([
      160, 165, 170, 175, 180, 185,
    ]);
  });

  it("rejects invalid batch sizes and empty splits", () => {
    const instance = fakeInstance(200, 2);
    expect(() => [...batches(instance, "test", 10, 5, 0)]).toThrow(/batch size/);
    expect(() => [...batches(instance, "test", 30, 15, 4)]).toThrow(
      /holds no/
    );
  });
});
