export { Tensor3 } from "./tensor.js";
export { decodeNumber, encodeNumber } from "./numbers.js";
export {
  FORMAT_VERSION,
  MANIFEST_NAME,
  readManifest,
  decodeConfig,
} from "./manifest.js";
export type {
  ArrayEntry,
  Manifest,
  InstanceConfig,
  SplitRatios,
} from "./manifest.js";
export { ColumnMatrix, loadInstance, sha256Hex } from "./loader.js";
export type { LoadedInstance } from "./loader.js";
export {
  SPLIT_NAMES,
  splitRanges,
  enumerateWindows,
  windowSpan,
  windowTensors,
  batches,
} from "./windows.js";
export type { Span, SplitName, WindowPair, WindowBatch } from "./windows.js";
export {
  PREDICTION_MAGIC,
  writePredictions,
  readPredictions,
  writePredictionsCsv,
  readPredictionsCsv,
} from "./predictions.js";
export { mseClean } from "./metrics.js";
export {
  DEFAULT_TOLERANCE,
  parityCheck,
  readPrimaryReport,
} from "./parity.js";
export type { ParityResult, PrimaryReport } from "./parity.js";
