/**
 * Numeric codec shared with the primary implementation.
 *
 * Manifests and run reports carry floats as decimal strings (shortest
 * round-trip form, with "inf" / "-inf" for infinities) while integers stay
 * native JSON numbers. Decoding either form yields the exact float64.
 */

/** Decode a manifest number: native ints pass through, strings are parsed. */
export function decodeNumber(value: unknown): number {
  if (typeof value === "number") {
    if (!Number.isFinite(value)) {
      throw new Error(`non-finite native number in manifest: ${value}`);
    }
    return value;
  }
  if (typeof value !== "string") {
    throw new Error(`not a decimal number: ${JSON.stringify(value)}`);
  }
  const text = value.trim();
  if (text === "inf") return Infinity;
  if (text === "-inf") return -Infinity;
  if (text === "") {
    throw new Error("not a decimal number: ''");
  }
  const parsed = Number(text);
  if (Number.isNaN(parsed)) {
    throw new Error(`not a decimal number: ${JSON.stringify(value)}`);
  }
  return parsed;
}

/** Render a float the way the primary does: shortest round-trip decimal. */
export function encodeNumber(value: number): string {
  if (Number.isNaN(value)) {
    throw new Error("NaN is not a valid config value");
  }
  if (value === Infinity) return "inf";
  if (value === -Infinity) return "-inf";
  // String(-0) would drop the sign bit.
  if (Object.is(value, -0)) return "-0.0";
  // String() is the shortest decimal that round-trips to the same float64;
  // parsers on both sides recover the identical bits.
  return String(value);
}
