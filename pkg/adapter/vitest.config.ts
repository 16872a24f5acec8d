import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.spec.ts"],
    // Interop tests shell out to the Python CLI to build fixtures.
    testTimeout: 120_000,
    hookTimeout: 120_000,
  },
});
