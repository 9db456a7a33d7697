import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "node",
    include: ["tests/**/*.test.ts"],
    testTimeout: 60000,
    hookTimeout: 60000,
    // the round-trip suite drives one shared server; keep files sequential
    fileParallelism: false,
  },
});
