import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    // Every binding call spawns the CLI (interpreter start-up included),
    // so the equivalence suites need room.
    testTimeout: 900_000,
    hookTimeout: 900_000,
  },
});
