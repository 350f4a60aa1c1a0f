import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "node",
    include: ["test/**/*.test.ts"],
    // generous budget for the end-to-end run against a spawned service
    testTimeout: 60000,
    hookTimeout: 60000,
  },
});
