import { defineConfig } from "vitest/config";

export default defineConfig({
    test: {
        include: ["test/**/*.test.ts"],
        globalSetup: ["test/setup.ts"],
        testTimeout: 180_000,
        hookTimeout: 180_000,
        // tfjs holds wasm state per process; keep tests in one worker
        pool: "forks",
        poolOptions: { forks: { singleFork: true } },
    },
});
