/**
 * Generate the simulator-produced inputs the tests and the acceptance run
 * consume: golden bundles and fading magnitude files. Everything is seeded,
 * so re-running is a no-op once the files exist.
 */

import { existsSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { dirname, join } from "node:path";

import { ensureFadingFile, ensureGoldenBundle } from "../src/primaryCli.js";

function packageRoot(): string {
    let dir = dirname(fileURLToPath(import.meta.url));
    while (!existsSync(join(dir, "package.json"))) {
        const parent = dirname(dir);
        if (parent === dir) {
            throw new Error("package root not found");
        }
        dir = parent;
    }
    return dir;
}

export const TESTDATA_DIR = join(packageRoot(), "testdata");

export function generateUnitTestData(): void {
    ensureGoldenBundle(join(TESTDATA_DIR, "golden-lmr"), "lmr", -112, 20000, 101);
    ensureGoldenBundle(join(TESTDATA_DIR, "golden-awgn"), "awgn", -118, 20000, 202);
    ensureFadingFile(join(TESTDATA_DIR, "fading-small-60.f32"), 60, 100000, 301);
}

export function generateAcceptanceData(): void {
    generateUnitTestData();
    ensureFadingFile(join(TESTDATA_DIR, "fading-train-60.f32"), 60, 2000000, 900);
    ensureFadingFile(join(TESTDATA_DIR, "fading-eval-30.f32"), 30, 600000, 930);
    ensureFadingFile(join(TESTDATA_DIR, "fading-eval-60.f32"), 60, 600000, 960);
    ensureFadingFile(join(TESTDATA_DIR, "fading-eval-120.f32"), 120, 600000, 1012);
}

const invokedDirectly = process.argv[1]
    && fileURLToPath(import.meta.url) === process.argv[1];
if (invokedDirectly) {
    generateAcceptanceData();
    console.log(`test data ready in ${TESTDATA_DIR}`);
}
