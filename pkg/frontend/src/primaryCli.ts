/**
 * Thin wrapper over the simulator's command line.
 *
 * The trainer consumes the simulator exclusively through its public
 * interfaces: the `bbfm` CLI plus the float32/manifest file formats it
 * emits.
 */

import { spawnSync } from "node:child_process";
import { existsSync, mkdirSync } from "node:fs";
import { dirname } from "node:path";

export function runPrimary(args: string[]): string {
    const proc = spawnSync("bbfm", args, { encoding: "utf-8" });
    if (proc.error) {
        throw new Error(`failed to run bbfm: ${proc.error.message}`);
    }
    if (proc.status !== 0) {
        throw new Error(`bbfm ${args.join(" ")} failed: ${proc.stderr}`);
    }
    return proc.stdout;
}

export function ensureFadingFile(path: string, velocityKmh: number,
                                 samples: number, seed: number,
                                 rateHz = 2000): void {
    if (existsSync(path)) {
        return;
    }
    mkdirSync(dirname(path), { recursive: true });
    runPrimary(["fading-gen", "--rate", String(rateHz),
                "--samples", String(samples),
                "--velocity-kmh", String(velocityKmh),
                "--delay-us", "200",
                "--seed", String(seed), "--out", path]);
}

export function ensureGoldenBundle(dir: string, channel: "awgn" | "lmr",
                                   setPointDbm: number, symbols: number,
                                   seed: number): void {
    if (existsSync(`${dir}/manifest.json`)) {
        return;
    }
    runPrimary(["golden", "--profile", "rade",
                "--set-point", String(setPointDbm),
                "--channel", channel,
                "--symbols", String(symbols),
                "--seed", String(seed), "--out-dir", dir]);
}
