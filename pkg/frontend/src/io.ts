/**
 * Readers for the simulator's external file formats: raw little-endian
 * float32 arrays and their JSON manifests.
 */

import { readFileSync } from "node:fs";
import { join } from "node:path";

export function readF32(path: string): Float32Array {
    const buf = readFileSync(path);
    return new Float32Array(buf.buffer, buf.byteOffset, buf.byteLength / 4);
}

export interface GoldenManifest {
    schema_version: number;
    command: string;
    parameters: {
        deviation_hz: number;
        max_mod_freq_hz: number;
        noise_figure_db: number;
        temperature_k: number;
        peak_amplitude: number;
        mean_mod_power: number;
        set_point_dbm: number;
        symbol_rate_hz: number;
        num_symbols: number;
        channel: string;
        fm_gain_db: number;
        threshold_dbm: number;
    };
    seeds: Record<string, number>;
    outputs: Record<string, string>;
}

export interface GoldenBundle {
    manifest: GoldenManifest;
    tx: Float32Array;
    fading: Float32Array;
    sigma: Float32Array;
    noise: Float32Array;
    rx: Float32Array;
}

export function readManifest(path: string): GoldenManifest {
    return JSON.parse(readFileSync(path, "utf-8")) as GoldenManifest;
}

export function readGoldenBundle(dir: string): GoldenBundle {
    const manifest = readManifest(join(dir, "manifest.json"));
    return {
        manifest,
        tx: readF32(join(dir, "tx.f32")),
        fading: readF32(join(dir, "fading.f32")),
        sigma: readF32(join(dir, "sigma.f32")),
        noise: readF32(join(dir, "noise.f32")),
        rx: readF32(join(dir, "rx.f32")),
    };
}

/** Fading magnitude file plus the sample rate recorded in its manifest. */
export function readFadingFile(path: string): { magnitudes: Float32Array; rateHz: number } {
    const magnitudes = readF32(path);
    const manifest = JSON.parse(readFileSync(path + ".json", "utf-8"));
    return { magnitudes, rateHz: manifest.parameters.rate_hz as number };
}
