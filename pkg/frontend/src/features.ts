/**
 * Synthetic stand-in feature sequences.
 *
 * 20 values per 10 ms step, built from per-dimension AR(1) processes with
 * speech-like correlation times plus a slow syllabic energy modulation on
 * the leading dimensions. Sequences are 4 s (400 steps, grouped 4 steps per
 * 40 ms frame) and normalized to zero mean / unit variance with the
 * normalization recorded alongside the dataset.
 */

import { gaussianSource, mulberry32, Rng } from "./rng.js";

export const FEATURE_DIM = 20;
export const STEPS_PER_FRAME = 4;
export const FRAME_SECONDS = 0.040;
export const SYMBOLS_PER_FRAME = 80;
export const SYMBOL_RATE_HZ = SYMBOLS_PER_FRAME / FRAME_SECONDS; // 2000 exactly
export const SEQUENCE_SECONDS = 4.0;
export const FRAMES_PER_SEQUENCE = Math.round(SEQUENCE_SECONDS / FRAME_SECONDS);
export const STEPS_PER_SEQUENCE = FRAMES_PER_SEQUENCE * STEPS_PER_FRAME;
/** Encoder/decoder operate frame-wise on stacked steps. */
export const FRAME_VALUES = FEATURE_DIM * STEPS_PER_FRAME; // 80

export interface Dataset {
    /** [numSequences][FRAMES_PER_SEQUENCE * FRAME_VALUES] normalized values. */
    sequences: Float32Array[];
    mean: Float32Array;
    std: Float32Array;
}

function rawSequence(gauss: Rng, uniform: Rng): Float32Array {
    const out = new Float32Array(STEPS_PER_SEQUENCE * FEATURE_DIM);
    const state = new Float64Array(FEATURE_DIM);
    const rho = new Float64Array(FEATURE_DIM);
    for (let d = 0; d < FEATURE_DIM; d++) {
        // slower dynamics on the low dimensions, faster on top
        rho[d] = 0.99 - 0.15 * (d / FEATURE_DIM);
        state[d] = gauss();
    }
    // syllabic energy modulation around 4 Hz
    const sylRate = 3 + 3 * uniform();
    const sylPhase = 2 * Math.PI * uniform();
    for (let t = 0; t < STEPS_PER_SEQUENCE; t++) {
        const energy = 1 + 0.6 * Math.sin(2 * Math.PI * sylRate * t * 0.01 + sylPhase);
        for (let d = 0; d < FEATURE_DIM; d++) {
            state[d] = rho[d] * state[d]
                + Math.sqrt(1 - rho[d] * rho[d]) * gauss();
            const gain = d < 4 ? energy : 1.0;
            out[t * FEATURE_DIM + d] = state[d] * gain;
        }
    }
    return out;
}

export function makeDataset(numSequences: number, seed: number,
                            stats?: { mean: Float32Array; std: Float32Array }): Dataset {
    const uniform = mulberry32(seed);
    const gauss = gaussianSource(mulberry32(seed ^ 0x9e3779b9));
    const sequences: Float32Array[] = [];
    for (let s = 0; s < numSequences; s++) {
        sequences.push(rawSequence(gauss, uniform));
    }
    if (stats) {
        // held-out data reuses the training normalization
        for (const seq of sequences) {
            for (let t = 0; t < STEPS_PER_SEQUENCE; t++) {
                for (let d = 0; d < FEATURE_DIM; d++) {
                    const i = t * FEATURE_DIM + d;
                    seq[i] = (seq[i] - stats.mean[d]) / stats.std[d];
                }
            }
        }
        return { sequences, mean: stats.mean, std: stats.std };
    }
    const mean = new Float32Array(FEATURE_DIM);
    const std = new Float32Array(FEATURE_DIM);
    const count = numSequences * STEPS_PER_SEQUENCE;
    for (const seq of sequences) {
        for (let t = 0; t < STEPS_PER_SEQUENCE; t++) {
            for (let d = 0; d < FEATURE_DIM; d++) {
                mean[d] += seq[t * FEATURE_DIM + d];
            }
        }
    }
    for (let d = 0; d < FEATURE_DIM; d++) {
        mean[d] /= count;
    }
    for (const seq of sequences) {
        for (let t = 0; t < STEPS_PER_SEQUENCE; t++) {
            for (let d = 0; d < FEATURE_DIM; d++) {
                const delta = seq[t * FEATURE_DIM + d] - mean[d];
                std[d] += delta * delta;
            }
        }
    }
    for (let d = 0; d < FEATURE_DIM; d++) {
        std[d] = Math.sqrt(std[d] / count) || 1;
    }
    for (const seq of sequences) {
        for (let t = 0; t < STEPS_PER_SEQUENCE; t++) {
            for (let d = 0; d < FEATURE_DIM; d++) {
                const i = t * FEATURE_DIM + d;
                seq[i] = (seq[i] - mean[d]) / std[d];
            }
        }
    }
    return { sequences, mean, std };
}
