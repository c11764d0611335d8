import { beforeAll, describe, expect, it } from "vitest";

import { ensureBackend, tf } from "../src/backend.js";
import {
    FRAMES_PER_SEQUENCE,
    FRAME_SECONDS,
    FRAME_VALUES,
    SYMBOLS_PER_FRAME,
    SYMBOL_RATE_HZ,
    makeDataset,
} from "../src/features.js";
import { buildAutoencoder, decode, encode, parameterCount, stackNeighbors } from "../src/model.js";
import { mulberry32 } from "../src/rng.js";

beforeAll(async () => {
    await ensureBackend();
});

describe("symbol rate accounting", () => {
    it("is exactly 2000 symbols per second", () => {
        expect(SYMBOLS_PER_FRAME).toBe(80);
        expect(FRAME_SECONDS).toBe(0.040);
        expect(SYMBOL_RATE_HZ).toBe(2000);
    });
});

describe("neighbor stacking", () => {
    it("concatenates previous, current and next frames", () => {
        const x = tf.tensor3d([[[1], [2], [3]]]); // one sequence, 3 frames, d=1
        const stacked = stackNeighbors(x);
        expect(stacked.shape).toEqual([1, 3, 3]);
        expect(Array.from(stacked.dataSync()))
            .toEqual([0, 1, 2, 1, 2, 3, 2, 3, 0]);
    });
});

describe("autoencoder", () => {
    // built lazily: layer construction needs the backend from beforeAll
    let ae: ReturnType<typeof buildAutoencoder>;
    beforeAll(() => {
        ae = buildAutoencoder(42);
    });

    it("stays under the parameter budget", () => {
        const count = parameterCount(ae);
        expect(count).toBeGreaterThan(10_000);
        expect(count).toBeLessThan(1_000_000);
    });

    it("bounds every symbol to the peak amplitude", () => {
        const uniform = mulberry32(7);
        for (const scale of [1, 10, 1000]) {
            const data = new Float32Array(2 * 5 * FRAME_VALUES);
            for (let i = 0; i < data.length; i++) {
                data[i] = (uniform() * 2 - 1) * scale;
            }
            const z = encode(ae, tf.tensor3d(data, [2, 5, FRAME_VALUES]));
            const values = z.dataSync();
            for (const v of values) {
                expect(Math.abs(v)).toBeLessThanOrEqual(ae.peakAmplitude);
            }
        }
    });

    it("produces matching shapes end to end", () => {
        const dataset = makeDataset(2, 3);
        const feat = tf.tensor3d(
            Float32Array.from([...dataset.sequences[0],
                               ...dataset.sequences[1]]),
            [2, FRAMES_PER_SEQUENCE, FRAME_VALUES]);
        const z = encode(ae, feat);
        expect(z.shape).toEqual([2, FRAMES_PER_SEQUENCE, SYMBOLS_PER_FRAME]);
        const out = decode(ae, z);
        expect(out.shape).toEqual([2, FRAMES_PER_SEQUENCE, FRAME_VALUES]);
    });
});

describe("dataset", () => {
    it("is deterministic and normalized", () => {
        const a = makeDataset(4, 9);
        const b = makeDataset(4, 9);
        expect(Array.from(a.sequences[2])).toEqual(Array.from(b.sequences[2]));
        let sum = 0;
        let sumSq = 0;
        let n = 0;
        for (const seq of a.sequences) {
            for (const v of seq) {
                sum += v;
                sumSq += v * v;
                n += 1;
            }
        }
        expect(Math.abs(sum / n)).toBeLessThan(0.05);
        expect(sumSq / n).toBeGreaterThan(0.8);
        expect(sumSq / n).toBeLessThan(1.2);
    });

    it("applies provided normalization to held-out data", () => {
        const train = makeDataset(4, 9);
        const held = makeDataset(2, 77, { mean: train.mean, std: train.std });
        expect(held.mean).toBe(train.mean);
        expect(held.sequences[0].length)
            .toBe(FRAMES_PER_SEQUENCE * FRAME_VALUES);
    });
});
