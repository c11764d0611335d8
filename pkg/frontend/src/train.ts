/**
 * End-to-end training of the toy autoencoder through the differentiable
 * channel.
 *
 * Every 4 s sequence gets its own set point drawn uniformly from the
 * configured range (per sequence, not per batch) and, on the fading
 * channel, its own stretch of the fading magnitude stream. Noise draws come
 * from a seeded generator so runs are reproducible.
 */

import { tf } from "./backend.js";
import { applyChannel } from "./channel.js";
import {
    FRAMES_PER_SEQUENCE,
    FRAME_VALUES,
    SYMBOLS_PER_FRAME,
    Dataset,
} from "./features.js";
import { LinkParams, sigmaForMagnitudes, noiseSigma, snrDb } from "./linkModel.js";
import { Autoencoder, buildAutoencoder, decode, encode } from "./model.js";
import { gaussianArray, gaussianSource, mulberry32, Rng } from "./rng.js";

export type ChannelKind = "awgn" | "lmr60";

export interface TrainConfig {
    channel: ChannelKind;
    link: LinkParams;
    setPointRangeDbm: [number, number];
    epochs: number;
    batchSize: number;
    learningRate: number;
    seed: number;
    /** Fading magnitudes at the symbol rate; required for the lmr60 channel. */
    fadingMagnitudes?: Float32Array;
}

export interface TrainResult {
    ae: Autoencoder;
    trainLoss: number[];
    heldOutLoss: number[];
    elapsedSeconds: number;
}

const SYMBOLS_PER_SEQUENCE = FRAMES_PER_SEQUENCE * SYMBOLS_PER_FRAME;

/** Per-symbol noise scales for one sequence at one set point. */
export function sequenceSigma(config: {
    channel: ChannelKind;
    link: LinkParams;
    fadingMagnitudes?: Float32Array;
}, setPointDbm: number, uniform: Rng): Float32Array {
    if (config.channel === "awgn") {
        const sigma = noiseSigma(config.link, snrDb(config.link, setPointDbm));
        return new Float32Array(SYMBOLS_PER_SEQUENCE).fill(sigma);
    }
    const magnitudes = config.fadingMagnitudes;
    if (!magnitudes || magnitudes.length < SYMBOLS_PER_SEQUENCE) {
        throw new Error("lmr60 channel needs a fading stream of at least "
            + `${SYMBOLS_PER_SEQUENCE} samples`);
    }
    const maxStart = magnitudes.length - SYMBOLS_PER_SEQUENCE;
    const start = Math.floor(uniform() * (maxStart + 1));
    return sigmaForMagnitudes(
        config.link, setPointDbm,
        magnitudes.subarray(start, start + SYMBOLS_PER_SEQUENCE));
}

interface BatchTensors {
    features: tf.Tensor3D;
    sigma: tf.Tensor3D;
    noise: tf.Tensor3D;
}

function makeBatch(config: TrainConfig, sequences: Float32Array[],
                   indices: number[], uniform: Rng, gauss: Rng): BatchTensors {
    const batch = indices.length;
    const feat = new Float32Array(batch * FRAMES_PER_SEQUENCE * FRAME_VALUES);
    const sig = new Float32Array(batch * SYMBOLS_PER_SEQUENCE);
    const [lo, hi] = config.setPointRangeDbm;
    for (let b = 0; b < batch; b++) {
        feat.set(sequences[indices[b]], b * FRAMES_PER_SEQUENCE * FRAME_VALUES);
        const setPoint = lo + (hi - lo) * uniform();
        sig.set(sequenceSigma(config, setPoint, uniform),
                b * SYMBOLS_PER_SEQUENCE);
    }
    const noise = gaussianArray(gauss, batch * SYMBOLS_PER_SEQUENCE);
    return {
        features: tf.tensor3d(feat, [batch, FRAMES_PER_SEQUENCE, FRAME_VALUES]),
        sigma: tf.tensor3d(sig, [batch, FRAMES_PER_SEQUENCE, SYMBOLS_PER_FRAME]),
        noise: tf.tensor3d(noise, [batch, FRAMES_PER_SEQUENCE, SYMBOLS_PER_FRAME]),
    };
}

function reconstructionLoss(ae: Autoencoder, batch: BatchTensors): tf.Scalar {
    const z = encode(ae, batch.features);
    const zhat = applyChannel(z, batch.sigma, batch.noise) as tf.Tensor3D;
    const estimate = decode(ae, zhat);
    return tf.losses.meanSquaredError(batch.features, estimate) as tf.Scalar;
}

/** Mean held-out loss with deterministic noise, no gradient bookkeeping. */
export function evaluateLoss(ae: Autoencoder, config: {
    channel: ChannelKind;
    link: LinkParams;
    fadingMagnitudes?: Float32Array;
}, sequences: Float32Array[], setPointDbm: number, seed: number): number {
    const uniform = mulberry32(seed);
    const gauss = gaussianSource(mulberry32(seed ^ 0x5bd1e995));
    let total = 0;
    const batchSize = 32;
    for (let at = 0; at < sequences.length; at += batchSize) {
        const indices: number[] = [];
        for (let i = at; i < Math.min(at + batchSize, sequences.length); i++) {
            indices.push(i);
        }
        const value = tf.tidy(() => {
            const batch = makeBatch({
                channel: config.channel, link: config.link,
                fadingMagnitudes: config.fadingMagnitudes,
                setPointRangeDbm: [setPointDbm, setPointDbm],
                epochs: 0, batchSize: indices.length, learningRate: 0,
                seed,
            }, sequences, indices, uniform, gauss);
            return reconstructionLoss(ae, batch).dataSync()[0];
        });
        total += value * indices.length;
    }
    return total / sequences.length;
}

export async function train(config: TrainConfig, dataset: Dataset,
                            heldOut: Dataset,
                            log: (line: string) => void = () => {}):
        Promise<TrainResult> {
    const startMs = Date.now();
    const ae = buildAutoencoder(config.seed);
    const optimizer = tf.train.adam(config.learningRate);
    const uniform = mulberry32(config.seed ^ 0xc0ffee);
    const gauss = gaussianSource(mulberry32(config.seed ^ 0xdecafbad));
    const order = dataset.sequences.map((_, i) => i);

    const trainLoss: number[] = [];
    const heldOutLoss: number[] = [];
    for (let epoch = 0; epoch < config.epochs; epoch++) {
        // deterministic shuffle per epoch
        for (let i = order.length - 1; i > 0; i--) {
            const j = Math.floor(uniform() * (i + 1));
            [order[i], order[j]] = [order[j], order[i]];
        }
        let epochSum = 0;
        let steps = 0;
        for (let at = 0; at + config.batchSize <= order.length;
             at += config.batchSize) {
            const indices = order.slice(at, at + config.batchSize);
            const lossValue = tf.tidy(() => {
                const batch = makeBatch(config, dataset.sequences, indices,
                                        uniform, gauss);
                const { value, grads } = tf.variableGrads(
                    () => reconstructionLoss(ae, batch));
                // variableGrads returns a NamedTensorMap; applyGradients
                // accepts it at runtime despite the narrower typing
                optimizer.applyGradients(
                    grads as Parameters<typeof optimizer.applyGradients>[0]);
                return value.dataSync()[0];
            });
            if (!Number.isFinite(lossValue)) {
                throw new Error(
                    `training diverged: loss=${lossValue} at epoch ${epoch} `
                    + `step ${steps} (lr=${config.learningRate})`);
            }
            epochSum += lossValue;
            steps += 1;
        }
        trainLoss.push(epochSum / steps);
        const midpoint = (config.setPointRangeDbm[0]
            + config.setPointRangeDbm[1]) / 2;
        heldOutLoss.push(evaluateLoss(ae, config, heldOut.sequences,
                                      midpoint, config.seed + 7000 + epoch));
        log(`epoch ${epoch + 1}/${config.epochs}: train ${trainLoss[epoch].toFixed(4)} `
            + `held-out@${midpoint} dBm ${heldOutLoss[epoch].toFixed(4)}`);
        await tf.nextFrame();
    }
    return {
        ae, trainLoss, heldOutLoss,
        elapsedSeconds: (Date.now() - startMs) / 1000,
    };
}
