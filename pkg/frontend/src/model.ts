/**
 * Toy radio autoencoder.
 *
 * Both halves are frame-wise dense stacks with one frame of temporal
 * context mixed in by stacking each frame with its neighbors (a kernel-3
 * convolution realized as a dense layer over the stacked input, which the
 * wasm backend can differentiate). The encoder's tanh output scaled by the
 * peak amplitude enforces |z| <= A for every input by construction.
 */

import { tf } from "./backend.js";
import { FRAME_VALUES, SYMBOLS_PER_FRAME } from "./features.js";

export const HIDDEN_UNITS = 128;

export interface Autoencoder {
    encoder: tf.LayersModel;
    decoder: tf.LayersModel;
    peakAmplitude: number;
}

/** [batch, frames, d] -> [batch, frames, 3d]: previous | current | next. */
export function stackNeighbors(x: tf.Tensor3D): tf.Tensor3D {
    return tf.tidy(() => {
        const frames = x.shape[1];
        const pad = tf.pad(x, [[0, 0], [1, 1], [0, 0]]);
        const prev = tf.slice(pad, [0, 0, 0], [-1, frames, -1]);
        const next = tf.slice(pad, [0, 2, 0], [-1, frames, -1]);
        return tf.concat([prev, x, next], 2) as tf.Tensor3D;
    });
}

type HiddenActivation = "relu" | "tanh";

function denseStack(name: string, inputDim: number, outputDim: number,
                    outputActivation: "tanh" | "linear", seed: number,
                    hidden: HiddenActivation): tf.LayersModel {
    const model = tf.sequential({ name });
    model.add(tf.layers.dense({
        inputShape: [null, inputDim],
        units: HIDDEN_UNITS, activation: hidden,
        kernelInitializer: tf.initializers.glorotUniform({ seed }),
    }));
    model.add(tf.layers.dense({
        units: HIDDEN_UNITS, activation: hidden,
        kernelInitializer: tf.initializers.glorotUniform({ seed: seed + 1 }),
    }));
    model.add(tf.layers.dense({
        units: outputDim, activation: outputActivation,
        kernelInitializer: tf.initializers.glorotUniform({ seed: seed + 2 }),
    }));
    return model;
}

/**
 * Saturating (tanh) hidden units are the default: deep fades push the
 * sub-threshold noise scale to 1e5 and beyond, and a decoder whose output
 * is bounded regardless of input magnitude keeps those destroyed frames
 * from dominating the loss. They also make the network smooth everywhere,
 * which finite-difference gradient checks need.
 */
export function buildAutoencoder(seed: number, peakAmplitude = 1.0,
                                 hiddenActivation: HiddenActivation = "tanh"):
        Autoencoder {
    const encoder = denseStack("encoder", 3 * FRAME_VALUES,
                               SYMBOLS_PER_FRAME, "tanh", seed,
                               hiddenActivation);
    const decoder = denseStack("decoder", 3 * SYMBOLS_PER_FRAME,
                               FRAME_VALUES, "linear", seed + 100,
                               hiddenActivation);
    return { encoder, decoder, peakAmplitude };
}

/** Features [batch, frames, FRAME_VALUES] -> bounded symbols. */
export function encode(ae: Autoencoder, features: tf.Tensor3D): tf.Tensor3D {
    return tf.tidy(() => {
        const stacked = stackNeighbors(features);
        const z = ae.encoder.apply(stacked) as tf.Tensor3D;
        return tf.mul(z, tf.scalar(ae.peakAmplitude)) as tf.Tensor3D;
    });
}

/** Noisy symbols [batch, frames, SYMBOLS_PER_FRAME] -> feature estimates. */
export function decode(ae: Autoencoder, zhat: tf.Tensor3D): tf.Tensor3D {
    return tf.tidy(() =>
        ae.decoder.apply(stackNeighbors(zhat)) as tf.Tensor3D);
}

export function parameterCount(ae: Autoencoder): number {
    return [...ae.encoder.weights, ...ae.decoder.weights]
        .reduce((sum, w) => sum + w.shape.reduce(
            (a: number, b) => a * (b ?? 1), 1), 0);
}
