/**
 * Differentiable additive-noise channel.
 *
 * The received symbols are z + sigma * noise, where sigma comes from the
 * link model (a function of set point and fading only, never of z) and the
 * unit-variance noise draws are supplied by the caller. Gradients therefore
 * flow through the identity path alone, which is exact rather than an
 * approximation. Numerically equivalent to the simulator's channel when fed
 * the same sigma and noise values (validated on golden bundles).
 */

import { tf } from "./backend.js";
import { GoldenBundle } from "./io.js";
import { LinkParams, sigmaForMagnitudes } from "./linkModel.js";

/** zhat = z + sigma * noise; shapes must match or broadcast. */
export function applyChannel(z: tf.Tensor, sigma: tf.Tensor,
                             noise: tf.Tensor): tf.Tensor {
    if (noise.shape.length !== z.shape.length
        || noise.shape.some((dim, i) => dim !== z.shape[i])) {
        throw new Error(
            `noise shape [${noise.shape}] does not match z shape [${z.shape}]`);
    }
    return tf.add(z, tf.mul(sigma, noise));
}

/** Plain-array channel for golden replay and spot checks. */
export function applyChannelArrays(z: Float32Array, sigma: Float32Array,
                                   noise: Float32Array): Float64Array {
    if (z.length !== sigma.length || z.length !== noise.length) {
        throw new Error("length mismatch");
    }
    const out = new Float64Array(z.length);
    for (let i = 0; i < z.length; i++) {
        out[i] = z[i] + sigma[i] * noise[i];
    }
    return out;
}

/**
 * Replay a golden bundle through this implementation: recompute sigma from
 * the manifest parameters and the stored fading, then re-derive rx from the
 * stored tx and noise. Returns the worst scale-relative deviations against
 * the stored sigma and rx arrays.
 */
export function replayGoldenBundle(bundle: GoldenBundle): {
    maxSigmaRelError: number;
    maxRxRelError: number;
} {
    const p = bundle.manifest.parameters;
    const link: LinkParams = {
        deviationHz: p.deviation_hz,
        maxModFreqHz: p.max_mod_freq_hz,
        noiseFigureDb: p.noise_figure_db,
        temperatureK: p.temperature_k,
        peakAmplitude: p.peak_amplitude,
        meanModPower: p.mean_mod_power,
    };
    const sigma = sigmaForMagnitudes(link, p.set_point_dbm, bundle.fading);
    let maxSigmaRelError = 0;
    for (let i = 0; i < sigma.length; i++) {
        const rel = Math.abs(sigma[i] - bundle.sigma[i]) / bundle.sigma[i];
        maxSigmaRelError = Math.max(maxSigmaRelError, rel);
    }
    const rx = applyChannelArrays(bundle.tx, bundle.sigma, bundle.noise);
    let maxRxRelError = 0;
    const scale = Math.max(p.peak_amplitude, 1e-12);
    for (let i = 0; i < rx.length; i++) {
        const rel = Math.abs(rx[i] - bundle.rx[i])
            / Math.max(Math.abs(bundle.rx[i]), scale);
        maxRxRelError = Math.max(maxRxRelError, rel);
    }
    return { maxSigmaRelError, maxRxRelError };
}
