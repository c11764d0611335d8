/**
 * FM demodulator link budget, mirrored from the simulator package so the
 * trainer can turn a set point and fading magnitudes into per-symbol noise
 * scales. Values are validated against golden-bundle manifests in tests.
 */

export const BOLTZMANN_J_PER_K = 1.380649e-23;
export const THRESHOLD_SNR_DB = 12.0;
export const SUBTHRESHOLD_SLOPE = 3.0;

export interface LinkParams {
    deviationHz: number;
    maxModFreqHz: number;
    noiseFigureDb: number;
    temperatureK: number;
    peakAmplitude: number;
    meanModPower: number;
}

/** 450 MHz narrowband data-symbol parameter set, 2000 symbols/s. */
export const RADE_LINK: LinkParams = {
    deviationHz: 1800,
    maxModFreqHz: 2880,
    noiseFigureDb: 5,
    temperatureK: 274,
    peakAmplitude: 1,
    meanModPower: 0.5,
};

export function fmGainDb(link: LinkParams): number {
    const beta = link.deviationHz / link.maxModFreqHz;
    const gainLin = (3 * beta * beta * link.meanModPower)
        / (1e3 * BOLTZMANN_J_PER_K * link.temperatureK * link.maxModFreqHz);
    return 10 * Math.log10(gainLin) - link.noiseFigureDb;
}

export function thresholdDbm(link: LinkParams): number {
    return THRESHOLD_SNR_DB - fmGainDb(link);
}

/** Piecewise output SNR: slope 1 above the threshold, 3 below, no floor. */
export function snrDb(link: LinkParams, setPointDbm: number,
                      fadingDb = 0): number {
    const gain = fmGainDb(link);
    const threshold = THRESHOLD_SNR_DB - gain;
    const received = setPointDbm + fadingDb;
    if (received >= threshold) {
        return received + gain;
    }
    return SUBTHRESHOLD_SLOPE * received + gain
        - (SUBTHRESHOLD_SLOPE - 1) * threshold;
}

export function noiseSigma(link: LinkParams, snrDbValue: number): number {
    return link.peakAmplitude * Math.pow(10, -snrDbValue / 20);
}

/** Per-symbol noise scale from a fading magnitude stream (1 = no fading). */
export function sigmaForMagnitudes(link: LinkParams, setPointDbm: number,
                                   magnitudes: Float32Array | number[]): Float32Array {
    const out = new Float32Array(magnitudes.length);
    for (let i = 0; i < magnitudes.length; i++) {
        const mag = Math.max(magnitudes[i], 1e-10);
        const fadingDb = 20 * Math.log10(mag);
        out[i] = noiseSigma(link, snrDb(link, setPointDbm, fadingDb));
    }
    return out;
}
