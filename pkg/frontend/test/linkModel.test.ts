import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { readManifest } from "../src/io.js";
import {
    RADE_LINK,
    fmGainDb,
    noiseSigma,
    sigmaForMagnitudes,
    snrDb,
    thresholdDbm,
} from "../src/linkModel.js";
import { TESTDATA_DIR } from "../scripts/genTestdata.js";

describe("link budget vs simulator manifest", () => {
    const manifest = readManifest(join(TESTDATA_DIR, "golden-lmr",
                                       "manifest.json"));

    it("matches the recorded gain and threshold", () => {
        expect(Math.abs(fmGainDb(RADE_LINK) - manifest.parameters.fm_gain_db))
            .toBeLessThan(1e-9);
        expect(Math.abs(thresholdDbm(RADE_LINK)
                        - manifest.parameters.threshold_dbm))
            .toBeLessThan(1e-9);
    });
});

describe("piecewise SNR model", () => {
    const t = thresholdDbm(RADE_LINK);

    it("is continuous at the threshold", () => {
        expect(Math.abs(snrDb(RADE_LINK, t + 1e-6)
                        - snrDb(RADE_LINK, t - 1e-6)))
            .toBeLessThan(1e-5);
    });

    it("has slope 1 above and 3 below", () => {
        expect(snrDb(RADE_LINK, t + 6) - snrDb(RADE_LINK, t + 5))
            .toBeCloseTo(1.0, 9);
        expect(snrDb(RADE_LINK, t - 5) - snrDb(RADE_LINK, t - 6))
            .toBeCloseTo(3.0, 9);
    });

    it("treats fading as additive received power", () => {
        expect(snrDb(RADE_LINK, -110, -7.5))
            .toBeCloseTo(snrDb(RADE_LINK, -117.5), 9);
    });
});

describe("noise sigma", () => {
    it("inverts the SNR definition", () => {
        expect(noiseSigma(RADE_LINK, 20)).toBeCloseTo(0.1, 12);
        expect(noiseSigma(RADE_LINK, 0)).toBeCloseTo(1.0, 12);
    });

    it("maps unit magnitudes to the no-fading sigma", () => {
        const sigma = sigmaForMagnitudes(RADE_LINK, -110,
                                         new Float32Array([1, 1]));
        // output is float32; compare at its quantization
        const expected = Math.fround(
            noiseSigma(RADE_LINK, snrDb(RADE_LINK, -110)));
        expect(sigma[0]).toBe(expected);
        expect(sigma[1]).toBe(expected);
    });

    it("clamps vanishing magnitudes instead of overflowing", () => {
        const sigma = sigmaForMagnitudes(RADE_LINK, -110,
                                         new Float32Array([0]));
        expect(Number.isFinite(sigma[0])).toBe(true);
    });
});
