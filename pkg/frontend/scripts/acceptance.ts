/**
 * Release criteria for the trainer package, one PASS/FAIL line each:
 *
 *   1. the differentiable channel reproduces the simulator's golden vectors
 *      elementwise to 1e-5 (scale-relative);
 *   2. held-out loss of the trained model is strictly decreasing across set
 *      points -120 -> -100 dBm on every evaluated channel;
 *   3. the clean-channel curve lies at or below the fading-channel curve at
 *      every set point (and within the documented 1.5x graceful-degradation
 *      band);
 *   4. 30 / 60 / 120 km/h evaluation curves stay within a 1.3x band of each
 *      other at every set point;
 *   5. adding threshold-region noise strictly increases held-out loss over
 *      the near-noiseless floor;
 *   6. training completes in under 30 minutes.
 *
 * Reduced-scale smoke run: ACCEPTANCE_SCALE=smoke npm run acceptance
 */

import { mkdirSync, writeFileSync } from "node:fs";
import { join } from "node:path";

import { ensureBackend } from "../src/backend.js";
import { replayGoldenBundle } from "../src/channel.js";
import { EvalChannel, evalLossVsSetpoint, formatTable, writeTable } from "../src/eval.js";
import { makeDataset } from "../src/features.js";
import { readFadingFile, readGoldenBundle } from "../src/io.js";
import { RADE_LINK } from "../src/linkModel.js";
import { evaluateLoss, train } from "../src/train.js";
import { TESTDATA_DIR, generateAcceptanceData } from "./genTestdata.js";

const SMOKE = process.env.ACCEPTANCE_SCALE === "smoke";

const TRAIN_SEQUENCES = SMOKE ? 200 : 1800;   // 1800 x 4 s = 2 h equivalent
const HELD_OUT_SEQUENCES = SMOKE ? 32 : 96;
const EPOCHS = SMOKE ? 3 : 12;
const BATCH_SIZE = 16;
const LEARNING_RATE = 1e-3;
const SEED = 2026;
const SET_POINTS_DBM = [-120, -115, -110, -105, -100];
const VELOCITY_BAND = 1.3;
const DEGRADATION_BAND = 1.5;

let failures = 0;

function check(name: string, ok: boolean, detail: string): void {
    console.log(`${ok ? "PASS" : "FAIL"}  ${name}: ${detail}`);
    if (!ok) {
        failures += 1;
    }
}

async function main(): Promise<void> {
    const backend = await ensureBackend();
    console.log(`backend: ${backend}${SMOKE ? " (smoke scale)" : ""}`);
    generateAcceptanceData();

    // --- channel equivalence on golden bundles -------------------------
    let worstSigma = 0;
    let worstRx = 0;
    for (const name of ["golden-lmr", "golden-awgn"]) {
        const bundle = readGoldenBundle(join(TESTDATA_DIR, name));
        const { maxSigmaRelError, maxRxRelError } = replayGoldenBundle(bundle);
        worstSigma = Math.max(worstSigma, maxSigmaRelError);
        worstRx = Math.max(worstRx, maxRxRelError);
    }
    check("channel equivalence", worstSigma < 1e-6 && worstRx < 1e-5,
          `sigma rel ${worstSigma.toExponential(2)} (<1e-6), `
          + `rx rel ${worstRx.toExponential(2)} (<1e-5) vs golden bundles`);

    // --- training through the fading channel ---------------------------
    const trainFading = readFadingFile(
        join(TESTDATA_DIR, "fading-train-60.f32"));
    const dataset = makeDataset(TRAIN_SEQUENCES, SEED);
    const heldOut = makeDataset(HELD_OUT_SEQUENCES, SEED + 1, dataset);

    const result = await train({
        channel: "lmr60", link: RADE_LINK,
        setPointRangeDbm: [-120, -100],
        epochs: EPOCHS, batchSize: BATCH_SIZE, learningRate: LEARNING_RATE,
        seed: SEED, fadingMagnitudes: trainFading.magnitudes,
    }, dataset, heldOut, (line) => console.log(`  ${line}`));
    const minutes = result.elapsedSeconds / 60;
    check("training budget", minutes < 30,
          `${TRAIN_SEQUENCES} sequences x ${EPOCHS} epochs in `
          + `${minutes.toFixed(1)} min (<30)`);

    // --- loss vs set point over channels --------------------------------
    const channels: EvalChannel[] = [
        { name: "awgn", kind: "awgn" },
        ...[30, 60, 120].map((v) => ({
            name: `lmr${v}`,
            kind: "lmr60" as const,
            fadingMagnitudes: readFadingFile(
                join(TESTDATA_DIR, `fading-eval-${v}.f32`)).magnitudes,
        })),
    ];
    const table = evalLossVsSetpoint(result.ae, RADE_LINK, heldOut,
                                     SET_POINTS_DBM, channels, SEED + 9);
    const resultsDir = join(TESTDATA_DIR, "..", "results");
    mkdirSync(resultsDir, { recursive: true });
    writeTable(join(resultsDir, "loss_vs_setpoint.tsv"), table);
    writeFileSync(join(resultsDir, "training_history.tsv"),
                  "epoch\ttrain_loss\theld_out_loss\n" + result.trainLoss.map(
                      (loss, i) =>
                          `${i + 1}\t${loss.toFixed(6)}\t`
                          + `${result.heldOutLoss[i].toFixed(6)}`).join("\n")
                  + "\n");
    console.log(formatTable(table).trimEnd().split("\n")
        .map((l) => `  ${l}`).join("\n"));

    let monotone = true;
    for (let j = 0; j < table.channels.length; j++) {
        for (let i = 1; i < SET_POINTS_DBM.length; i++) {
            if (!(table.loss[i][j] < table.loss[i - 1][j])) {
                monotone = false;
            }
        }
    }
    check("loss decreasing with set point", monotone,
          `strictly decreasing -120 -> -100 dBm on `
          + `${table.channels.join("/")}`);

    const awgnIdx = table.channels.indexOf("awgn");
    const lmr60Idx = table.channels.indexOf("lmr60");
    let awgnBelow = true;
    let degradationRatio = 0;
    for (let i = 0; i < SET_POINTS_DBM.length; i++) {
        if (table.loss[i][awgnIdx] > table.loss[i][lmr60Idx]) {
            awgnBelow = false;
        }
        degradationRatio = Math.max(
            degradationRatio, table.loss[i][awgnIdx] / table.loss[i][lmr60Idx]);
    }
    check("clean channel at or below fading channel",
          awgnBelow && degradationRatio <= DEGRADATION_BAND,
          `awgn <= lmr60 everywhere, cross-channel ratio `
          + `${degradationRatio.toFixed(2)} (<=${DEGRADATION_BAND})`);

    let worstBand = 1;
    for (let i = 0; i < SET_POINTS_DBM.length; i++) {
        const losses = [30, 60, 120].map(
            (v) => table.loss[i][table.channels.indexOf(`lmr${v}`)]);
        worstBand = Math.max(worstBand,
                             Math.max(...losses) / Math.min(...losses));
    }
    check("velocity generalization", worstBand <= VELOCITY_BAND,
          `30/60/120 km/h curves within x${worstBand.toFixed(3)} `
          + `(<=x${VELOCITY_BAND}) at every set point`);

    // near-noiseless floor (set point -40 dBm leaves sigma ~ 2e-5) vs the
    // threshold-region channel
    const floor = evaluateLoss(result.ae, { channel: "awgn", link: RADE_LINK },
                               heldOut.sequences, -40, SEED + 77);
    const noisy = evaluateLoss(result.ae, { channel: "awgn", link: RADE_LINK },
                               heldOut.sequences, -120, SEED + 77);
    check("noise monotonicity", floor < noisy,
          `noiseless floor ${floor.toFixed(4)} < threshold-region `
          + `${noisy.toFixed(4)}`);

    console.log(failures === 0
        ? "acceptance: all criteria passed"
        : `acceptance: ${failures} criteria FAILED`);
    process.exit(failures === 0 ? 0 : 1);
}

main().catch((err) => {
    console.error(`error: ${err.message}`);
    process.exit(1);
});
