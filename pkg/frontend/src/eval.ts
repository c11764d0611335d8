/**
 * Loss-versus-set-point evaluation over multiple channels, exported as
 * delimited text (one row per set point, one column per channel).
 */

import { writeFileSync } from "node:fs";

import { Dataset } from "./features.js";
import { LinkParams } from "./linkModel.js";
import { Autoencoder } from "./model.js";
import { ChannelKind, evaluateLoss } from "./train.js";

export interface EvalChannel {
    name: string;
    kind: ChannelKind;
    fadingMagnitudes?: Float32Array;
}

export interface EvalTable {
    setPointsDbm: number[];
    channels: string[];
    /** loss[i][j] for set point i, channel j. */
    loss: number[][];
}

export function evalLossVsSetpoint(ae: Autoencoder, link: LinkParams,
                                   heldOut: Dataset, setPointsDbm: number[],
                                   channels: EvalChannel[],
                                   seed: number): EvalTable {
    const loss = setPointsDbm.map((setPoint, i) =>
        channels.map((channel, j) => evaluateLoss(
            ae,
            {
                channel: channel.kind, link,
                fadingMagnitudes: channel.fadingMagnitudes,
            },
            heldOut.sequences, setPoint,
            // deterministic per (set point, channel) cell
            seed + 1009 * i + 9173 * j)));
    return { setPointsDbm, channels: channels.map((c) => c.name), loss };
}

export function formatTable(table: EvalTable): string {
    const header = ["set_point_dbm", ...table.channels].join("\t");
    const rows = table.setPointsDbm.map((setPoint, i) =>
        [setPoint.toFixed(1),
         ...table.loss[i].map((v) => v.toFixed(6))].join("\t"));
    return [header, ...rows].join("\n") + "\n";
}

export function writeTable(path: string, table: EvalTable): void {
    writeFileSync(path, formatTable(table));
}
