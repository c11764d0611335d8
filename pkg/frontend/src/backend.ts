/**
 * TensorFlow.js backend selection. The wasm backend trains the dense stack
 * an order of magnitude faster than the pure-JS CPU backend; fall back to
 * CPU if wasm fails to initialize.
 */

import * as tf from "@tensorflow/tfjs";
import "@tensorflow/tfjs-backend-wasm";

let ready: Promise<string> | null = null;

export function ensureBackend(): Promise<string> {
    if (ready === null) {
        ready = (async () => {
            try {
                await tf.setBackend("wasm");
                await tf.ready();
            } catch {
                await tf.setBackend("cpu");
                await tf.ready();
            }
            return tf.getBackend();
        })();
    }
    return ready;
}

export { tf };
