/**
 * Deterministic random number generation for reproducible training runs.
 *
 * mulberry32 for uniform draws, Box-Muller for Gaussians. Not
 * cryptographic; sequences are stable across platforms for a given seed.
 */

export type Rng = () => number;

export function mulberry32(seed: number): Rng {
    let a = seed >>> 0;
    return () => {
        a |= 0;
        a = (a + 0x6d2b79f5) | 0;
        let t = Math.imul(a ^ (a >>> 15), 1 | a);
        t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
        return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
    };
}

/** Standard normal draws via Box-Muller over a uniform source. */
export function gaussianSource(rng: Rng): Rng {
    let spare: number | null = null;
    return () => {
        if (spare !== null) {
            const value = spare;
            spare = null;
            return value;
        }
        let u = 0;
        let v = 0;
        do {
            u = rng();
        } while (u <= 1e-12);
        v = rng();
        const radius = Math.sqrt(-2.0 * Math.log(u));
        spare = radius * Math.sin(2.0 * Math.PI * v);
        return radius * Math.cos(2.0 * Math.PI * v);
    };
}

export function gaussianArray(gauss: Rng, length: number): Float32Array {
    const out = new Float32Array(length);
    for (let i = 0; i < length; i++) {
        out[i] = gauss();
    }
    return out;
}
