"""Deterministic speech-like test signal.

Formant-synthesized nonsense utterances: voiced syllables built from a pitch
harmonic series shaped by vowel formant resonators, interleaved with noise
bursts and short pauses.  Syllable levels are normalized in the 300-3000 Hz
voice band so the clip's dynamics match band-limited conversational speech
(PAPR around 15-16 dB, mean power near 0.07 once peak-normalized through the
analog FM chain).

This stands in for a recorded test clip in environments without audio
corpora; the generator is seeded and fully reproducible.
"""

import numpy as np
from scipy import signal

from .fm_baseline import DEFAULT_SAMPLE_RATE_HZ, SpeechBuffer

# First three formant frequencies of five reference vowels, Hz.
_VOWEL_FORMANTS = (
    (730.0, 1090.0, 2440.0),
    (270.0, 2290.0, 3010.0),
    (300.0, 870.0, 2240.0),
    (660.0, 1720.0, 2410.0),
    (440.0, 1020.0, 2240.0),
)
_FORMANT_BANDWIDTHS = (80.0, 110.0, 160.0)


def synthesize_speech(seed: int, duration_s: float = 8.0,
                      sample_rate_hz: float = DEFAULT_SAMPLE_RATE_HZ) -> SpeechBuffer:
    """Generate a peak-normalized speech-like clip.

    Deterministic for a given (seed, duration, rate).  Seed 0 is the
    designated calibration clip used by the verification suite.
    """
    if duration_s <= 0:
        raise ValueError("duration_s must be > 0")
    fs = sample_rate_hz
    rng = np.random.Generator(np.random.PCG64(seed))
    n_total = int(duration_s * fs)
    out = np.zeros(n_total)
    syllable_bpf = signal.firwin(201, [300.0, 3000.0], pass_zero=False, fs=fs)

    pos = int(0.05 * fs)
    while pos < n_total - fs // 4:
        for _ in range(rng.integers(2, 5)):  # one word
            dur = rng.uniform(0.14, 0.30)
            n = int(dur * fs)
            t = np.arange(n) / fs
            amp = 10.0 ** (rng.normal(-2.0, 1.5) / 20.0)
            if rng.uniform() < 0.85:
                x = _voiced_segment(rng, t, dur, fs)
            else:
                x = rng.standard_normal(n)
            x = signal.fftconvolve(x, syllable_bpf, mode="same")
            envelope = np.clip(np.minimum(t / 0.05, 1.0)
                               * np.minimum((dur - t) / 0.07, 1.0), 0.0, 1.0)
            x = x * envelope
            rms = np.sqrt(np.mean(x**2))
            if rms > 0:
                x = x / rms * amp
            end = min(pos + n, n_total)
            out[pos:end] += x[:end - pos]
            pos = end
        pos += int(rng.uniform(0.06, 0.16) * fs)

    out /= np.max(np.abs(out))
    return SpeechBuffer(samples=out, sample_rate_hz=fs)


def _voiced_segment(rng, t, dur, fs):
    """Harmonic series with a falling pitch contour through vowel formants."""
    f0 = rng.uniform(95.0, 200.0) * (1.0 - 0.12 * t / dur)
    phase = 2.0 * np.pi * np.cumsum(f0) / fs
    x = np.zeros(len(t))
    for k in range(1, 40):
        harmonic_hz = k * f0
        x += np.where(harmonic_hz < 3800.0, np.cos(k * phase) / k, 0.0)
    formants = _VOWEL_FORMANTS[rng.integers(0, len(_VOWEL_FORMANTS))]
    y = np.zeros(len(t))
    for fc, bw in zip(formants, _FORMANT_BANDWIDTHS):
        w0 = 2.0 * np.pi * fc / fs
        r = np.exp(-np.pi * bw / fs)
        y += signal.lfilter([1.0 - r], [1.0, -2.0 * r * np.cos(w0), r * r], x)
    return y
