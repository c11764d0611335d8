"""Analog FM voice-path simulation.

Processing chain, in order: band-pass filter, pre-emphasis, envelope limiter,
band-pass filter, de-emphasis, peak gain control, calibrated noise injection,
band-pass filter.  The noise scale comes from the same linearized link model
used for symbol simulation, with the noise density referenced to the maximum
modulating frequency and regenerated at the 8 kHz audio rate at equal
density.

Each stage can be disabled individually; with everything disabled the chain
is the identity, which pins the implementation against the block diagram.
"""

from dataclasses import dataclass

import numpy as np
from scipy import signal

from .fading import FadingEnvelope, magnitudes_to_db
from .link import FmLinkParams, noise_sigma, snr_db

DEFAULT_SAMPLE_RATE_HZ = 8000.0

# Envelope clip level relative to the RMS of the limiter input.  1.6 trims
# typical band-limited speech from ~15-16 dB PAPR down to ~8 dB.
DEFAULT_LIMITER_CLIP_FACTOR = 1.6

# Band-pass FIR length at 8 kHz: 60 dB stopband inside a <=100 Hz transition.
_BPF_TAPS = 479


@dataclass(frozen=True)
class SpeechBuffer:
    """Sampled mono speech."""

    samples: np.ndarray
    sample_rate_hz: float = DEFAULT_SAMPLE_RATE_HZ

    def __post_init__(self):
        object.__setattr__(self, "samples",
                           np.asarray(self.samples, dtype=float))
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("samples must be finite")

    def __len__(self) -> int:
        return len(self.samples)


@dataclass(frozen=True)
class FmBaselineConfig:
    """Configuration of the analog FM chain.

    The per-stage enables exist so tests can collapse the chain to identity;
    normal runs keep everything on.  fading=None is the unity channel.
    """

    link: FmLinkParams
    set_point_dbm: float
    seed: int
    fading: FadingEnvelope | None = None
    band_low_hz: float = 300.0
    band_high_hz: float = 3000.0
    bpf_enabled: bool = True
    preemph_enabled: bool = True
    limiter_enabled: bool = True
    limiter_clip_factor: float = DEFAULT_LIMITER_CLIP_FACTOR
    gain_enabled: bool = True
    noise_enabled: bool = True

    def validate(self, sample_rate_hz: float):
        if not 0 < self.band_low_hz < self.band_high_hz < sample_rate_hz / 2:
            raise ValueError("need 0 < band_low < band_high < sample_rate/2")


@dataclass(frozen=True)
class FmBaselineResult:
    """Processed speech plus the calibration measurements of the run."""

    output: SpeechBuffer
    papr_before_db: float
    papr_after_db: float
    mean_mod_power: float
    snr_db: float
    sigma_s: float
    noise_std: float


def measure_papr_db(speech: SpeechBuffer) -> float:
    """Peak to average power ratio, 10*log10(peak(|s|^2)/mean(s^2))."""
    s = speech.samples
    if len(s) == 0:
        raise ValueError("empty buffer")
    mean_power = np.mean(s**2)
    if mean_power == 0.0:
        raise ValueError("all-zero buffer has no PAPR")
    return float(10.0 * np.log10(np.max(s**2) / mean_power))


def measure_mean_power(speech: SpeechBuffer) -> float:
    """Mean of the squared samples."""
    if len(speech) == 0:
        raise ValueError("empty buffer")
    return float(np.mean(speech.samples**2))


def band_pass_taps(low_hz: float, high_hz: float,
                   sample_rate_hz: float) -> np.ndarray:
    """Linear-phase FIR band-pass, >=60 dB stopband within 100 Hz of the edges."""
    return signal.firwin(_BPF_TAPS, [low_hz, high_hz], pass_zero=False,
                         fs=sample_rate_hz, window=("kaiser", 7.0))


def _band_pass(x: np.ndarray, taps: np.ndarray) -> np.ndarray:
    # 'same' centres the symmetric FIR, cancelling its group delay.
    return signal.fftconvolve(x, taps, mode="same")


def _preemph_coeffs(corner_hz: float, sample_rate_hz: float):
    """One-zero +6 dB/octave boost above ``corner_hz``, unity near mid-band.

    Matched-z mapping of the analog zero; the gain is normalized at the
    geometric mean of the voice band so overall speech level is roughly
    preserved into the limiter.
    """
    zero = np.exp(-2.0 * np.pi * corner_hz / sample_rate_hz)
    w_mid = 2.0 * np.pi * 949.0 / sample_rate_hz
    gain = 1.0 / abs(1.0 - zero * np.exp(-1j * w_mid))
    return gain, zero


def preemphasis(x: np.ndarray, corner_hz: float,
                sample_rate_hz: float) -> np.ndarray:
    gain, zero = _preemph_coeffs(corner_hz, sample_rate_hz)
    return gain * signal.lfilter([1.0, -zero], [1.0], x)


def deemphasis(x: np.ndarray, corner_hz: float,
               sample_rate_hz: float) -> np.ndarray:
    """Exact inverse of :func:`preemphasis` (stable one-pole)."""
    gain, zero = _preemph_coeffs(corner_hz, sample_rate_hz)
    return signal.lfilter([1.0 / gain], [1.0, -zero], x)


def envelope_limit(x: np.ndarray, clip_factor: float) -> np.ndarray:
    """Hard-clip the analytic-signal envelope at clip_factor * RMS."""
    rms = np.sqrt(np.mean(x**2))
    if rms == 0.0:
        return x.copy()
    level = clip_factor * rms
    env = np.abs(signal.hilbert(x))
    scale = np.minimum(1.0, level / np.maximum(env, 1e-300))
    return x * scale


def run_fm_baseline(speech: SpeechBuffer,
                    config: FmBaselineConfig) -> FmBaselineResult:
    """Run the analog FM chain over a speech buffer.

    PAPR is reported at the limiter input and output (compression is what the
    figure-of-merit tracks); the mean modulating power is measured after gain
    control, immediately before noise injection.  Noise is injected after
    de-emphasis, exactly as the chain is drawn, even though a physical
    receiver would de-emphasize it.
    """
    if len(speech) == 0:
        raise ValueError("empty speech buffer")
    fs = speech.sample_rate_hz
    config.validate(fs)
    if config.fading is not None and config.fading.rate_hz != fs:
        raise ValueError("fading rate must equal the speech sample rate")

    if np.max(np.abs(speech.samples)) == 0.0:
        raise ValueError("silent speech buffer")
    taps = band_pass_taps(config.band_low_hz, config.band_high_hz, fs)
    x = speech.samples.copy()

    if config.bpf_enabled:
        x = _band_pass(x, taps)
    papr_before = float(10.0 * np.log10(np.max(x**2) / np.mean(x**2)))

    if config.preemph_enabled:
        x = preemphasis(x, config.band_low_hz, fs)
    if config.limiter_enabled:
        x = envelope_limit(x, config.limiter_clip_factor)
    papr_after = float(10.0 * np.log10(np.max(x**2) / np.mean(x**2)))

    if config.bpf_enabled:
        x = _band_pass(x, taps)
    if config.preemph_enabled:
        x = deemphasis(x, config.band_low_hz, fs)

    if config.gain_enabled:
        peak = np.max(np.abs(x))
        if peak == 0.0:
            raise ValueError("silent signal cannot be gain controlled")
        x = x * (config.link.peak_amplitude / peak)
    mean_mod_power = float(np.mean(x**2))

    # Noise with the link-model power in a bandwidth f_m, regenerated at the
    # audio rate with the same density: per-sample variance scales by
    # (fs/2)/f_m.
    if config.fading is None:
        fading_db = 0.0
    else:
        fading_db = magnitudes_to_db(config.fading.magnitudes[:len(x)])
        if len(np.atleast_1d(fading_db)) < len(x):
            raise ValueError("fading envelope shorter than speech")
    out_snr = snr_db(config.link, config.set_point_dbm, fading_db)
    sigma_s = noise_sigma(config.link, out_snr)
    density_scale = np.sqrt((fs / 2.0) / config.link.max_mod_freq_hz)
    noise_std = sigma_s * density_scale
    if config.noise_enabled:
        rng = np.random.Generator(np.random.PCG64(config.seed))
        x = x + noise_std * rng.standard_normal(len(x))
    if config.bpf_enabled:
        x = _band_pass(x, taps)

    scalar_snr = float(np.mean(np.atleast_1d(out_snr)))
    return FmBaselineResult(
        output=SpeechBuffer(samples=x, sample_rate_hz=fs),
        papr_before_db=papr_before,
        papr_after_db=papr_after,
        mean_mod_power=mean_mod_power,
        snr_db=scalar_snr,
        sigma_s=float(np.mean(np.atleast_1d(sigma_s))),
        noise_std=float(np.mean(np.atleast_1d(noise_std))),
    )
