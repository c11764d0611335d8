"""Linearized FM channel applied to a symbol stream.

Follows the five-step simulation recipe: pick a set point, draw the fading
magnitudes at the symbol rate, convert each magnitude to an output SNR, solve
for the per-symbol noise scale, and add Gaussian noise.  The symbol values
themselves are never scaled: the demodulator output amplitude is fixed by the
deviation, so fading modulates only the noise power.

apply_channel is a pure transformation with an owned RNG; runs with distinct
seeds may execute concurrently.
"""

from dataclasses import dataclass

import numpy as np

from .fading import FadingEnvelope, magnitudes_to_db
from .link import FmLinkParams, noise_sigma, snr_db

# Cap for the measured-SNR sentinel when the error power is zero.
SNR_CAP_DB = 200.0

# Slack for peak-amplitude validation, absorbs float32 round-tripping.
_AMPLITUDE_TOL = 1e-9


@dataclass(frozen=True)
class SymbolStream:
    """Discrete-time, continuously valued symbol sequence."""

    symbols: np.ndarray
    symbol_rate_hz: float

    def __post_init__(self):
        object.__setattr__(self, "symbols",
                           np.asarray(self.symbols, dtype=float))
        if not np.all(np.isfinite(self.symbols)):
            raise ValueError("symbols must be finite")
        if not self.symbol_rate_hz > 0:
            raise ValueError("symbol_rate_hz must be > 0")

    def __len__(self) -> int:
        return len(self.symbols)


@dataclass(frozen=True)
class ChannelRun:
    """One channel realization: link constants, set point, fading, seed.

    fading=None selects the unity (AWGN) channel.  When fading is present its
    sample rate must equal the symbol rate of the stream it is applied to and
    it must be at least as long as the stream; short envelopes are an error
    rather than being cycled, since silent periodicity corrupts statistics.
    """

    link: FmLinkParams
    set_point_dbm: float
    fading: FadingEnvelope | None
    noise_seed: int


def per_symbol_sigma(run: ChannelRun, num_symbols: int) -> np.ndarray:
    """Noise standard deviation for each of the first num_symbols symbols."""
    if run.fading is None:
        fading_db = np.zeros(num_symbols)
    else:
        if len(run.fading) < num_symbols:
            raise ValueError(
                f"fading envelope ({len(run.fading)} samples) shorter than "
                f"stream ({num_symbols} symbols)")
        fading_db = magnitudes_to_db(run.fading.magnitudes[:num_symbols])
    snr = snr_db(run.link, run.set_point_dbm, fading_db)
    return np.asarray(noise_sigma(run.link, snr))


def apply_channel(stream: SymbolStream, run: ChannelRun) -> SymbolStream:
    """Add per-symbol Gaussian noise; the deterministic part is identity.

    Raises ValueError on fading/stream rate mismatch, on fading envelopes
    shorter than the stream, and on transmit symbols exceeding the peak
    amplitude of the link parameters.
    """
    peak = run.link.peak_amplitude
    if np.max(np.abs(stream.symbols), initial=0.0) > peak * (1 + _AMPLITUDE_TOL):
        raise ValueError(f"stream exceeds peak amplitude {peak}")
    if run.fading is not None and run.fading.rate_hz != stream.symbol_rate_hz:
        raise ValueError(
            f"fading rate {run.fading.rate_hz} Hz != symbol rate "
            f"{stream.symbol_rate_hz} Hz")
    sigma = per_symbol_sigma(run, len(stream))
    rng = np.random.Generator(np.random.PCG64(run.noise_seed))
    noise = rng.standard_normal(len(stream))
    return SymbolStream(symbols=stream.symbols + sigma * noise,
                        symbol_rate_hz=stream.symbol_rate_hz)


def measure_snr(tx: SymbolStream, rx: SymbolStream,
                peak_amplitude: float = 1.0) -> float:
    """Measured SNR with signal power referenced to the peak amplitude.

    Returns 10*log10(A^2 / mean((rx - tx)^2)), capped at +200 dB when the
    streams are identical.  Requires equal lengths of at least 1000 symbols
    so the noise-power estimate is meaningful.
    """
    if len(tx) != len(rx):
        raise ValueError("tx and rx must have equal length")
    if len(tx) < 1000:
        raise ValueError("need at least 1000 symbols to measure SNR")
    err_power = float(np.mean((rx.symbols - tx.symbols) ** 2))
    if err_power == 0.0:
        return SNR_CAP_DB
    return min(SNR_CAP_DB,
               10.0 * np.log10(peak_amplitude**2 / err_power))
