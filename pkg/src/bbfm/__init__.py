"""Speech-over-baseband-FM link simulator and frame modem toolkit."""

from .channel import ChannelRun, SymbolStream, apply_channel, measure_snr, per_symbol_sigma
from .fading import (
    FadingConfig,
    FadingEnvelope,
    envelope_to_db,
    generate_envelope,
    generate_taps,
    lmr_fading_config,
)
from .fm_baseline import (
    FmBaselineConfig,
    FmBaselineResult,
    SpeechBuffer,
    measure_mean_power,
    measure_papr_db,
    run_fm_baseline,
)
from .link import (
    ANALOG_FM_LINK,
    PROFILES,
    RADE_LINK,
    ChannelProfile,
    FmLinkParams,
    fm_gain_db,
    noise_sigma,
    snr_db,
    threshold_dbm,
)
from .modem import (
    BasebandSignal,
    FrameLayout,
    FrameSynchronizer,
    SyncState,
    acquire_sync,
    assemble_frame,
    disassemble_frame,
    matched_filter_symbols,
    modulate,
    rrc_taps,
)
from .speech import synthesize_speech

__version__ = "0.1.0"

__all__ = [
    "ANALOG_FM_LINK",
    "BasebandSignal",
    "ChannelProfile",
    "ChannelRun",
    "FadingConfig",
    "FadingEnvelope",
    "FmBaselineConfig",
    "FmBaselineResult",
    "FmLinkParams",
    "FrameLayout",
    "FrameSynchronizer",
    "PROFILES",
    "RADE_LINK",
    "SpeechBuffer",
    "SymbolStream",
    "SyncState",
    "acquire_sync",
    "apply_channel",
    "assemble_frame",
    "disassemble_frame",
    "envelope_to_db",
    "fm_gain_db",
    "generate_envelope",
    "generate_taps",
    "lmr_fading_config",
    "matched_filter_symbols",
    "measure_mean_power",
    "measure_papr_db",
    "measure_snr",
    "modulate",
    "noise_sigma",
    "per_symbol_sigma",
    "rrc_taps",
    "run_fm_baseline",
    "snr_db",
    "synthesize_speech",
    "threshold_dbm",
]
