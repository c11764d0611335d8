"""Command line front end for the link simulator and frame modem.

Every randomized command takes an explicit --seed and writes a JSON manifest
next to its outputs with the parameters, seeds and format versions needed to
reproduce the run byte for byte.  Errors exit nonzero with a single
machine-parseable line on stderr.
"""

import sys
from dataclasses import replace
from pathlib import Path

import click
import numpy as np

from . import rawio
from .channel import ChannelRun, SymbolStream, apply_channel, measure_snr, per_symbol_sigma
from .fading import FadingConfig, FadingEnvelope, generate_envelope
from .fm_baseline import FmBaselineConfig, SpeechBuffer, run_fm_baseline
from .link import PROFILES, FmLinkParams, fm_gain_db, snr_db, threshold_dbm
from .modem import (
    DEFAULT_ROLLOFF,
    DEFAULT_SPAN,
    DEFAULT_SPS,
    FrameLayout,
    FrameSynchronizer,
    assemble_frame,
    disassemble_frame,
    modulate,
    sample_noise_std_for_symbol_snr,
)
from .speech import synthesize_speech


def _fail(message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


def _guarded(func):
    """Convert exceptions into one-line errors with nonzero exit status."""

    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except (ValueError, OSError) as exc:
            _fail(str(exc))

    wrapper.__name__ = func.__name__
    wrapper.__doc__ = func.__doc__
    return wrapper


def _profile_options(func=None, *, default="rade"):
    if func is None:
        return lambda f: _profile_options(f, default=default)
    func = click.option("--profile", type=click.Choice(sorted(PROFILES)),
                        default=default, show_default=True,
                        help="Link parameter preset.")(func)
    func = click.option("--deviation-hz", type=float, default=None,
                        help="Override deviation.")(func)
    func = click.option("--max-mod-freq-hz", type=float, default=None,
                        help="Override maximum modulating frequency.")(func)
    func = click.option("--noise-figure-db", type=float, default=None,
                        help="Override receiver noise figure.")(func)
    func = click.option("--temperature-k", type=float, default=None,
                        help="Override noise temperature.")(func)
    func = click.option("--peak-amplitude", type=float, default=None,
                        help="Override peak modulating amplitude.")(func)
    func = click.option("--mean-mod-power", type=float, default=None,
                        help="Override mean modulating power.")(func)
    return func


def _channel_options(func):
    func = click.option("--channel", type=click.Choice(["awgn", "lmr"]),
                        default="awgn", show_default=True)(func)
    func = click.option("--velocity-kmh", type=float, default=60.0,
                        show_default=True, help="Vehicle speed for lmr.")(func)
    func = click.option("--delay-us", type=float, default=200.0,
                        show_default=True, help="Path delay for lmr.")(func)
    func = click.option("--carrier-hz", type=float, default=None,
                        help="Carrier frequency (default from profile).")(func)
    return func


def _resolve_link(profile, overrides) -> tuple[FmLinkParams, dict]:
    base = PROFILES[profile].link
    applied = {key: val for key, val in overrides.items() if val is not None}
    link = replace(base, **applied) if applied else base
    record = {
        "profile": profile,
        "deviation_hz": link.deviation_hz,
        "max_mod_freq_hz": link.max_mod_freq_hz,
        "noise_figure_db": link.noise_figure_db,
        "temperature_k": link.temperature_k,
        "peak_amplitude": link.peak_amplitude,
        "mean_mod_power": link.mean_mod_power,
        "overrides": sorted(applied),
    }
    return link, record


def _link_overrides(kwargs) -> dict:
    return {key: kwargs.pop(key) for key in (
        "deviation_hz", "max_mod_freq_hz", "noise_figure_db",
        "temperature_k", "peak_amplitude", "mean_mod_power")}


def _fading_for(channel, rate_hz, seed, velocity_kmh, delay_us, carrier_hz):
    if channel == "awgn":
        return None, {"channel": "awgn"}
    config = FadingConfig(carrier_freq_hz=carrier_hz,
                          velocity_mps=velocity_kmh / 3.6,
                          delay_spread_s=delay_us * 1e-6,
                          output_rate_hz=rate_hz, seed=seed)
    record = {
        "channel": "lmr",
        "velocity_kmh": velocity_kmh,
        "delay_us": delay_us,
        "carrier_freq_hz": carrier_hz,
        "doppler_spread_hz": config.doppler_spread_hz,
        "fading_seed": seed,
    }
    return config, record


@click.group()
def main():
    """Baseband-FM link simulator, analog FM baseline and frame modem."""


@main.command("snr-curve")
@_profile_options
@click.option("--start", type=float, required=True, help="First set point, dBm.")
@click.option("--stop", type=float, required=True, help="Last set point, dBm.")
@click.option("--step", type=float, default=0.5, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="CSV output path (default stdout).")
@_guarded
def cmd_snr_curve(start, stop, step, out, profile, **kwargs):
    """Tabulate demodulator output SNR versus received power (no fading)."""
    link, link_record = _resolve_link(profile, _link_overrides(kwargs))
    if step <= 0 or stop < start:
        raise ValueError("need stop >= start and step > 0")
    points = np.arange(start, stop + step / 2, step)
    lines = ["r_dbm,snr_db"]
    for r in points:
        lines.append(f"{r:.2f},{snr_db(link, float(r)):.6f}")
    text = "\n".join(lines) + "\n"
    if out is None:
        click.echo(text, nl=False)
        return
    Path(out).write_text(text)
    rawio.write_manifest(out, {
        "command": "snr-curve",
        "parameters": {**link_record, "start_dbm": start, "stop_dbm": stop,
                       "step_db": step,
                       "fm_gain_db": fm_gain_db(link),
                       "threshold_dbm": threshold_dbm(link)},
        "outputs": {"csv": Path(out).name},
    })


@main.command("fading-gen")
@click.option("--rate", "rate_hz", type=float, required=True,
              help="Output sample rate of |H|, Hz.")
@click.option("--samples", "num_samples", type=int, required=True)
@click.option("--velocity-kmh", type=float, default=60.0, show_default=True)
@click.option("--delay-us", type=float, default=200.0, show_default=True)
@click.option("--carrier-hz", type=float, default=450e6, show_default=True)
@click.option("--seed", type=int, required=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@_guarded
def cmd_fading_gen(rate_hz, num_samples, velocity_kmh, delay_us, carrier_hz,
                   seed, out):
    """Generate a fading magnitude file (float32 little-endian)."""
    config = FadingConfig(carrier_freq_hz=carrier_hz,
                          velocity_mps=velocity_kmh / 3.6,
                          delay_spread_s=delay_us * 1e-6,
                          output_rate_hz=rate_hz, seed=seed)
    env = generate_envelope(config, num_samples)
    rawio.write_f32(out, env.magnitudes)
    rawio.write_manifest(out, {
        "command": "fading-gen",
        "parameters": {
            "rate_hz": rate_hz, "num_samples": num_samples,
            "velocity_kmh": velocity_kmh, "delay_us": delay_us,
            "carrier_freq_hz": carrier_hz,
            "doppler_spread_hz": config.doppler_spread_hz,
        },
        "seeds": {"fading": seed},
        "outputs": {"magnitudes": Path(out).name, "dtype": "<f4"},
        "measurements": {"mean_power": float(np.mean(env.magnitudes**2))},
    })
    click.echo(f"wrote {num_samples} samples to {out} "
               f"(doppler {config.doppler_spread_hz:.2f} Hz)")


def _load_fading_file(path, expect_rate) -> FadingEnvelope:
    mags = rawio.read_f32(path)
    manifest = rawio.read_manifest(path)
    rate = manifest["parameters"]["rate_hz"]
    if rate != expect_rate:
        raise ValueError(f"fading file rate {rate} Hz != stream rate "
                         f"{expect_rate} Hz")
    return FadingEnvelope(magnitudes=mags, rate_hz=rate)


@main.command("chsim")
@_profile_options
@_channel_options
@click.option("--set-point", "set_point_dbm", type=float, required=True)
@click.option("--rate", "rate_hz", type=float, default=None,
              help="Symbol rate (default from profile).")
@click.option("--fading-file", type=click.Path(exists=False), default=None,
              help="Pre-generated |H| file for the lmr channel.")
@click.option("--seed", type=int, required=True)
@click.option("--in", "tx_path", type=click.Path(dir_okay=False), required=True)
@click.option("--out", "rx_path", type=click.Path(dir_okay=False), required=True)
@_guarded
def cmd_chsim(profile, channel, velocity_kmh, delay_us, carrier_hz,
              set_point_dbm, rate_hz, fading_file, seed, tx_path, rx_path,
              **kwargs):
    """Run a symbol file through the linearized channel."""
    link, link_record = _resolve_link(profile, _link_overrides(kwargs))
    if not Path(tx_path).exists():
        raise ValueError(f"no such input file: {tx_path}")
    if rate_hz is None:
        rate_hz = PROFILES[profile].symbol_rate_hz
        if rate_hz is None:
            raise ValueError("profile has no symbol rate; pass --rate")
    if carrier_hz is None:
        carrier_hz = PROFILES[profile].carrier_freq_hz

    tx = SymbolStream(symbols=rawio.read_f32(tx_path), symbol_rate_hz=rate_hz)
    channel_record: dict
    if channel == "lmr" and fading_file is not None:
        fading = _load_fading_file(fading_file, rate_hz)
        if len(fading) < len(tx):
            raise ValueError("fading file shorter than the symbol stream")
        channel_record = {"channel": "lmr", "fading_file": Path(fading_file).name}
    else:
        config, channel_record = _fading_for(channel, rate_hz, seed + 1,
                                             velocity_kmh, delay_us, carrier_hz)
        fading = None if config is None else generate_envelope(config, len(tx))

    run = ChannelRun(link=link, set_point_dbm=set_point_dbm, fading=fading,
                     noise_seed=seed)
    rx = apply_channel(tx, run)
    rawio.write_f32(rx_path, rx.symbols)
    measured = measure_snr(tx, rx, link.peak_amplitude) if len(tx) >= 1000 else None
    rawio.write_manifest(rx_path, {
        "command": "chsim",
        "parameters": {**link_record, **channel_record,
                       "set_point_dbm": set_point_dbm,
                       "symbol_rate_hz": rate_hz,
                       "num_symbols": len(tx)},
        "seeds": {"noise": seed},
        "outputs": {"rx": Path(rx_path).name, "dtype": "<f4",
                    "tx": Path(tx_path).name},
        "measurements": {"measured_snr_db": measured},
    })
    click.echo(f"wrote {len(rx)} symbols to {rx_path}"
               + (f" (measured SNR {measured:.2f} dB)" if measured is not None else ""))


@main.command("fm-baseline")
@_profile_options(default="analog-fm")
@_channel_options
@click.option("--set-point", "set_point_dbm", type=float, required=True)
@click.option("--seed", type=int, required=True)
@click.option("--in", "speech_in", type=click.Path(dir_okay=False), required=True)
@click.option("--out", "speech_out", type=click.Path(dir_okay=False), required=True)
@click.option("--clip-factor", type=float, default=None,
              help="Limiter envelope clip level relative to RMS.")
@click.option("--no-bpf", is_flag=True, help="Disable the band-pass filters.")
@click.option("--no-preemph", is_flag=True, help="Disable pre/de-emphasis.")
@click.option("--no-limiter", is_flag=True, help="Disable the envelope limiter.")
@click.option("--no-gain", is_flag=True, help="Disable peak gain control.")
@click.option("--no-noise", is_flag=True, help="Disable noise injection.")
@_guarded
def cmd_fm_baseline(profile, channel, velocity_kmh, delay_us, carrier_hz,
                    set_point_dbm, seed, speech_in, speech_out, clip_factor,
                    no_bpf, no_preemph, no_limiter, no_gain, no_noise,
                    **kwargs):
    """Analog FM voice path over the linearized channel (PCM in, PCM out)."""
    link, link_record = _resolve_link(profile, _link_overrides(kwargs))
    if not Path(speech_in).exists():
        raise ValueError(f"no such input file: {speech_in}")
    samples = rawio.read_pcm16(speech_in)
    if len(samples) == 0:
        raise ValueError("empty PCM input")
    if np.max(np.abs(samples)) == 0:
        raise ValueError("silent PCM input")
    speech = SpeechBuffer(samples=samples)
    if carrier_hz is None:
        carrier_hz = PROFILES["analog-fm"].carrier_freq_hz
    fading_config, channel_record = _fading_for(
        channel, speech.sample_rate_hz, seed + 1, velocity_kmh, delay_us,
        carrier_hz)
    fading = (None if fading_config is None
              else generate_envelope(fading_config, len(speech)))

    config = FmBaselineConfig(
        link=link, set_point_dbm=set_point_dbm, seed=seed, fading=fading,
        bpf_enabled=not no_bpf, preemph_enabled=not no_preemph,
        limiter_enabled=not no_limiter, gain_enabled=not no_gain,
        noise_enabled=not no_noise,
        **({"limiter_clip_factor": clip_factor} if clip_factor is not None else {}))
    result = run_fm_baseline(speech, config)
    rawio.write_pcm16(speech_out, result.output.samples)
    measurements = {
        "papr_before_db": result.papr_before_db,
        "papr_after_db": result.papr_after_db,
        "mean_mod_power": result.mean_mod_power,
        "snr_db": result.snr_db,
        "sigma_s": result.sigma_s,
        "noise_std": result.noise_std,
    }
    rawio.write_manifest(speech_out, {
        "command": "fm-baseline",
        "parameters": {**link_record, **channel_record,
                       "set_point_dbm": set_point_dbm,
                       "limiter_clip_factor": config.limiter_clip_factor,
                       "stages": {"bpf": config.bpf_enabled,
                                  "preemph": config.preemph_enabled,
                                  "limiter": config.limiter_enabled,
                                  "gain": config.gain_enabled,
                                  "noise": config.noise_enabled}},
        "seeds": {"noise": seed},
        "outputs": {"speech": Path(speech_out).name, "format": "pcm16le/8000"},
        "measurements": measurements,
    })
    for key, val in measurements.items():
        click.echo(f"{key}={val:.6g}")


@main.command("frame")
@click.option("--in", "payload_path", type=click.Path(dir_okay=False), required=True)
@click.option("--out", "frame_path", type=click.Path(dir_okay=False), required=True)
@click.option("--peak-amplitude", type=float, default=1.0, show_default=True)
@_guarded
def cmd_frame(payload_path, frame_path, peak_amplitude):
    """Pack payload symbols (multiples of 80) into 192-symbol frames."""
    if not Path(payload_path).exists():
        raise ValueError(f"no such input file: {payload_path}")
    layout = FrameLayout(peak_amplitude=peak_amplitude)
    payload = rawio.read_f32(payload_path)
    if len(payload) == 0 or len(payload) % layout.payload_symbols != 0:
        raise ValueError(
            f"payload length must be a positive multiple of {layout.payload_symbols}")
    frames = [assemble_frame(chunk, layout)
              for chunk in payload.reshape(-1, layout.payload_symbols)]
    rawio.write_f32(frame_path, np.concatenate(frames))
    rawio.write_manifest(frame_path, {
        "command": "frame",
        "parameters": {"peak_amplitude": peak_amplitude,
                       "num_frames": len(frames)},
        "outputs": {"frames": Path(frame_path).name, "dtype": "<f4"},
    })
    click.echo(f"wrote {len(frames)} frames to {frame_path}")


@main.command("deframe")
@click.option("--in", "frame_path", type=click.Path(dir_okay=False), required=True)
@click.option("--out", "payload_path", type=click.Path(dir_okay=False), required=True)
@_guarded
def cmd_deframe(frame_path, payload_path):
    """Extract payload symbols from aligned 192-symbol frames."""
    if not Path(frame_path).exists():
        raise ValueError(f"no such input file: {frame_path}")
    layout = FrameLayout()
    frames = rawio.read_f32(frame_path)
    if len(frames) == 0 or len(frames) % layout.frame_len_symbols != 0:
        raise ValueError(
            f"frame stream length must be a positive multiple of "
            f"{layout.frame_len_symbols}")
    payloads = [disassemble_frame(chunk, layout)
                for chunk in frames.reshape(-1, layout.frame_len_symbols)]
    rawio.write_f32(payload_path, np.concatenate(payloads))
    click.echo(f"wrote {len(payloads)} payloads to {payload_path}")


@main.command("modem-loop")
@click.option("--frames", "num_frames", type=int, default=8, show_default=True)
@click.option("--seed", type=int, required=True)
@click.option("--sps", type=int, default=DEFAULT_SPS, show_default=True)
@click.option("--snr-db", "target_snr_db", type=float, default=None,
              help="Symbol-level SNR after matched filtering (default noiseless).")
@click.option("--report", type=click.Path(dir_okay=False), default=None,
              help="Write the loop report as a manifest here.")
@_guarded
def cmd_modem_loop(num_frames, seed, sps, target_snr_db, report):
    """Random payloads through assemble - modulate - sync - disassemble."""
    if num_frames < 2:
        raise ValueError("need at least 2 frames for synchronization")
    layout = FrameLayout()
    rng = np.random.Generator(np.random.PCG64(seed))
    payloads = rng.uniform(-layout.peak_amplitude, layout.peak_amplitude,
                           (num_frames, layout.payload_symbols))
    symbols = np.concatenate([assemble_frame(p, layout) for p in payloads])
    signal = modulate(symbols, layout, sps=sps)
    if target_snr_db is not None:
        noise_std = sample_noise_std_for_symbol_snr(
            target_snr_db, sps, peak_amplitude=layout.peak_amplitude)
        noisy = signal.samples + noise_std * rng.standard_normal(len(signal.samples))
        signal = replace(signal, samples=noisy)

    sync = FrameSynchronizer(layout, sps=sps)
    state = sync.process(signal)
    results = {
        "synced": state.synced,
        "frame_offset": state.frame_offset,
        "timing_frac": state.timing_frac,
        "confidence": state.confidence,
    }
    if state.synced:
        recovered = sync.extract_payloads(signal, state)
        n = min(len(recovered), num_frames)
        err = recovered[:n] - payloads[:n]
        error_db = 10.0 * np.log10(
            np.mean(err**2) / np.mean(payloads[:n] ** 2))
        results.update(frames_recovered=int(len(recovered)),
                       payload_error_db=float(error_db))
    for key, val in results.items():
        click.echo(f"{key}={val}")
    if report is not None:
        rawio.dump_manifest(report, {
            "command": "modem-loop",
            "parameters": {"num_frames": num_frames, "sps": sps,
                           "target_snr_db": target_snr_db},
            "seeds": {"loop": seed},
            "measurements": results,
        })
    if not state.synced:
        raise ValueError("synchronization failed")


@main.command("golden")
@_profile_options
@_channel_options
@click.option("--set-point", "set_point_dbm", type=float, required=True)
@click.option("--symbols", "num_symbols", type=int, default=20000,
              show_default=True)
@click.option("--rate", "rate_hz", type=float, default=None)
@click.option("--seed", type=int, required=True)
@click.option("--out-dir", type=click.Path(file_okay=False), required=True)
@_guarded
def cmd_golden(profile, channel, velocity_kmh, delay_us, carrier_hz,
               set_point_dbm, num_symbols, rate_hz, seed, out_dir, **kwargs):
    """Emit a golden vector bundle for cross-implementation validation.

    Writes tx / fading / sigma / noise / rx float32 arrays such that
    rx = tx + sigma * noise holds exactly in float32 arithmetic over the
    stored values, plus a manifest with every parameter and seed.
    """
    link, link_record = _resolve_link(profile, _link_overrides(kwargs))
    if rate_hz is None:
        rate_hz = PROFILES[profile].symbol_rate_hz or 2000.0
    if carrier_hz is None:
        carrier_hz = PROFILES[profile].carrier_freq_hz
    if num_symbols <= 0:
        raise ValueError("--symbols must be positive")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    tx_seed, fading_seed, noise_seed = seed, seed + 1, seed + 2
    rng_tx = np.random.Generator(np.random.PCG64(tx_seed))
    tx32 = rng_tx.uniform(-link.peak_amplitude, link.peak_amplitude,
                          num_symbols).astype(np.float32)

    fading_config, channel_record = _fading_for(
        channel, rate_hz, fading_seed, velocity_kmh, delay_us, carrier_hz)
    if fading_config is None:
        fading32 = np.ones(num_symbols, dtype=np.float32)
    else:
        fading32 = generate_envelope(
            fading_config, num_symbols).magnitudes.astype(np.float32)

    # sigma is recomputed from the float32-stored fading so the bundle is
    # self-consistent for independent readers
    run = ChannelRun(link=link, set_point_dbm=set_point_dbm,
                     fading=FadingEnvelope(magnitudes=fading32.astype(float),
                                           rate_hz=rate_hz),
                     noise_seed=noise_seed)
    sigma32 = per_symbol_sigma(run, num_symbols).astype(np.float32)
    rng_noise = np.random.Generator(np.random.PCG64(noise_seed))
    noise32 = rng_noise.standard_normal(num_symbols).astype(np.float32)
    rx32 = tx32 + sigma32 * noise32  # float32 arithmetic throughout

    files = {"tx": tx32, "fading": fading32, "sigma": sigma32,
             "noise": noise32, "rx": rx32}
    for name, data in files.items():
        rawio.write_f32(out / f"{name}.f32", data)
    manifest = {
        "command": "golden",
        "parameters": {**link_record, **channel_record,
                       "set_point_dbm": set_point_dbm,
                       "symbol_rate_hz": rate_hz,
                       "num_symbols": num_symbols,
                       "fm_gain_db": fm_gain_db(link),
                       "threshold_dbm": threshold_dbm(link)},
        "seeds": {"tx": tx_seed, "fading": fading_seed, "noise": noise_seed},
        "outputs": {name: f"{name}.f32" for name in files} | {"dtype": "<f4"},
        "measurements": {
            "measured_snr_db": float(measure_snr(
                SymbolStream(tx32.astype(float), rate_hz),
                SymbolStream(rx32.astype(float), rate_hz),
                link.peak_amplitude)) if num_symbols >= 1000 else None,
        },
    }
    rawio.dump_manifest(out / "manifest.json", manifest)
    click.echo(f"wrote golden bundle ({num_symbols} symbols) to {out}")


@main.command("papr")
@click.option("--in", "speech_in", type=click.Path(dir_okay=False), required=True)
@_guarded
def cmd_papr(speech_in):
    """Measure PAPR and mean power of a PCM speech file."""
    from .fm_baseline import measure_mean_power, measure_papr_db
    if not Path(speech_in).exists():
        raise ValueError(f"no such input file: {speech_in}")
    speech = SpeechBuffer(samples=rawio.read_pcm16(speech_in))
    click.echo(f"papr_db={measure_papr_db(speech):.6g}")
    click.echo(f"mean_power={measure_mean_power(speech):.6g}")


@main.command("speech-gen")
@click.option("--seed", type=int, required=True)
@click.option("--duration", "duration_s", type=float, default=8.0,
              show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@_guarded
def cmd_speech_gen(seed, duration_s, out):
    """Generate the deterministic speech-like test clip (PCM 8 kHz)."""
    clip = synthesize_speech(seed, duration_s)
    rawio.write_pcm16(out, clip.samples)
    rawio.write_manifest(out, {
        "command": "speech-gen",
        "parameters": {"duration_s": duration_s,
                       "sample_rate_hz": clip.sample_rate_hz},
        "seeds": {"speech": seed},
        "outputs": {"speech": Path(out).name, "format": "pcm16le/8000"},
    })
    click.echo(f"wrote {len(clip)} samples to {out}")


if __name__ == "__main__":
    main()
