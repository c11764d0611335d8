"""Symbol channel tests: calibration, fading consistency, determinism."""

import numpy as np
import pytest

from bbfm.channel import ChannelRun, SymbolStream, apply_channel, measure_snr, per_symbol_sigma
from bbfm.fading import FadingEnvelope, lmr_fading_config, generate_envelope
from bbfm.link import ANALOG_FM_LINK, RADE_LINK, noise_sigma, snr_db, threshold_dbm


def awgn_run(link, set_point, seed=0):
    return ChannelRun(link=link, set_point_dbm=set_point, fading=None,
                      noise_seed=seed)


def random_stream(n, rate=2000.0, seed=1, amplitude=1.0):
    rng = np.random.Generator(np.random.PCG64(seed))
    return SymbolStream(rng.uniform(-amplitude, amplitude, n), rate)


class TestApplyChannel:
    def test_threshold_noise_level(self):
        # At the threshold set point the output noise std is 10**(-12/20).
        tx = random_stream(100_000)
        run = awgn_run(ANALOG_FM_LINK, threshold_dbm(ANALOG_FM_LINK), seed=2)
        rx = apply_channel(tx, run)
        measured_std = np.std(rx.symbols - tx.symbols)
        assert measured_std == pytest.approx(10 ** (-12 / 20), rel=0.02)

    def test_far_above_threshold_nearly_transparent(self):
        tx = random_stream(100_000, seed=3)
        rx = apply_channel(tx, awgn_run(RADE_LINK, -40.0, seed=4))
        assert np.max(np.abs(rx.symbols - tx.symbols)) < 1e-3

    def test_zero_input_pure_noise(self):
        tx = SymbolStream(np.zeros(50_000), 2000.0)
        sp = threshold_dbm(RADE_LINK)
        rx = apply_channel(tx, awgn_run(RADE_LINK, sp, seed=5))
        sigma = noise_sigma(RADE_LINK, 12.0)
        assert np.std(rx.symbols) == pytest.approx(sigma, rel=0.02)

    def test_mean_preserved(self):
        # The deterministic part of the channel is the identity map.
        tx = SymbolStream(np.full(200_000, 0.5), 2000.0)
        rx = apply_channel(tx, awgn_run(RADE_LINK, -110.0, seed=6))
        sigma = per_symbol_sigma(awgn_run(RADE_LINK, -110.0), 1)[0]
        assert np.mean(rx.symbols) == pytest.approx(
            0.5, abs=5 * sigma / np.sqrt(len(tx)))

    def test_determinism(self):
        tx = random_stream(10_000, seed=7)
        run = awgn_run(RADE_LINK, -115.0, seed=8)
        a = apply_channel(tx, run)
        b = apply_channel(tx, run)
        assert np.array_equal(a.symbols, b.symbols)

    def test_rejects_over_amplitude(self):
        tx = SymbolStream(np.array([0.0] * 10 + [1.5]), 2000.0)
        with pytest.raises(ValueError):
            apply_channel(tx, awgn_run(RADE_LINK, -100.0))

    def test_rejects_rate_mismatch(self):
        tx = random_stream(100, rate=4800.0)
        fading = generate_envelope(lmr_fading_config(2000.0, seed=1), 100)
        run = ChannelRun(RADE_LINK, -110.0, fading, noise_seed=0)
        with pytest.raises(ValueError):
            apply_channel(tx, run)

    def test_rejects_short_fading(self):
        tx = random_stream(200)
        fading = generate_envelope(lmr_fading_config(2000.0, seed=1), 100)
        run = ChannelRun(RADE_LINK, -110.0, fading, noise_seed=0)
        with pytest.raises(ValueError):
            apply_channel(tx, run)

    def test_frozen_fade_equals_shifted_set_point(self):
        # A constant |H| = h envelope behaves as AWGN at R + 20*log10(h).
        h = 0.5
        n = 200_000
        tx = SymbolStream(np.zeros(n), 2000.0)
        fading = FadingEnvelope(np.full(n, h), 2000.0)
        faded = apply_channel(
            tx, ChannelRun(RADE_LINK, -110.0, fading, noise_seed=9))
        shifted = apply_channel(
            tx, awgn_run(RADE_LINK, -110.0 + 20 * np.log10(h), seed=9))
        # identical seeds, identical sigma path: bit-identical outputs
        assert np.allclose(faded.symbols, shifted.symbols, atol=1e-12)

    def test_per_symbol_sigma_tracks_fading(self):
        n = 1000
        mags = np.linspace(0.2, 2.0, n)
        fading = FadingEnvelope(mags, 2000.0)
        run = ChannelRun(RADE_LINK, -112.0, fading, noise_seed=0)
        sigma = per_symbol_sigma(run, n)
        expected = noise_sigma(
            RADE_LINK, snr_db(RADE_LINK, -112.0, 20 * np.log10(mags)))
        assert np.allclose(sigma, expected)


class TestMeasureSnr:
    def test_identical_streams_capped(self):
        tx = random_stream(2000)
        assert measure_snr(tx, tx) == 200.0

    def test_unit_noise_zero_db(self):
        n = 100_000
        rng = np.random.Generator(np.random.PCG64(10))
        tx = SymbolStream(np.zeros(n), 2000.0)
        rx = SymbolStream(rng.standard_normal(n), 2000.0)
        assert measure_snr(tx, rx) == pytest.approx(0.0, abs=0.2)

    def test_round_trip_with_channel(self):
        tx = random_stream(100_000, seed=11)
        t = threshold_dbm(ANALOG_FM_LINK)
        rx = apply_channel(tx, awgn_run(ANALOG_FM_LINK, t, seed=12))
        assert measure_snr(tx, rx) == pytest.approx(12.0, abs=0.2)

    def test_requested_vs_measured_across_set_points(self):
        for set_point in (-130.0, -122.41, -110.0, -100.0):
            tx = random_stream(100_000, seed=13)
            rx = apply_channel(tx, awgn_run(ANALOG_FM_LINK, set_point, seed=14))
            requested = snr_db(ANALOG_FM_LINK, set_point)
            assert measure_snr(tx, rx) == pytest.approx(requested, abs=0.2)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            measure_snr(random_stream(2000), random_stream(2001))

    def test_too_short(self):
        with pytest.raises(ValueError):
            measure_snr(random_stream(500), random_stream(500))


class TestStreamValidation:
    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            SymbolStream(np.array([1.0, np.nan]), 2000.0)

    def test_rejects_bad_rate(self):
        with pytest.raises(ValueError):
            SymbolStream(np.zeros(4), 0.0)
