"""Fading generator tests: statistics, spectra, determinism, edge cases."""

import numpy as np
import pytest
from scipy import signal, stats

from bbfm.fading import (
    FadingConfig,
    FadingEnvelope,
    envelope_to_db,
    generate_envelope,
    generate_taps,
    lmr_fading_config,
)


def test_doppler_spread_formula():
    config = lmr_fading_config(output_rate_hz=2000.0, seed=0)
    # 60 km/h at 450 MHz: 2 * 450e6 * 16.667 / 3e8
    assert config.velocity_mps == pytest.approx(60 / 3.6)
    assert config.doppler_spread_hz == pytest.approx(50.0, abs=1e-9)


def test_zero_velocity_constant_envelope():
    config = FadingConfig(450e6, 0.0, 200e-6, 2000.0, seed=3)
    env = generate_envelope(config, 5000)
    assert config.doppler_spread_hz == 0.0
    assert np.all(env.magnitudes == env.magnitudes[0])
    assert env.magnitudes[0] > 0


def test_zero_velocity_mean_power_across_seeds():
    powers = []
    for seed in range(400):
        config = FadingConfig(450e6, 0.0, 0.0, 2000.0, seed=seed)
        env = generate_envelope(config, 1)
        powers.append(env.magnitudes[0] ** 2)
    # E[|H|^2] = 1; 400 draws of an exponential: mean within ~5 sigma
    assert np.mean(powers) == pytest.approx(1.0, abs=0.25)


def test_mean_power_calibration():
    config = lmr_fading_config(2000.0, seed=42)
    env = generate_envelope(config, 200_000)
    assert np.mean(env.magnitudes**2) == pytest.approx(1.0, abs=0.02)


def test_rayleigh_marginal():
    config = lmr_fading_config(2000.0, seed=7)
    env = generate_envelope(config, 500_000)
    ks = stats.kstest(env.magnitudes, "rayleigh", args=(0, 1 / np.sqrt(2)))
    assert ks.statistic < 0.01


def test_tap_power_split():
    config = lmr_fading_config(2000.0, seed=11)
    g1, g2 = generate_taps(config, 100_000)
    assert np.mean(np.abs(g1) ** 2) == pytest.approx(0.5, abs=1e-9)
    assert np.mean(np.abs(g2) ** 2) == pytest.approx(0.5, abs=1e-9)


def test_doppler_bandwidth_of_taps():
    config = lmr_fading_config(2000.0, seed=5)
    g1, _ = generate_taps(config, 2**18)
    freqs, psd = signal.welch(g1, fs=2000.0, nperseg=8192,
                              return_onesided=False)
    order = np.argsort(freqs)
    freqs, psd = freqs[order], psd[order]
    total = np.sum(psd)
    inside = np.sum(psd[np.abs(freqs) <= config.doppler_spread_hz])
    assert inside / total >= 0.99


def test_zero_delay_still_rayleigh_unit_power():
    config = FadingConfig(450e6, 60 / 3.6, 0.0, 2000.0, seed=13)
    env = generate_envelope(config, 500_000)
    assert np.mean(env.magnitudes**2) == pytest.approx(1.0, abs=0.02)
    ks = stats.kstest(env.magnitudes, "rayleigh", args=(0, 1 / np.sqrt(2)))
    assert ks.statistic < 0.01


def test_determinism():
    config = lmr_fading_config(2000.0, seed=99)
    a = generate_envelope(config, 10_000)
    b = generate_envelope(config, 10_000)
    assert np.array_equal(a.magnitudes, b.magnitudes)


def test_different_seeds_differ():
    a = generate_envelope(lmr_fading_config(2000.0, seed=1), 1000)
    b = generate_envelope(lmr_fading_config(2000.0, seed=2), 1000)
    assert not np.array_equal(a.magnitudes, b.magnitudes)


def test_rejects_doppler_above_nyquist():
    with pytest.raises(ValueError):
        FadingConfig(450e6, velocity_mps=400.0, delay_spread_s=0.0,
                     output_rate_hz=2000.0, seed=0)


def test_rejects_zero_samples():
    config = lmr_fading_config(2000.0, seed=0)
    with pytest.raises(ValueError):
        generate_envelope(config, 0)


def test_rejects_negative_velocity():
    with pytest.raises(ValueError):
        FadingConfig(450e6, -1.0, 0.0, 2000.0, seed=0)


class TestEnvelopeToDb:
    def test_unity(self):
        env = FadingEnvelope(np.array([1.0]), 2000.0)
        assert envelope_to_db(env)[0] == 0.0

    def test_decade(self):
        env = FadingEnvelope(np.array([0.1]), 2000.0)
        assert envelope_to_db(env)[0] == pytest.approx(-20.0)

    def test_sqrt2(self):
        env = FadingEnvelope(np.array([np.sqrt(2.0)]), 2000.0)
        assert envelope_to_db(env)[0] == pytest.approx(3.0103, abs=1e-3)

    def test_zero_clamps(self):
        env = FadingEnvelope(np.array([0.0, 1e-30]), 2000.0)
        db = envelope_to_db(env)
        assert np.all(db == -200.0)
