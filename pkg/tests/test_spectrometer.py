import numpy as np
import pytest

from qheat.constants import HBAR, TWO_PI
from qheat.model import ConfigError
from qheat.observables import mollow_center_psd, reflection_coefficient
from qheat.spectra import Spectrum, default_omega_grid, integrate_spectrum
from qheat.spectrometer import (
    SpectrometerConfig,
    estimate_delta_n_integrated,
    estimate_delta_n_pointwise,
    spectrometer_drive_psd,
    spectrometer_thermal_psd,
    split_occupations,
    sweep_spectrometer,
)

OMEGA01 = TWO_PI * 5.5e9


@pytest.fixture()
def cfg():
    return SpectrometerConfig(gamma_r=TWO_PI * 2e6, gamma_n=TWO_PI * 2e3, n_th=0.139, n_r=0.004, omega01=OMEGA01)


def synth_pair(cfg, span_widths=10.0, points_per_width=20.0):
    grid = default_omega_grid(cfg.omega01, cfg.gamma_2, span_widths, points_per_width)
    return spectrometer_thermal_psd(grid, cfg), spectrometer_drive_psd(grid, cfg)


class TestNoiseLine:
    def test_balanced_channels_emit_nothing(self, cfg):
        from dataclasses import replace

        flat = replace(cfg, n_r=cfg.n_th)
        s, _ = synth_pair(flat)
        assert np.all(s.values == 0)

    def test_peak_ratio_is_twice_imbalance(self, cfg):
        s_th, s_on = synth_pair(cfg)
        assert np.max(s_th.values) / np.max(s_on.values) == pytest.approx(2 * cfg.delta_n, rel=1e-12)

    def test_integral(self, cfg):
        grid = default_omega_grid(cfg.omega01, cfg.gamma_2, span_widths=60.0)
        total = integrate_spectrum(spectrometer_thermal_psd(grid, cfg), wings=True)
        assert total == pytest.approx(HBAR * cfg.omega01 * cfg.gamma_r * cfg.delta_n / 2.0, rel=1e-3)

    def test_reference_power_ratio(self, cfg):
        grid = default_omega_grid(cfg.omega01, cfg.gamma_2, span_widths=60.0)
        p_th = integrate_spectrum(spectrometer_thermal_psd(grid, cfg), wings=True)
        p_on = integrate_spectrum(spectrometer_drive_psd(grid, cfg), wings=True)
        assert p_on == pytest.approx(HBAR * cfg.omega01 * cfg.gamma_r / 4.0, rel=1e-3)
        assert estimate_delta_n_integrated(p_th, p_on) == pytest.approx(cfg.delta_n, rel=1e-2)

    def test_weak_coupling_guard(self):
        with pytest.raises(ConfigError):
            SpectrometerConfig(gamma_r=TWO_PI * 1e4, gamma_n=TWO_PI * 9e3, n_th=0.1, n_r=0.0, omega01=OMEGA01)
        with pytest.warns(UserWarning):
            SpectrometerConfig(gamma_r=TWO_PI * 5e5, gamma_n=TWO_PI * 1e4, n_th=0.1, n_r=0.0, omega01=OMEGA01)


class TestPointwiseEstimator:
    def test_noiseless_recovery(self, cfg):
        est = estimate_delta_n_pointwise(*synth_pair(cfg))
        assert est.center_value == pytest.approx(0.135, abs=1e-6)
        band = est.values[np.isfinite(est.values)]
        assert np.max(np.abs(band - 0.135)) < 1e-9
        assert not est.narrowband

    def test_zero_imbalance(self, cfg):
        from dataclasses import replace

        est = estimate_delta_n_pointwise(*synth_pair(replace(cfg, n_r=cfg.n_th)))
        assert est.center_value == 0.0

    def test_narrowband_noise_flagged(self, cfg):
        grid = default_omega_grid(cfg.omega01, cfg.gamma_2, 10.0, 20.0)
        narrow = cfg.gamma_2 / 3.0
        s_th = Spectrum(
            freqs=grid / TWO_PI,
            values=1e-24 * narrow**2 / ((grid - cfg.omega01) ** 2 + narrow**2),
        )
        s_on = spectrometer_drive_psd(grid, cfg)
        est = estimate_delta_n_pointwise(s_th, s_on)
        assert est.narrowband

    def test_grid_mismatch_rejected(self, cfg):
        s_th, s_on = synth_pair(cfg)
        shifted = Spectrum(freqs=s_on.freqs + 1.0, values=s_on.values)
        with pytest.raises(ValueError):
            estimate_delta_n_pointwise(s_th, shifted)

    def test_matches_integrated_on_synthetics(self, cfg):
        s_th, s_on = synth_pair(cfg, span_widths=40.0)
        est = estimate_delta_n_pointwise(s_th, s_on)
        p_th = integrate_spectrum(s_th, wings=True)
        p_on = integrate_spectrum(s_on, wings=True)
        assert est.center_value == pytest.approx(estimate_delta_n_integrated(p_th, p_on), abs=1e-10)

    def test_dephasing_insensitive(self, cfg):
        from dataclasses import replace

        est0 = estimate_delta_n_pointwise(*synth_pair(cfg))
        dephased = replace(cfg, gamma_phi=0.5 * cfg.gamma_r)
        est1 = estimate_delta_n_pointwise(*synth_pair(dephased))
        assert est1.center_value == pytest.approx(est0.center_value, abs=1e-12)


class TestIntegratedEstimator:
    def test_exact_algebra(self, cfg):
        p_th = HBAR * cfg.omega01 * cfg.gamma_r * cfg.delta_n / 2.0
        p_on = HBAR * cfg.omega01 * cfg.gamma_r / 4.0
        assert estimate_delta_n_integrated(p_th, p_on) == pytest.approx(cfg.delta_n, rel=1e-15)

    def test_gain_invariance(self, cfg):
        p_th, p_on = 3.3e-19, 1.1e-18
        base = estimate_delta_n_integrated(p_th, p_on)
        for gain in (0.03125, 1.0, 2.0**21):  # exact in floats
            assert estimate_delta_n_integrated(gain * p_th, gain * p_on) == base
        for gain in (1e-3, 4.7e6):  # arbitrary gains: exact to rounding
            assert estimate_delta_n_integrated(gain * p_th, gain * p_on) == pytest.approx(base, rel=1e-15)

    def test_noisy_powers_within_two_sigma(self, cfg):
        rng = np.random.default_rng(41)
        p_th = HBAR * cfg.omega01 * cfg.gamma_r * cfg.delta_n / 2.0
        p_on = HBAR * cfg.omega01 * cfg.gamma_r / 4.0
        rel = 0.05
        estimates = [
            estimate_delta_n_integrated(p_th * (1 + rel * rng.standard_normal()), p_on * (1 + rel * rng.standard_normal()))
            for _ in range(400)
        ]
        sigma = cfg.delta_n * rel * np.sqrt(2)  # error propagation through the ratio
        assert abs(np.mean(estimates) - cfg.delta_n) < 2 * sigma / np.sqrt(len(estimates)) + 0.01 * cfg.delta_n
        assert np.std(estimates) == pytest.approx(sigma, rel=0.25)


class TestSplitOccupations:
    def test_reference_split(self):
        assert split_occupations(0.135, 0.143) == pytest.approx((0.139, 0.004))

    def test_zero(self):
        assert split_occupations(0.0, 0.0) == (0.0, 0.0)

    def test_negative_flagged(self):
        with pytest.raises(ValueError):
            split_occupations(0.2, 0.1)

    def test_on_resonance_reflection_is_occupation_sum(self, cfg):
        from dataclasses import replace

        rng = np.random.default_rng(43)
        for _ in range(50):
            local = replace(cfg, n_th=rng.uniform(0, 0.4), n_r=rng.uniform(0, 0.4))
            r0 = reflection_coefficient(0.0, local.to_rates())
            assert r0.real == pytest.approx(local.n_th + local.n_r, rel=1e-12, abs=1e-14)
            assert abs(r0.imag) < 1e-14


class TestSweep:
    def test_flat_profile_noiseless(self, cfg):
        grid = np.linspace(0.9 * OMEGA01, 1.1 * OMEGA01, 7)
        rec = sweep_spectrometer(cfg, grid, lambda om: 0.139)
        assert np.allclose(rec, 0.135, atol=1e-9)

    def test_zero_profile(self, cfg):
        from dataclasses import replace

        grid = np.linspace(0.95 * OMEGA01, 1.05 * OMEGA01, 5)
        rec = sweep_spectrometer(replace(cfg, n_r=0.0), grid, lambda om: 0.0)
        assert np.allclose(rec, 0.0, atol=1e-12)

    def test_flat_profile_with_noise(self, cfg):
        grid = np.linspace(0.95 * OMEGA01, 1.05 * OMEGA01, 31)
        rec = sweep_spectrometer(cfg, grid, lambda om: 0.139, noise_rms=0.05, seed=7)
        assert np.std(rec) < 0.02
        assert np.mean(rec) == pytest.approx(0.135, abs=3 * 0.02 / np.sqrt(len(grid)) + 0.002)

    def test_step_profile_resolution_limit(self, cfg):
        step_at = OMEGA01
        profile = lambda om: 0.25 if om > step_at else 0.05
        span = 8 * cfg.gamma_r
        grid = np.linspace(step_at - span, step_at + span, 33)
        rec = sweep_spectrometer(cfg, grid, profile)
        assert rec[0] == pytest.approx(0.05 - cfg.n_r, abs=0.02)
        assert rec[-1] == pytest.approx(0.25 - cfg.n_r, abs=0.02)
        lo, hi = 0.05 - cfg.n_r, 0.25 - cfg.n_r
        crossing = grid[np.argmin(np.abs(rec - (lo + hi) / 2))]
        assert abs(crossing - step_at) < 2 * cfg.gamma_r
        # the transition is smeared over a few linewidths, not sharp
        width_region = np.abs(grid - step_at) < 3 * cfg.gamma_2
        assert np.any((rec[width_region] > lo + 0.02) & (rec[width_region] < hi - 0.02))
