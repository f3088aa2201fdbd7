import numpy as np
import pytest

from qheat.bloch import correlator_from_eom, steady_moments, three_level_weak_eom, two_level_eom
from qheat.constants import TWO_PI
from qheat.lindblad import build_liouvillian, regression_correlator
from qheat.lindblad import steady_moments as lindblad_moments
from qheat.lindblad import steady_state
from qheat.model import DriveSpec, derive_rates, table1_config
from qheat.observables import reflection_three_level
from conftest import random_config


class TestTwoLevelEom:
    def test_undriven_coherence_pole(self, rates):
        delta = TWO_PI * 50e3
        sys2 = two_level_eom(delta, 0.0, rates)
        eig = np.linalg.eigvals(sys2.m_matrix)
        target = 1j * delta - rates.gamma_2
        assert np.min(np.abs(eig - target)) < 1e-6 * abs(target)

    def test_matches_lindblad_steady_state(self, t1_config, rates):
        sys2 = two_level_eom(0.0, TWO_PI * 95e3, rates)
        ms = steady_moments(sys2)
        ml = lindblad_moments(t1_config.with_drive(DriveSpec("t01", 0.0, TWO_PI * 95e3)))
        assert abs(ms["sp_sm"] - ml["sp_sm"]) <= 1e-9 * abs(ml["sp_sm"])

    def test_coherence_closed_form_over_random_draws(self):
        rng = np.random.default_rng(17)
        for _ in range(100):
            cfg = random_config(rng)
            r = derive_rates(cfg)
            delta = TWO_PI * rng.uniform(-1e6, 1e6)
            omega = TWO_PI * rng.uniform(1e3, 3e6) * np.exp(1j * rng.uniform(0, 2 * np.pi))
            ms = steady_moments(two_level_eom(delta, omega, r))
            den = 2 * abs(omega) ** 2 * r.gamma_2 + 2 * (delta**2 + r.gamma_2**2) * r.gamma_1
            sm_expected = omega * (r.gamma_1 - 2 * r.gamma_plus) * (delta - 1j * r.gamma_2) / den
            assert abs(ms["sm"] - sm_expected) <= 1e-10 * max(abs(sm_expected), 1e-15)
            assert ms["sp"] == pytest.approx(np.conj(ms["sm"]), abs=1e-14)

    def test_saturation_and_detuning_limits(self, rates):
        ms = steady_moments(two_level_eom(0.0, TWO_PI * 1e12, rates))
        assert ms["sp_sm"].real == pytest.approx(0.5, abs=1e-6)
        ms = steady_moments(two_level_eom(TWO_PI * 1e13, TWO_PI * 1e5, rates))
        assert ms["sp_sm"].real == pytest.approx(rates.gamma_plus / rates.gamma_1, rel=1e-6)
        assert abs(ms["sm"]) < 1e-8

    def test_all_rates_zero_is_singular(self, rates):
        from dataclasses import replace

        dead = replace(rates, gamma_1=0.0, gamma_2=0.0, gamma_plus=0.0, gamma_minus=0.0)
        with pytest.raises(np.linalg.LinAlgError):
            steady_moments(two_level_eom(0.0, 0.0, dead))

    def test_drift_is_stable_for_physical_rates(self):
        rng = np.random.default_rng(23)
        for _ in range(100):
            r = derive_rates(random_config(rng))
            sys2 = two_level_eom(TWO_PI * rng.uniform(-2e6, 2e6), TWO_PI * rng.uniform(0, 5e6), r)
            assert np.all(np.linalg.eigvals(sys2.m_matrix).real < 0)


class TestThreeLevelWeakEom:
    def test_zero_temperature_ground_state(self, rates3):
        from dataclasses import replace

        cold = replace(rates3, n_r_01=0.0, n_n_01=0.0, n_r_12=0.0, n_n_12=0.0,
                       gamma_plus_01=0.0, gamma_minus_01=rates3.gamma_r + rates3.gamma_n,
                       gamma_plus_12=0.0, gamma_minus_12=rates3.gamma_r + rates3.gamma_n)
        ms = steady_moments(three_level_weak_eom(0.0, 0.0, cold))
        assert ms["sp_sm"].real == pytest.approx(0.0, abs=1e-14)
        assert ms["sm_sp"].real == pytest.approx(1.0, abs=1e-12)

    def test_weak_probe_reproduces_reflection_closed_form(self, rates3):
        omega1 = TWO_PI * 10.0  # deep linear response
        for delta in (0.0, TWO_PI * 30e3, -TWO_PI * 120e3):
            ms = steady_moments(three_level_weak_eom(delta, omega1, rates3))
            r_eom = 1 - 2j * rates3.gamma_r / omega1 * ms["sm"]
            r_closed = reflection_three_level(delta, rates3)
            assert abs(r_eom - r_closed) < 1e-6

    def test_matches_lindblad_steady_state(self, t1_config_3l, rates3):
        omega1, delta = TWO_PI * 1e3, TWO_PI * 10e3
        ms = steady_moments(three_level_weak_eom(delta, omega1, rates3))
        ml = lindblad_moments(t1_config_3l.with_drive(DriveSpec("t01", delta, omega1)))
        assert abs(ms["sp_sm"] - ml["sp_sm"]) < 1e-8
        assert abs(ms["sm"] - ml["sm"]) < 1e-8

    def test_upper_drive_rejected(self, rates3):
        with pytest.raises(ValueError):
            three_level_weak_eom(0.0, 0.0, rates3, omega2=TWO_PI * 1e5)


class TestCorrelators:
    def test_undriven_decay_constant(self, rates):
        sys2 = two_level_eom(0.0, 0.0, rates)
        t = np.linspace(1e-9, 4 / rates.gamma_2, 50)
        trace = correlator_from_eom(sys2, t, "sp_sm")
        slopes = np.diff(np.log(np.abs(trace.values))) / np.diff(t)
        assert np.max(np.abs(slopes + rates.gamma_2)) <= 1e-9 * rates.gamma_2

    def test_equal_time_value_is_steady_moment(self, rates):
        sys2 = two_level_eom(0.0, TWO_PI * 2e6, rates)
        trace = correlator_from_eom(sys2, np.array([0.0, 1e-7]), "sp_sm")
        assert trace.values[0] == pytest.approx(steady_moments(sys2)["sp_sm"], abs=1e-14)

    def test_strong_drive_pole_structure(self, rates):
        omega = 30 * rates.gamma_1
        sys2 = two_level_eom(0.0, omega, rates)
        eig = np.linalg.eigvals(sys2.m_matrix)
        # one purely damped center pole at the coherence rate
        assert np.min(np.abs(eig - (-rates.gamma_2))) < 1e-6 * rates.gamma_2
        # one sideband pair split by the drive
        side = eig[np.abs(eig.imag) > 0.5 * omega]
        assert len(side) == 2
        assert np.allclose(np.sort(side.imag), [-omega, omega], rtol=1e-3)

    def test_matches_lindblad_regression(self, t1_config, rates):
        drive = DriveSpec("t01", 0.0, TWO_PI * 8.8e6)
        lio = build_liouvillian(t1_config.with_drive(drive))
        rho = steady_state(lio)
        t = np.linspace(0, 5 / rates.gamma_2, 300)
        for kind in ("sp_sm", "sm_sp"):
            ref = regression_correlator(lio, rho, t, kind)
            alt = correlator_from_eom(two_level_eom(0.0, TWO_PI * 8.8e6, rates), t, kind)
            assert np.max(np.abs(ref.values - alt.values)) < 1e-8

    def test_unstable_drift_rejected(self, rates):
        from dataclasses import replace

        sys2 = two_level_eom(0.0, 0.0, replace(rates, gamma_1=-rates.gamma_1, gamma_2=-rates.gamma_2))
        with pytest.raises(ValueError):
            correlator_from_eom(sys2, np.array([0.0, 1e-6]))
