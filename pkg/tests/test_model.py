import math

import numpy as np
import pytest
from scipy.optimize import brentq

from qheat.constants import HBAR, KB, TWO_PI
from qheat.model import (
    BathSpec,
    ConfigError,
    DriveSpec,
    SystemConfig,
    TransmonSpec,
    derive_rates,
    occupation_from_temperature,
    qubit_occupation_from_population,
    table1_config,
    temperature_from_occupation,
    tls_rate_vs_temperature,
)
from conftest import OMEGA01, random_config


class TestDeriveRates:
    def test_reference_gamma_1(self, rates):
        # direct arithmetic: (1+2*0.139)*55 + (1+2*0.004)*227 kHz
        expected = TWO_PI * ((1 + 2 * 0.139) * 55e3 + (1 + 2 * 0.004) * 227e3)
        assert rates.gamma_1 == pytest.approx(expected, rel=1e-12)
        assert rates.gamma_1 / TWO_PI == pytest.approx(299.106e3, abs=1e3)

    def test_reference_gamma_plus(self, rates):
        expected = TWO_PI * (0.139 * 55e3 + 0.004 * 227e3)
        assert rates.gamma_plus == pytest.approx(expected, rel=1e-12)
        assert rates.gamma_plus / TWO_PI == pytest.approx(8.553e3, abs=30.0)

    def test_no_dephasing_halves_gamma_1(self, rates):
        assert rates.gamma_2 == rates.gamma_1 / 2.0

    def test_gamma_1_splits_into_up_and_down(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            r = derive_rates(random_config(rng))
            assert r.gamma_1 == pytest.approx(r.gamma_plus + r.gamma_minus, rel=1e-14)
            assert min(r.gamma_plus, r.gamma_minus, r.gamma_1, r.gamma_2) >= 0

    def test_population_split_independence_needs_equal_occupations(self):
        # equal occupations: gamma_plus/gamma_1 invariant under moving rate
        # between the baths; unequal occupations: it is not
        rng = np.random.default_rng(11)
        for _ in range(50):
            n = rng.uniform(0.01, 0.4)
            g_a, g_b = TWO_PI * rng.uniform(1e4, 1e6, size=2)

            def ratio(n_r, n_n, gr, gn):
                cfg = table1_config(gamma_r_hz=gr / TWO_PI, gamma_n_hz=gn / TWO_PI, n_r=n_r, n_n=n_n)
                r = derive_rates(cfg)
                return r.gamma_plus / r.gamma_1

            assert ratio(n, n, g_a, g_b) == pytest.approx(ratio(n, n, g_b, g_a), rel=1e-12)
            n2 = n + 0.1
            assert abs(ratio(n, n2, g_a, g_b) - ratio(n, n2, g_b, g_a)) > 1e-6 or g_a == g_b

    def test_tls_statistics_rescale_rates(self):
        n = 0.139
        cfg_tls = table1_config()
        cfg_tls = SystemConfig(
            transmon=cfg_tls.transmon,
            radiative=cfg_tls.radiative,
            nonradiative=BathSpec(label="nonradiative", gamma=TWO_PI * 55e3, occupation=n, statistics="tls"),
        )
        cfg_equiv = table1_config(gamma_n_hz=55e3 / (1 + 2 * n))
        r_tls, r_eq = derive_rates(cfg_tls), derive_rates(cfg_equiv)
        assert r_tls.gamma_plus == pytest.approx(r_eq.gamma_plus, rel=1e-12)
        assert r_tls.gamma_minus == pytest.approx(r_eq.gamma_minus, rel=1e-12)

    def test_three_level_extras(self, rates3):
        assert rates3.gamma_1_01 == pytest.approx(rates3.gamma_plus_01 + rates3.gamma_minus_01)
        assert rates3.gamma_2_t == pytest.approx(rates3.gamma_2_01 + rates3.gamma_plus_12)
        assert rates3.gamma_2_02 == pytest.approx(rates3.gamma_phi + rates3.gamma_plus_01 / 2 + rates3.gamma_minus_12)
        # equal occupations on both transitions by default
        assert rates3.gamma_plus_12 == pytest.approx(rates3.gamma_plus_01)


class TestOccupationTemperature:
    def test_bosonic_reference_point(self):
        t = temperature_from_occupation(0.135, OMEGA01, "bosonic")
        assert KB * t / (HBAR * OMEGA01) == pytest.approx(0.47, abs=0.01)

    def test_tls_reference_point(self):
        t = temperature_from_occupation(0.135, OMEGA01, "tls")
        assert KB * t / (HBAR * OMEGA01) == pytest.approx(0.54, abs=0.01)

    def test_zero_temperature_is_zero_occupation(self):
        assert occupation_from_temperature(0.0, OMEGA01) == 0.0
        assert occupation_from_temperature(1e-6, OMEGA01) == pytest.approx(0.0, abs=1e-30)

    @pytest.mark.parametrize("statistics", ["bosonic", "tls"])
    def test_round_trip(self, statistics):
        rng = np.random.default_rng(3)
        for _ in range(100):
            t = rng.uniform(5e-3, 2.0)
            omega = TWO_PI * rng.uniform(1e9, 10e9)
            n = occupation_from_temperature(t, omega, statistics)
            assert temperature_from_occupation(n, omega, statistics) == pytest.approx(t, rel=1e-12)

    @pytest.mark.parametrize("statistics", ["bosonic", "tls"])
    def test_against_bisection_oracle(self, statistics):
        # independent inversion: bisect the forward map
        n_target = 0.2 if statistics == "bosonic" else 0.3
        t = brentq(lambda x: occupation_from_temperature(x, OMEGA01, statistics) - n_target, 1e-4, 10.0, xtol=1e-15)
        assert temperature_from_occupation(n_target, OMEGA01, statistics) == pytest.approx(t, rel=1e-9)

    def test_tls_saturation_rejected(self):
        with pytest.raises(ConfigError):
            temperature_from_occupation(0.5, OMEGA01, "tls")

    def test_zero_occupation_sentinel(self):
        assert temperature_from_occupation(0.0, OMEGA01) == 0.0


class TestTlsRateScaling:
    def test_zero_temperature_returns_base_rate(self):
        assert tls_rate_vs_temperature(TWO_PI * 55e3, 0.0, OMEGA01) == TWO_PI * 55e3

    def test_monotonically_decreasing(self):
        temps = np.linspace(1e-3, 1.0, 200)
        vals = [tls_rate_vs_temperature(1.0, t, OMEGA01) for t in temps]
        assert np.all(np.diff(vals) <= 0)  # saturates to 1.0 in floats below ~15 mK
        warm = np.linspace(0.02, 1.0, 100)
        assert np.all(np.diff([tls_rate_vs_temperature(1.0, t, OMEGA01) for t in warm]) < 0)

    def test_high_temperature_limit_vanishes(self):
        assert tls_rate_vs_temperature(1.0, 1e6, OMEGA01) == pytest.approx(0.0, abs=1e-6)

    def test_cooling_increase_from_reference(self):
        # anchor the rate at 131 mK and evaluate the zero-temperature-ward
        # increase at 50 mK; the printed tanh law gives just under 2 kHz
        gamma_131 = TWO_PI * 55e3
        gamma_0 = gamma_131 / math.tanh(HBAR * OMEGA01 / (KB * 0.131))
        increase = tls_rate_vs_temperature(gamma_0, 0.050, OMEGA01) - gamma_131
        assert increase / TWO_PI == pytest.approx(1.988e3, rel=1e-3)


class TestEffectiveOccupation:
    def test_reference_population(self):
        assert qubit_occupation_from_population(0.0286) == pytest.approx(0.030, abs=5e-4)

    def test_zero(self):
        assert qubit_occupation_from_population(0.0) == 0.0

    def test_inversion_rejected(self):
        with pytest.raises(ConfigError):
            qubit_occupation_from_population(0.5)

    def test_reference_temperature(self):
        n_q = qubit_occupation_from_population(0.0286)
        t_q = temperature_from_occupation(n_q, OMEGA01)
        assert t_q == pytest.approx(0.078, rel=0.06)

    def test_round_trip_against_thermal_population(self):
        # a single bath at occupation n thermalizes the qubit to n/(1+2n)
        for n in (0.01, 0.1, 0.3):
            rho11 = n / (1 + 2 * n)
            assert qubit_occupation_from_population(rho11) == pytest.approx(n, rel=1e-12)


class TestConfigValidation:
    def test_two_drives_same_transition_rejected(self):
        with pytest.raises(ConfigError):
            table1_config(drives=(DriveSpec("t01"), DriveSpec("t01", amplitude=1.0)))

    def test_t12_drive_needs_three_levels(self):
        with pytest.raises(ConfigError):
            table1_config(drives=(DriveSpec("t12", amplitude=1.0),))

    def test_negative_rate_rejected(self):
        with pytest.raises(ConfigError):
            BathSpec(label="radiative", gamma=-1.0, occupation=0.0)

    def test_three_levels_need_positive_upper_transition(self):
        with pytest.raises(ConfigError):
            TransmonSpec(omega01=TWO_PI * 100e6, anharmonicity_delta=-TWO_PI * 250e6, levels=3)

    def test_immutability(self, t1_config):
        with pytest.raises(AttributeError):
            t1_config.radiative = t1_config.nonradiative
