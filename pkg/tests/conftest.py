"""Shared fixtures: the reference parameter set and rate records."""

import numpy as np
import pytest
from dataclasses import replace

from qheat.constants import TWO_PI
from qheat.model import BathSpec, SystemConfig, TransmonSpec, derive_rates, table1_config

OMEGA01 = TWO_PI * 5.5e9


@pytest.fixture(scope="session")
def t1_config():
    return table1_config()


@pytest.fixture(scope="session")
def t1_config_3l():
    return table1_config(levels=3)


@pytest.fixture(scope="session")
def rates(t1_config):
    return derive_rates(t1_config)


@pytest.fixture(scope="session")
def rates3(t1_config_3l):
    return derive_rates(t1_config_3l).three_level


@pytest.fixture(scope="session")
def fit_rates(rates):
    """Reference rates with the separately measured coherence width.

    The measured width (143 kHz) sits slightly below gamma_1/2 from the
    occupations (149.6 kHz); synthetic datasets mirror the measured tuple.
    """
    return replace(rates, gamma_2=TWO_PI * 143e3)


def random_config(rng: np.random.Generator, levels: int = 2, with_dephasing: bool = True) -> SystemConfig:
    """Physically sensible random parameter draw for property tests."""
    gamma_phi = TWO_PI * rng.uniform(0.0, 200e3) if with_dephasing else 0.0
    return SystemConfig(
        transmon=TransmonSpec(
            omega01=TWO_PI * rng.uniform(3e9, 8e9),
            anharmonicity_delta=-TWO_PI * 250e6,
            levels=levels,
            gamma_phi=gamma_phi,
        ),
        radiative=BathSpec(label="radiative", gamma=TWO_PI * rng.uniform(10e3, 1e6), occupation=rng.uniform(0.0, 0.5)),
        nonradiative=BathSpec(label="nonradiative", gamma=TWO_PI * rng.uniform(10e3, 1e6), occupation=rng.uniform(0.0, 0.5)),
    )
