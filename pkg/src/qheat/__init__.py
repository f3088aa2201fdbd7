"""Two-bath waveguide-QED toolkit.

Simulates a driven 2- or 3-level artificial atom coupled to a cold
waveguide and a hot nonradiative environment: closed-form observables
(reflection, emission spectra, heat/work/power flows, quasiparticle rates,
noise-spectrometer estimators), a dense Lindblad + quantum-regression
numerical oracle validating them, and a measurement pipeline (Welch PSD
estimation, lineshape fits, parameter reconciliation).
"""

__version__ = "0.1.0"

from .model import (
    BathSpec,
    DerivedRates,
    DriveSpec,
    QuasiparticleSpec,
    SystemConfig,
    ThreeLevelRates,
    TransmonSpec,
    derive_rates,
    occupation_from_temperature,
    qubit_occupation_from_population,
    table1_config,
    temperature_from_occupation,
    tls_rate_vs_temperature,
)
from .spectra import CorrelationTrace, Spectrum, integrate_spectrum

__all__ = [
    "__version__",
    "BathSpec",
    "CorrelationTrace",
    "DerivedRates",
    "DriveSpec",
    "QuasiparticleSpec",
    "Spectrum",
    "SystemConfig",
    "ThreeLevelRates",
    "TransmonSpec",
    "derive_rates",
    "integrate_spectrum",
    "occupation_from_temperature",
    "qubit_occupation_from_population",
    "table1_config",
    "temperature_from_occupation",
    "tls_rate_vs_temperature",
]
