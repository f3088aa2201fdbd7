"""Parameter records and rate/occupation/temperature conversions.

These types are the single source of truth for a scenario: a transmon
truncated to 2 or 3 levels, one cold radiative bath (the waveguide) and one
hot nonradiative bath, optional coherent drives, and an optional
quasiparticle channel.  Everything downstream (Lindblad generator, moment
equations, closed-form observables, fitting) consumes the composite rates
produced by :func:`derive_rates`.

All quantities here are angular (rad/s); the JSON boundary uses ``*_hz``,
``*_mk`` and ``*_photons`` keys (see :mod:`qheat.scenarios`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .constants import HBAR, KB, TWO_PI

__all__ = [
    "TransmonSpec",
    "BathSpec",
    "DriveSpec",
    "QuasiparticleSpec",
    "SystemConfig",
    "DerivedRates",
    "ThreeLevelRates",
    "derive_rates",
    "occupation_from_temperature",
    "temperature_from_occupation",
    "tls_rate_vs_temperature",
    "qubit_occupation_from_population",
    "table1_config",
]


class ConfigError(ValueError):
    """Raised when a parameter record violates its invariants."""


def _check(cond: bool, msg: str) -> None:
    if not cond:
        raise ConfigError(msg)


@dataclass(frozen=True)
class TransmonSpec:
    """Level structure of the artificial atom.

    omega01 and the (negative, for a transmon) anharmonicity are angular
    frequencies; ``levels`` restricts the model to the 2- or 3-level
    truncation.  ``gamma_phi`` is the pure dephasing rate.
    """

    omega01: float
    anharmonicity_delta: float = 0.0
    levels: int = 2
    gamma_phi: float = 0.0

    def __post_init__(self) -> None:
        _check(self.omega01 > 0, "omega01 must be positive")
        _check(self.gamma_phi >= 0, "gamma_phi must be nonnegative")
        _check(self.levels in (2, 3), "levels must be 2 or 3")
        if self.levels == 3:
            _check(self.omega12 > 0, "omega12 = omega01 + anharmonicity must stay positive")

    @property
    def omega12(self) -> float:
        return self.omega01 + self.anharmonicity_delta


@dataclass(frozen=True)
class BathSpec:
    """One thermal environment: coupling rate, occupation, statistics.

    The stored primary field is the occupation (every formula consumes it);
    temperature is derived on demand through
    :func:`temperature_from_occupation`.  ``statistics`` selects the Lindblad
    weight pair: bosonic (n+1, n) or two-level-system
    ((1+n)/(1+2n), n/(1+2n)).
    """

    label: str  # "radiative" | "nonradiative"
    gamma: float
    occupation: float
    statistics: str = "bosonic"

    def __post_init__(self) -> None:
        _check(self.label in ("radiative", "nonradiative"), "bath label must be radiative or nonradiative")
        _check(self.gamma >= 0, "bath gamma must be nonnegative")
        _check(self.occupation >= 0, "bath occupation must be nonnegative")
        _check(self.statistics in ("bosonic", "tls"), "statistics must be bosonic or tls")

    def temperature(self, omega: float) -> float:
        """Bath temperature consistent with the stored occupation at omega."""
        return temperature_from_occupation(self.occupation, omega, self.statistics)

    def weights(self) -> tuple[float, float]:
        """(downward, upward) Lindblad weights for this bath's statistics."""
        n = self.occupation
        if self.statistics == "tls":
            return (1.0 + n) / (1.0 + 2.0 * n), n / (1.0 + 2.0 * n)
        return n + 1.0, n


@dataclass(frozen=True)
class DriveSpec:
    """Coherent drive on one transition.

    ``detuning`` is drive-minus-transition (omega_p - omega_ij);
    ``amplitude`` is the complex Rabi rate.  For the 1<->2 transition the
    sqrt(2) dipole enhancement is applied internally, so ``amplitude`` is
    the bare rate entering the analytic side-peak formulas.
    """

    transition: str  # "t01" | "t12"
    detuning: float = 0.0
    amplitude: complex = 0.0

    def __post_init__(self) -> None:
        _check(self.transition in ("t01", "t12"), "transition must be t01 or t12")
        _check(math.isfinite(self.detuning), "detuning must be finite")
        _check(math.isfinite(abs(complex(self.amplitude))), "amplitude must be finite")

    @property
    def is_on(self) -> bool:
        return complex(self.amplitude) != 0


@dataclass(frozen=True)
class QuasiparticleSpec:
    """Optional quasiparticle excitation/decay channel (population rates)."""

    gamma_up: float = 0.0
    gamma_down: float = 0.0
    gap_delta_g: float = 170e-6 * 1.602176634e-19
    r_n: float = 6.3e3
    capacitance: float = 78e-15

    def __post_init__(self) -> None:
        for name in ("gamma_up", "gamma_down", "gap_delta_g", "r_n", "capacitance"):
            _check(getattr(self, name) >= 0, f"{name} must be nonnegative")


@dataclass(frozen=True)
class SystemConfig:
    """Complete scenario description.

    Exactly one radiative and one nonradiative bath.  For 3-level models the
    per-transition occupations default to the bath occupations; override
    them with ``occupations_12`` = (n_r^(12), n_n^(12)) when the two
    transitions see different spectral weight.
    """

    transmon: TransmonSpec
    radiative: BathSpec
    nonradiative: BathSpec
    drives: tuple[DriveSpec, ...] = ()
    quasiparticles: QuasiparticleSpec | None = None
    occupations_12: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        _check(self.radiative.label == "radiative", "first bath must be labelled radiative")
        _check(self.nonradiative.label == "nonradiative", "second bath must be labelled nonradiative")
        _check(len(self.drives) <= 2, "at most two drives")
        seen = set()
        for d in self.drives:
            _check(d.transition not in seen, "at most one drive per transition")
            seen.add(d.transition)
        if self.occupations_12 is not None:
            _check(self.transmon.levels == 3, "occupations_12 only applies to 3-level models")
            _check(min(self.occupations_12) >= 0, "per-transition occupations must be nonnegative")
        if self.transmon.levels == 2:
            for d in self.drives:
                _check(d.transition == "t01", "a 2-level model cannot drive t12")

    def drive(self, transition: str) -> DriveSpec | None:
        for d in self.drives:
            if d.transition == transition:
                return d
        return None

    def with_drive(self, drive: DriveSpec | None) -> "SystemConfig":
        """Copy of this config with the drive on ``drive.transition`` replaced."""
        if drive is None:
            return replace(self, drives=())
        others = tuple(d for d in self.drives if d.transition != drive.transition)
        return replace(self, drives=others + (drive,))

    @property
    def n_r(self) -> float:
        return self.radiative.occupation

    @property
    def n_n(self) -> float:
        return self.nonradiative.occupation


@dataclass(frozen=True)
class ThreeLevelRates:
    """Per-transition composite rates for the 3-level model.

    The 1<->2 symbols follow the convenience convention of the closed-form
    moment equations: gamma_plus_12 = Gr*n_r^(12) + Gn*n_n^(12) etc., which
    is HALF the physical thermalization rate of that transition (the
    generator carries the doubled dissipator prefactors).  Steady states are
    unaffected; only 1<->2 transients feel the factor.
    """

    gamma_r: float
    gamma_n: float
    gamma_phi: float
    n_r_01: float
    n_n_01: float
    n_r_12: float
    n_n_12: float
    gamma_plus_01: float
    gamma_minus_01: float
    gamma_plus_12: float
    gamma_minus_12: float

    @property
    def gamma_1_01(self) -> float:
        return self.gamma_plus_01 + self.gamma_minus_01

    @property
    def gamma_1_12(self) -> float:
        return self.gamma_plus_12 + self.gamma_minus_12

    @property
    def gamma_2_01(self) -> float:
        return self.gamma_phi + 0.5 * self.gamma_1_01

    @property
    def gamma_2_t(self) -> float:
        # total 0<->1 coherence decay: thermal excitation out of |1> dephases
        return self.gamma_2_01 + self.gamma_plus_12

    @property
    def gamma_2_02(self) -> float:
        return self.gamma_phi + 0.5 * self.gamma_plus_01 + self.gamma_minus_12

    @property
    def delta_n_01(self) -> float:
        return self.n_n_01 - self.n_r_01


@dataclass(frozen=True)
class DerivedRates:
    """Composite rates shared by every observable.

    gamma_plus drives upward transitions, gamma_minus downward ones;
    gamma_1 = gamma_plus + gamma_minus is the total relaxation rate and
    gamma_2 = gamma_phi + gamma_1/2 the coherence decay.  ``three_level``
    is populated only for 3-level configs.
    """

    gamma_r: float
    gamma_n: float
    gamma_phi: float
    n_r: float
    n_n: float
    gamma_plus: float
    gamma_minus: float
    gamma_1: float
    gamma_2: float
    three_level: ThreeLevelRates | None = None

    @property
    def delta_n(self) -> float:
        return self.n_n - self.n_r

    @property
    def thermal_population(self) -> float:
        """Undriven excited-state population gamma_plus/gamma_1."""
        return self.gamma_plus / self.gamma_1


def derive_rates(config: SystemConfig) -> DerivedRates:
    """All composite rates of a config, honoring each bath's statistics."""
    wr_down, wr_up = config.radiative.weights()
    wn_down, wn_up = config.nonradiative.weights()
    gr, gn = config.radiative.gamma, config.nonradiative.gamma
    gamma_plus = gr * wr_up + gn * wn_up
    gamma_minus = gr * wr_down + gn * wn_down
    gamma_1 = gamma_plus + gamma_minus
    gamma_phi = config.transmon.gamma_phi
    gamma_2 = gamma_phi + 0.5 * gamma_1

    three = None
    if config.transmon.levels == 3:
        if config.occupations_12 is not None:
            n_r_12, n_n_12 = config.occupations_12
        else:
            n_r_12, n_n_12 = config.n_r, config.n_n
        rad12 = replace(config.radiative, occupation=n_r_12)
        non12 = replace(config.nonradiative, occupation=n_n_12)
        w12r_down, w12r_up = rad12.weights()
        w12n_down, w12n_up = non12.weights()
        three = ThreeLevelRates(
            gamma_r=gr,
            gamma_n=gn,
            gamma_phi=gamma_phi,
            n_r_01=config.n_r,
            n_n_01=config.n_n,
            n_r_12=n_r_12,
            n_n_12=n_n_12,
            gamma_plus_01=gamma_plus,
            gamma_minus_01=gamma_minus,
            gamma_plus_12=gr * w12r_up + gn * w12n_up,
            gamma_minus_12=gr * w12r_down + gn * w12n_down,
        )

    return DerivedRates(
        gamma_r=gr,
        gamma_n=gn,
        gamma_phi=gamma_phi,
        n_r=config.n_r,
        n_n=config.n_n,
        gamma_plus=gamma_plus,
        gamma_minus=gamma_minus,
        gamma_1=gamma_1,
        gamma_2=gamma_2,
        three_level=three,
    )



def occupation_from_temperature(temperature: float, omega: float, statistics: str = "bosonic") -> float:
    """Thermal occupation at ``omega`` for a bath at ``temperature``.

    Bosonic: n = 1/(exp(hbar*omega/kT) - 1).  TLS: n = 1/(exp(hbar*omega/kT) + 1),
    the exact inverse of the TLS temperature mapping.  T = 0 maps to n = 0.
    """
    _check(omega > 0, "omega must be positive")
    _check(temperature >= 0, "temperature must be nonnegative")
    if temperature == 0.0:
        return 0.0
    x = HBAR * omega / (KB * temperature)
    if x > 700.0:
        return 0.0
    if statistics == "tls":
        return 1.0 / (math.exp(x) + 1.0)
    if statistics == "bosonic":
        return 1.0 / math.expm1(x)
    raise ConfigError("statistics must be bosonic or tls")


def temperature_from_occupation(occupation: float, omega: float, statistics: str = "bosonic") -> float:
    """Temperature whose thermal occupation at ``omega`` equals ``occupation``.

    Bosonic: kT = hbar*omega / ln(1 + 1/n).  TLS: kT = hbar*omega / ln((1-n)/n),
    defined only for n < 1/2 (a hotter TLS bath saturates at n = 1/2).
    n = 0 maps to the 0 K sentinel.
    """
    _check(omega > 0, "omega must be positive")
    _check(occupation >= 0, "occupation must be nonnegative")
    if occupation == 0.0:
        return 0.0
    if statistics == "tls":
        if occupation >= 0.5:
            raise ConfigError("TLS occupation must be below 1/2 for a positive temperature")
        return HBAR * omega / (KB * math.log((1.0 - occupation) / occupation))
    if statistics == "bosonic":
        return HBAR * omega / (KB * math.log1p(1.0 / occupation))
    raise ConfigError("statistics must be bosonic or tls")


def tls_rate_vs_temperature(gamma_zero: float, temperature: float, omega: float) -> float:
    """TLS-bath coupling rate at temperature T: gamma_0 * tanh(hbar*omega/kB*T).

    Monotonically decreasing in T (the TLS ensemble saturates); T = 0 returns
    gamma_0 and T -> infinity returns 0.
    """
    _check(temperature >= 0, "temperature must be nonnegative")
    _check(omega > 0, "omega must be positive")
    if temperature == 0.0:
        return gamma_zero
    return gamma_zero * math.tanh(HBAR * omega / (KB * temperature))


def qubit_occupation_from_population(rho11: float) -> float:
    """Effective bath occupation n_q reproducing an excited-state population.

    Inverts rho11 = n_q/(1 + 2 n_q); population inversion (rho11 >= 1/2) has
    no thermal-occupation equivalent and is rejected.
    """
    _check(0.0 <= rho11 < 0.5, "population must lie in [0, 1/2) for a thermal reading")
    return rho11 / (1.0 - 2.0 * rho11)


def table1_config(
    levels: int = 2,
    gamma_r_hz: float = 227e3,
    gamma_n_hz: float = 55e3,
    n_r: float = 0.004,
    n_n: float = 0.139,
    omega01_hz: float = 5.5e9,
    anharmonicity_hz: float = -250e6,
    gamma_phi: float = 0.0,
    drives: tuple[DriveSpec, ...] = (),
) -> SystemConfig:
    """Reference parameter set used throughout the tests and examples."""
    return SystemConfig(
        transmon=TransmonSpec(
            omega01=TWO_PI * omega01_hz,
            anharmonicity_delta=TWO_PI * anharmonicity_hz,
            levels=levels,
            gamma_phi=gamma_phi,
        ),
        radiative=BathSpec(label="radiative", gamma=TWO_PI * gamma_r_hz, occupation=n_r),
        nonradiative=BathSpec(label="nonradiative", gamma=TWO_PI * gamma_n_hz, occupation=n_n),
        drives=drives,
    )
