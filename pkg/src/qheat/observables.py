"""Closed-form observables of the two-bath emitter.

Each function evaluates a printed closed form directly from composite
rates; all of them are cross-validated against the Lindblad engine in the
test suite (exact identities to 1e-9 relative, strong-drive asymptotics to
1% in their validity regime).

Validity-regime preconditions (weak probe, strong drive) are caller
metadata: the formulas stay evaluable everywhere so regime breakdown can
be plotted, and the tests enforce the regimes.

The work rate carries an explicit hbar*omega01 energy-scale factor
(W = hbar*omega01 * Re[i conj(Omega) <sm>]): that is the only reading with
watt units, consistent with the measured few-aW saturation scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .constants import HBAR, KB, TWO_PI
from .model import DerivedRates, QuasiparticleSpec, ThreeLevelRates
from .spectra import Spectrum, integrate_spectrum

__all__ = [
    "PowerBudget",
    "QpRates",
    "steady_moments_closed_form",
    "reflection_coefficient",
    "thermal_psd",
    "mollow_center_psd",
    "power_loss",
    "work_rate",
    "heat_rates",
    "integrated_thermal_power",
    "integrated_thermal_power_quadrature",
    "reflection_three_level",
    "mollow_center_psd_three_level",
    "thermal_psd_three_level",
    "autler_sidepeak_psd",
    "qp_power_loss",
    "qp_excited_population",
    "qp_density_ratio",
    "qp_decay_rate",
    "qp_thermal_rate",
]


@dataclass(frozen=True)
class PowerBudget:
    """Steady-state energy flows (W): positive = into the emitter."""

    p_loss: float
    w_dot: float
    q_dot_r: float
    q_dot_n: float
    u_dot: float


class QpRates(NamedTuple):
    gamma_down: float
    gamma_up: float
    gamma_qp: float


def steady_moments_closed_form(delta: float, omega_rabi: complex, rates: DerivedRates) -> dict[str, complex]:
    """Stationary <sm>, <sp>, <sp sm>, <sm sp> of the driven 2-level model."""
    g1, g2 = rates.gamma_1, rates.gamma_2
    gp, gm = rates.gamma_plus, rates.gamma_minus
    om = complex(omega_rabi)
    den = 2.0 * abs(om) ** 2 * g2 + 2.0 * (delta**2 + g2**2) * g1
    sm = om * (g1 - 2.0 * gp) * (delta - 1j * g2) / den
    sp_sm = (abs(om) ** 2 * g2 + 2.0 * gp * (delta**2 + g2**2)) / den
    sm_sp = (abs(om) ** 2 * g2 + 2.0 * gm * (delta**2 + g2**2)) / den
    return {"sm": sm, "sp": np.conj(sm), "sp_sm": complex(sp_sm), "sm_sp": complex(sm_sp)}


def reflection_coefficient(delta, rates: DerivedRates):
    """Weak-probe reflection 1 - i*gamma_r*(1 - 2*G+/G1)/(delta + i*gamma_2).

    The formula itself is drive-independent; callers assert the weak-probe
    regime.  Vectorized over ``delta``.
    """
    if rates.gamma_2 == 0.0 and np.any(np.asarray(delta) == 0.0):
        raise ZeroDivisionError("reflection pole: gamma_2 = 0 on resonance")
    d = np.asarray(delta, dtype=float)
    r = 1.0 - 1j * rates.gamma_r * (1.0 - 2.0 * rates.gamma_plus / rates.gamma_1) / (d + 1j * rates.gamma_2)
    return r if r.ndim else complex(r)


def _lorentzian_spectrum(omega_grid, omega01: float, width: float, peak_display: float, raw: bool, meta: dict) -> Spectrum:
    omega = np.asarray(omega_grid, dtype=float)
    values = peak_display * width**2 / ((omega - omega01) ** 2 + width**2)
    if raw:
        values = values / TWO_PI
    return Spectrum(freqs=omega / TWO_PI, values=values, meta=meta)


def thermal_psd(omega_grid, rates: DerivedRates, omega01: float, raw: bool = False) -> Spectrum:
    """Undriven emission line: a Lorentzian of half-width gamma_2 whose
    weight is set by the occupation imbalance (zero when n_n = n_r)."""
    peak = HBAR * omega01 * rates.gamma_r * 2.0 * rates.gamma_n * rates.delta_n / (rates.gamma_1 * rates.gamma_2)
    return _lorentzian_spectrum(omega_grid, omega01, rates.gamma_2, peak, raw, {"kind": "thermal"})


def mollow_center_psd(omega_grid, rates: DerivedRates, omega01: float, raw: bool = False) -> Spectrum:
    """Center peak of the strongly driven emission spectrum (saturated line,
    height independent of the occupation imbalance)."""
    peak = HBAR * omega01 * rates.gamma_r / (2.0 * rates.gamma_2)
    return _lorentzian_spectrum(omega_grid, omega01, rates.gamma_2, peak, raw, {"kind": "mollow_center"})


def power_loss(omega_rabi, rates: DerivedRates, omega01: float, gamma_1: float | None = None):
    """Net power removed from the waveguide vs on-resonance drive amplitude.

    Negative at weak drive when the hot bath dominates; crosses zero at
    Omega^2 = 2*gamma_2*gamma_r*delta_n and saturates at
    hbar*omega01*gamma_n/2.  Vectorized over ``omega_rabi``.
    """
    g1 = rates.gamma_1 if gamma_1 is None else gamma_1
    om2 = np.abs(np.asarray(omega_rabi, dtype=complex)) ** 2
    val = (
        HBAR
        * omega01
        * (rates.gamma_n / 2.0)
        * (om2 - 2.0 * rates.gamma_2 * rates.gamma_r * rates.delta_n)
        / (om2 + rates.gamma_2 * g1)
    )
    return val if val.ndim else float(val)


def work_rate(omega_rabi: complex, delta: float, rates: DerivedRates, omega01: float) -> float:
    """Drive power absorbed by the emitter: hbar*omega01*Re[i conj(Om) <sm>]."""
    sm = steady_moments_closed_form(delta, omega_rabi, rates)["sm"]
    return HBAR * omega01 * float(np.real(1j * np.conj(complex(omega_rabi)) * sm))


def heat_rates(omega_rabi: complex, delta: float, rates: DerivedRates, omega01: float) -> PowerBudget:
    """Steady-state heat flows from both baths plus work and loss.

    Q_i = hbar*omega01*(G_i n_i <sm sp> - G_i (n_i+1) <sp sm>); the loss is
    Q_r + W (what leaves the waveguide must heat it or come back as work)
    and the first-law residual u_dot = Q_r + Q_n + W vanishes in steady
    state.
    """
    m = steady_moments_closed_form(delta, omega_rabi, rates)
    sp_sm, sm_sp = m["sp_sm"].real, m["sm_sp"].real
    e = HBAR * omega01
    q_r = e * rates.gamma_r * (rates.n_r * sm_sp - (rates.n_r + 1.0) * sp_sm)
    q_n = e * rates.gamma_n * (rates.n_n * sm_sp - (rates.n_n + 1.0) * sp_sm)
    w = work_rate(omega_rabi, delta, rates, omega01)
    return PowerBudget(p_loss=q_r + w, w_dot=w, q_dot_r=q_r, q_dot_n=q_n, u_dot=q_r + q_n + w)


def integrated_thermal_power(rates: DerivedRates, omega01: float) -> float:
    """Exact Lorentzian integral of the undriven emission line (W)."""
    return HBAR * omega01 * rates.gamma_r * rates.gamma_n * rates.delta_n / rates.gamma_1


def integrated_thermal_power_quadrature(rates: DerivedRates, omega01: float, span_widths: float = 40.0, points_per_width: float = 40.0) -> float:
    """Numerical quadrature of the undriven line, for cross-checking the
    analytic integral (wing-corrected trapezoid on a +-span grid)."""
    from .spectra import default_omega_grid

    grid = default_omega_grid(omega01, rates.gamma_2, span_widths, points_per_width)
    return integrate_spectrum(thermal_psd(grid, rates, omega01), wings=True)


# --- three-level closed forms -------------------------------------------------


def _gcal(t: ThreeLevelRates) -> float:
    return t.gamma_minus_12 * t.gamma_1_01 / (t.gamma_plus_01 * t.gamma_plus_12 + t.gamma_minus_12 * t.gamma_1_01)


def reflection_three_level(delta, rates3: ThreeLevelRates):
    """Weak-probe reflection including thermal occupation of the upper level.

    Reduces to the 2-level formula when the 1<->2 thermal rates vanish; the
    correction factor stays within ~1e-3 of unity at the reference rates.
    Vectorized over ``delta``.
    """
    t = rates3
    g2t = t.gamma_2_t
    if g2t == 0.0 and np.any(np.asarray(delta) == 0.0):
        raise ZeroDivisionError("reflection pole: zero linewidth on resonance")
    d = np.asarray(delta, dtype=float)
    r = 1.0 - 1j * t.gamma_r * (1.0 - 2.0 * t.gamma_plus_01 / t.gamma_1_01) * _gcal(t) / (d + 1j * g2t)
    return r if r.ndim else complex(r)


def mollow_center_psd_three_level(omega_grid, rates3: ThreeLevelRates, omega01: float, raw: bool = False) -> Spectrum:
    """Strong-drive center peak with the thermal-upper-level broadening
    (half-width gamma_2_t) and occupation factor F <= 1/2."""
    t = rates3
    fcal = t.gamma_minus_12 / (2.0 * t.gamma_minus_12 + t.gamma_plus_12)
    peak = HBAR * omega01 * t.gamma_r * fcal / t.gamma_2_t
    return _lorentzian_spectrum(omega_grid, omega01, t.gamma_2_t, peak, raw, {"kind": "mollow_center_3l", "fcal": fcal})


def thermal_psd_three_level(omega_grid, rates3: ThreeLevelRates, omega01: float, raw: bool = False) -> Spectrum:
    """Undriven emission line of the 3-level model (half-width gamma_2_t)."""
    t = rates3
    ycal = t.gamma_minus_12 / (t.gamma_minus_12 * t.gamma_1_01 + t.gamma_plus_12 * t.gamma_plus_01)
    peak = HBAR * omega01 * t.gamma_r * 2.0 * t.gamma_n * t.delta_n_01 * ycal / t.gamma_2_t
    return _lorentzian_spectrum(omega_grid, omega01, t.gamma_2_t, peak, raw, {"kind": "thermal_3l", "ycal": ycal})


def autler_sidepeak_psd(omega_grid, rates3: ThreeLevelRates, omega2_rabi: float, omega01: float, raw: bool = False) -> Spectrum:
    """Dressed-state side peaks under a strong 1<->2 drive.

    Two Lorentzians at omega01 -+ omega2/sqrt(2) (separation sqrt(2)*omega2)
    with half-width (gamma_2_t + gamma_2_02)/2.  The weight factor is kept
    in its unsimplified form: at equal per-transition occupations it equals
    gamma_n*delta_n, which conserves the undriven thermal flux across the
    doublet and matches the numerical generator.
    """
    t = rates3
    omega = np.asarray(omega_grid, dtype=float)
    gs = t.gamma_2_t + t.gamma_2_02
    weight = t.gamma_plus_01 + t.n_r_01 * (t.gamma_1_01 - 2.0 * t.gamma_minus_12)
    den_pop = 2.0 * (t.gamma_minus_12 + t.gamma_plus_01) - t.gamma_minus_01
    d = omega - omega01
    shift = omega2_rabi / math.sqrt(2.0)
    values = np.zeros_like(d)
    for sign in (+1.0, -1.0):
        values += HBAR * omega01 * t.gamma_r * 2.0 * gs * weight / ((4.0 * (d + sign * shift) ** 2 + gs**2) * den_pop)
    if raw:
        values = values / TWO_PI
    return Spectrum(freqs=omega / TWO_PI, values=values, meta={"kind": "autler_sidepeaks", "separation_rad": math.sqrt(2.0) * omega2_rabi})


# --- quasiparticle channel ----------------------------------------------------


def qp_power_loss(rates: DerivedRates, qp: QuasiparticleSpec, omega01: float) -> float:
    """Undriven power loss with both the hot bath and quasiparticles active."""
    num = rates.gamma_r * rates.gamma_n * (rates.n_r - rates.n_n) - rates.gamma_r * (
        (rates.n_r + 1.0) * qp.gamma_up - rates.n_r * qp.gamma_down
    )
    return HBAR * omega01 * num / (rates.gamma_1 + qp.gamma_up + qp.gamma_down)


def qp_excited_population(n_ratio: float, gap: float, omega01: float) -> float:
    """Excited-state population from a normalized quasiparticle density."""
    return 2.17 * n_ratio * (gap / (HBAR * omega01)) ** 3.65


def qp_density_ratio(rho11_qp: float, gap: float, omega01: float) -> float:
    """Inverse of :func:`qp_excited_population`."""
    return rho11_qp / (2.17 * (gap / (HBAR * omega01)) ** 3.65)


def qp_decay_rate(rho11_qp: float, r_n: float, capacitance: float, gap: float, omega01: float) -> QpRates:
    """Quasiparticle decay/excitation rates consistent with a population.

    gamma_down = sqrt(2)/(2.17 R_N C) * (gap/hbar*omega01)^(-2.15) * rho11;
    gamma_up = rho11 * gamma_down; gamma_qp is their difference (the net
    nonradiative decay the quasiparticles would add).
    """
    gamma_down = math.sqrt(2.0) / (2.17 * r_n * capacitance) * (gap / (HBAR * omega01)) ** (-2.15) * rho11_qp
    gamma_up = rho11_qp * gamma_down
    return QpRates(gamma_down=gamma_down, gamma_up=gamma_up, gamma_qp=gamma_down - gamma_up)


def qp_thermal_rate(temperature: float, gap: float, omega01: float) -> tuple[float, float]:
    """(x_qp, gamma_qp): thermal-equilibrium quasiparticle density and the
    induced decay rate gamma_qp = (omega01/pi) sqrt(2 gap/hbar omega01) x_qp."""
    if temperature <= 0:
        return 0.0, 0.0
    kt = KB * temperature
    x_qp = math.sqrt(2.0 * math.pi * gap * kt) / gap * math.exp(-gap / kt)
    gamma_qp = omega01 / math.pi * math.sqrt(2.0 * gap / (HBAR * omega01)) * x_qp
    return x_qp, gamma_qp
