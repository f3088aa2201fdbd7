"""Two-channel qubit noise spectrometer: estimators and sweep simulation.

A qubit couples symmetrically to a probe channel (carrying the unknown
noise, occupation n_th) and a detection channel (occupation n_r), each with
rate gamma_r and a negligible residual nonradiative rate.  Rates use the
idealized matched-coupling convention gamma_1 = 2*gamma_r and
gamma_2 = gamma_r + gamma_phi -- the convention under which the
on-resonance reflection equals n_th + n_r exactly.  Occupation-corrected
or asymmetric couplings break that identity; they are outside this model.

Both occupation-difference estimators are invariant under a common gain
rescaling of their inputs and under pure-dephasing changes, so no system
gain calibration is needed.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .constants import HBAR, TWO_PI
from .model import ConfigError, DerivedRates
from .spectra import Spectrum, integrate_spectrum

__all__ = [
    "SpectrometerConfig",
    "PointwiseEstimate",
    "spectrometer_thermal_psd",
    "spectrometer_drive_psd",
    "estimate_delta_n_pointwise",
    "estimate_delta_n_integrated",
    "split_occupations",
    "sweep_spectrometer",
]

NARROWBAND_FLATNESS_THRESHOLD = 0.10


@dataclass(frozen=True)
class SpectrometerConfig:
    """Matched two-channel spectrometer parameters (all rates rad/s)."""

    gamma_r: float
    gamma_n: float
    n_th: float
    n_r: float
    omega01: float
    gamma_phi: float = 0.0

    def __post_init__(self) -> None:
        if self.gamma_r <= 0 or self.gamma_n < 0 or self.omega01 <= 0 or self.gamma_phi < 0:
            raise ConfigError("rates must be positive (gamma_n, gamma_phi nonnegative)")
        if min(self.n_th, self.n_r) < 0:
            raise ConfigError("occupations must be nonnegative")
        if self.gamma_n > 0:
            ratio = self.gamma_r / self.gamma_n
            if ratio < 10:
                raise ConfigError("spectrometer requires gamma_r >> gamma_n (ratio >= 10)")
            if ratio < 100:
                warnings.warn("gamma_r/gamma_n below 100: residual bath not fully negligible", stacklevel=2)

    @property
    def gamma_1(self) -> float:
        return 2.0 * self.gamma_r

    @property
    def gamma_2(self) -> float:
        return self.gamma_r + self.gamma_phi

    @property
    def delta_n(self) -> float:
        return self.n_th - self.n_r

    def to_rates(self) -> DerivedRates:
        """Idealized composite-rate record (probe channel in the hot-bath slot)."""
        gamma_plus = self.gamma_r * (self.n_th + self.n_r)
        return DerivedRates(
            gamma_r=self.gamma_r,
            gamma_n=self.gamma_r,
            gamma_phi=self.gamma_phi,
            n_r=self.n_r,
            n_n=self.n_th,
            gamma_plus=gamma_plus,
            gamma_minus=self.gamma_1 - gamma_plus,
            gamma_1=self.gamma_1,
            gamma_2=self.gamma_2,
        )


def spectrometer_thermal_psd(omega_grid, cfg: SpectrometerConfig, raw: bool = False) -> Spectrum:
    """Detected noise line: Lorentzian of half-width gamma_2 whose peak is
    proportional to the channel occupation difference."""
    omega = np.asarray(omega_grid, dtype=float)
    g2 = cfg.gamma_2
    values = HBAR * cfg.omega01 * cfg.gamma_r * g2 * cfg.delta_n / ((omega - cfg.omega01) ** 2 + g2**2)
    if raw:
        values = values / TWO_PI
    return Spectrum(freqs=omega / TWO_PI, values=values, meta={"kind": "spectrometer_thermal"})


def spectrometer_drive_psd(omega_grid, cfg: SpectrometerConfig, raw: bool = False) -> Spectrum:
    """Strong-drive center peak used as the reference line (same width)."""
    from .observables import mollow_center_psd

    return mollow_center_psd(omega_grid, cfg.to_rates(), cfg.omega01, raw=raw)


@dataclass(frozen=True)
class PointwiseEstimate:
    """Per-frequency occupation-difference estimate with a shape diagnostic.

    ``flatness`` is the relative spread of the ratio across the upper half
    of the reference line; a non-flat ratio flags noise whose bandwidth is
    smaller than the qubit linewidth.
    """

    values: np.ndarray
    center_value: float
    flatness: float

    @property
    def narrowband(self) -> bool:
        return self.flatness > NARROWBAND_FLATNESS_THRESHOLD


def estimate_delta_n_pointwise(s_th: Spectrum, s_on: Spectrum) -> PointwiseEstimate:
    """Occupation difference as the pointwise ratio s_th/(2 s_on).

    Requires matched grids; bins where the reference line falls below 1e-3
    of its peak are masked (NaN).  For broadband noise the ratio is flat
    across the line and the center value is the estimate.
    """
    if not np.array_equal(s_th.freqs, s_on.freqs):
        raise ValueError("spectra must share one frequency grid")
    peak = float(np.max(s_on.values))
    if peak <= 0:
        raise ValueError("reference spectrum must be positive")
    guarded = s_on.values < 1e-3 * peak
    ratio = np.full_like(s_th.values, np.nan)
    np.divide(s_th.values, 2.0 * s_on.values, out=ratio, where=~guarded)

    half = s_on.values >= 0.5 * peak
    center_idx = int(np.argmax(s_on.values))
    center_value = float(ratio[center_idx])
    band = ratio[half & ~guarded]
    scale = max(abs(center_value), 1e-30)
    flatness = float((np.nanmax(band) - np.nanmin(band)) / scale) if band.size else np.inf
    return PointwiseEstimate(values=ratio, center_value=center_value, flatness=flatness)


def estimate_delta_n_integrated(p_th: float, p_on: float) -> float:
    """Occupation difference from integrated powers: p_th/(2 p_on).

    Gain-free: a common multiplicative calibration cancels in the ratio.
    """
    if p_on <= 0:
        raise ValueError("reference power must be positive")
    return p_th / (2.0 * p_on)


def split_occupations(delta_n: float, r_on_resonance: float) -> tuple[float, float]:
    """Solve {n_th + n_r = r, n_th - n_r = delta_n} for the two channels.

    Valid in the matched-coupling, weak-dephasing regime where the
    on-resonance reflection equals the occupation sum.  Negative solutions
    signal inconsistent inputs and are rejected.
    """
    n_th = 0.5 * (r_on_resonance + delta_n)
    n_r = 0.5 * (r_on_resonance - delta_n)
    if n_th < 0 or n_r < 0:
        raise ValueError(f"inconsistent inputs: negative occupation ({n_th:.4g}, {n_r:.4g})")
    return n_th, n_r


def _lorentzian_average(profile, center: float, width: float, span_widths: float = 20.0, points: int = 801) -> float:
    """Profile averaged over the qubit's Lorentzian susceptibility."""
    x = np.linspace(-span_widths * width, span_widths * width, points)
    weights = width / (x**2 + width**2)
    vals = np.asarray([profile(center + xi) for xi in x], dtype=float)
    return float(np.trapezoid(weights * vals, x) / np.trapezoid(weights, x))


def sweep_spectrometer(
    cfg: SpectrometerConfig,
    omega01_grid,
    noise_profile,
    noise_rms: float = 0.0,
    seed: int | None = None,
    span_widths: float = 10.0,
    points_per_width: float = 10.0,
) -> np.ndarray:
    """Reconstruct n_th(omega) - n_r by sweeping the qubit frequency.

    At each qubit frequency the probe occupation seen by the qubit is the
    noise profile averaged over its Lorentzian susceptibility (which is what
    limits resolution to ~gamma_r); the spectrum pair is synthesized from
    that effective occupation (optionally with multiplicative Gaussian noise
    of relative size ``noise_rms``) and the pointwise estimator is read at
    line center.
    """
    from dataclasses import replace

    rng = np.random.default_rng(seed)
    grid = np.asarray(omega01_grid, dtype=float)
    out = np.empty(len(grid))
    for i, om in enumerate(grid):
        n_eff = _lorentzian_average(noise_profile, float(om), cfg.gamma_2)
        local = replace(cfg, omega01=float(om), n_th=n_eff)
        step = local.gamma_2 / points_per_width
        n = int(np.ceil(span_widths * local.gamma_2 / step))
        omegas = om + step * np.arange(-n, n + 1)
        s_th = spectrometer_thermal_psd(omegas, local)
        s_on = spectrometer_drive_psd(omegas, local)
        if noise_rms > 0:
            s_th = Spectrum(s_th.freqs, s_th.values * (1.0 + noise_rms * rng.standard_normal(len(omegas))), s_th.meta)
            s_on = Spectrum(s_on.freqs, np.abs(s_on.values * (1.0 + noise_rms * rng.standard_normal(len(omegas)))), s_on.meta)
        est = estimate_delta_n_pointwise(s_th, s_on)
        out[i] = est.center_value
    return out
