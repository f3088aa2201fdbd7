"""Measurement pipeline: Welch PSD estimation, surrogate records,
background subtraction, lineshape fits, and parameter reconciliation.

Fits are damped least squares (scipy's Levenberg-Marquardt-style
``least_squares``) with uniform weights, max/half-max initial guesses, and
1-sigma uncertainties from the Jacobian covariance scaled by the residual
RMS.  The system gain is an externally supplied scalar (W per squared
sample unit); it is never re-derived here.
"""

from __future__ import annotations

import io
import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.signal
from scipy.optimize import least_squares

from .constants import HBAR, TWO_PI
from .model import DerivedRates, qubit_occupation_from_population, temperature_from_occupation
from .spectra import Spectrum

__all__ = [
    "TimeSeries",
    "FitResult",
    "Table1Record",
    "welch_psd",
    "surrogate_timeseries",
    "subtract_background",
    "fit_lorentzian",
    "fit_thermal",
    "fit_mollow",
    "fit_power_loss",
    "fit_reflection",
    "reconcile_table1",
]

MAX_FIT_ITERATIONS = 200


@dataclass(frozen=True)
class TimeSeries:
    """Sampled voltage record; ``gain`` converts squared units to watts."""

    sample_rate: float
    samples: np.ndarray
    gain: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "samples", np.asarray(self.samples, dtype=float))
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be positive")
        if self.samples.ndim != 1:
            raise ValueError("samples must be 1-D")

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("t_s,volts\n")
        dt = 1.0 / self.sample_rate
        for i, v in enumerate(self.samples):
            buf.write(f"{i * dt:.9e},{v:.9e}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, gain: float = 1.0) -> "TimeSeries":
        rows = np.loadtxt(io.StringIO(text), delimiter=",", skiprows=1, ndmin=2)
        if len(rows) < 2:
            raise ValueError("time series needs at least two samples")
        dt = float(np.median(np.diff(rows[:, 0])))
        return cls(sample_rate=1.0 / dt, samples=rows[:, 1], gain=gain)

    def to_raw(self) -> tuple[bytes, str]:
        """(little-endian float64 stream, JSON sidecar)."""
        sidecar = json.dumps({"sample_rate_hz": self.sample_rate, "gain": self.gain})
        return self.samples.astype("<f8").tobytes(), sidecar

    @classmethod
    def from_raw(cls, blob: bytes, sidecar: str) -> "TimeSeries":
        meta = json.loads(sidecar)
        return cls(
            sample_rate=float(meta["sample_rate_hz"]),
            samples=np.frombuffer(blob, dtype="<f8"),
            gain=float(meta.get("gain", 1.0)),
        )


def default_segment_length(n_samples: int, sample_rate: float, linewidth_hz: float | None) -> int:
    """Power-of-two segment giving >=20 bins per linewidth, capped at n/8."""
    cap = max(16, n_samples // 8)
    if linewidth_hz is None or linewidth_hz <= 0:
        return min(1024, cap)
    want = 2 ** math.ceil(math.log2(20.0 * sample_rate / linewidth_hz))
    return min(want, cap)


def welch_psd(
    ts: TimeSeries,
    segment_len: int | None = None,
    overlap_fraction: float = 0.5,
    window: str = "hann",
    linewidth_hint_hz: float | None = None,
) -> Spectrum:
    """Averaged-periodogram one-sided PSD of a voltage record, in W/Hz.

    Normalization: white noise of variance v yields a flat density
    v*gain/(sample_rate/2) across the band, and the band integral matches
    variance*gain (Parseval) up to windowing bias.
    """
    n = len(ts.samples)
    if segment_len is None:
        segment_len = default_segment_length(n, ts.sample_rate, linewidth_hint_hz)
    if not 0 <= overlap_fraction < 1:
        raise ValueError("overlap_fraction must lie in [0, 1)")
    if n < 2 * segment_len:
        raise ValueError("record must be at least twice the segment length")
    if window not in ("hann", "hamming", "blackman", "boxcar"):
        raise ValueError("unsupported window")
    freqs, psd = scipy.signal.welch(
        ts.samples,
        fs=ts.sample_rate,
        window=window,
        nperseg=segment_len,
        noverlap=int(overlap_fraction * segment_len),
        detrend=False,
        scaling="density",
    )
    return Spectrum(freqs=freqs, values=ts.gain * psd, meta={"window": window, "nperseg": segment_len})


def surrogate_timeseries(
    rates: DerivedRates,
    omega01: float,
    duration: float,
    sample_rate: float,
    seed: int,
    center_fraction: float = 0.25,
) -> TimeSeries:
    """Stationary Gaussian record whose PSD is the baseband image of the
    undriven emission line.

    Exact discrete complex Ornstein-Uhlenbeck synthesis: pole at
    exp((i*omega_b - gamma_2)*dt) with omega_b = 2*pi*center_fraction*fs,
    stationary variance pinned to the analytic integrated power
    hbar*omega01*gamma_r*gamma_n*delta_n/gamma_1 (so band-limited sampling
    folds the Lorentzian tails in-band instead of losing them).
    Deterministic per seed.
    """
    from .observables import integrated_thermal_power

    if sample_rate <= 10.0 * rates.gamma_2 / TWO_PI:
        raise ValueError("sample_rate must exceed 10 linewidths (undersampled line)")
    if duration <= 0:
        raise ValueError("duration must be positive")
    n = int(round(duration * sample_rate))
    p_total = integrated_thermal_power(rates, omega01)
    if p_total < 0:
        raise ValueError("negative occupation imbalance has no surrogate emission record")
    if p_total == 0.0:
        return TimeSeries(sample_rate=sample_rate, samples=np.zeros(n))

    dt = 1.0 / sample_rate
    pole = np.exp((1j * TWO_PI * center_fraction * sample_rate - rates.gamma_2) * dt)
    var_z = 2.0 * p_total  # Re(z) then carries p_total
    sigma = math.sqrt(var_z * (1.0 - abs(pole) ** 2))

    rng = np.random.default_rng(seed)
    out = np.empty(n)
    # stationary start
    z0 = math.sqrt(var_z / 2.0) * complex(rng.standard_normal(), rng.standard_normal())
    zi = np.array([pole * z0], dtype=complex)
    chunk = 4_000_000
    for start in range(0, n, chunk):
        m = min(chunk, n - start)
        noise = sigma / math.sqrt(2.0) * (rng.standard_normal(m) + 1j * rng.standard_normal(m))
        z, zi = scipy.signal.lfilter([1.0], [1.0, -pole], noise, zi=zi)
        out[start : start + m] = z.real
    return TimeSeries(sample_rate=sample_rate, samples=out)


def subtract_background(on: Spectrum, off: Spectrum) -> Spectrum:
    """Pointwise difference of two spectra on the same grid.

    Negative values are preserved: a dressed-state doublet minus the bare
    line legitimately dips below zero at the undressed frequency.
    """
    if not np.array_equal(on.freqs, off.freqs):
        raise ValueError("spectra must share one frequency grid")
    return Spectrum(freqs=on.freqs, values=on.values - off.values, meta={"kind": "difference"})


@dataclass(frozen=True)
class FitResult:
    """Named estimates with 1-sigma uncertainties and fit diagnostics."""

    params: dict
    sigmas: dict
    residual_rms: float
    converged: bool
    iterations: int
    diagnostics: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(
            {
                "params": self.params,
                "sigmas": self.sigmas,
                "residual_rms": self.residual_rms,
                "converged": self.converged,
                "iterations": self.iterations,
                "diagnostics": {k: v for k, v in self.diagnostics.items() if isinstance(v, (int, float, str, bool))},
            },
            indent=2,
            sort_keys=True,
        )


def _damped_least_squares(residual_fn, x0: np.ndarray, names: list[str], x_scale=None) -> FitResult:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        res = least_squares(
            residual_fn,
            x0,
            method="lm" if len(x0) <= len(residual_fn(x0)) else "trf",
            ftol=1e-10,
            xtol=1e-12,
            gtol=1e-12,
            max_nfev=MAX_FIT_ITERATIONS * (len(x0) + 1),
        )
    m, k = len(res.fun), len(x0)
    dof = max(m - k, 1)
    jtj = res.jac.T @ res.jac
    try:
        # heteroscedasticity-consistent covariance with leverage correction:
        # multiplicative noise concentrates where the model is large, and a
        # plain residual-RMS scaling understates the parameter spread there
        jtj_inv = np.linalg.inv(jtj)
        leverage = np.einsum("ij,jk,ik->i", res.jac, jtj_inv, res.jac)
        weights = (res.fun / np.clip(1.0 - leverage, 0.05, None)) ** 2
        meat = res.jac.T @ (weights[:, None] * res.jac)
        cov = jtj_inv @ meat @ jtj_inv
        sigmas = np.sqrt(np.maximum(np.diag(cov), 0.0))
        cond = float(np.linalg.cond(jtj))
    except np.linalg.LinAlgError:
        sigmas = np.full(k, np.inf)
        cond = np.inf
    converged = bool(res.status > 0)
    if not converged:
        warnings.warn(f"fit did not converge: {res.message}", stacklevel=2)
    return FitResult(
        params=dict(zip(names, (float(v) for v in res.x))),
        sigmas=dict(zip(names, (float(s) for s in sigmas))),
        residual_rms=float(np.sqrt(np.mean(res.fun**2))),
        converged=converged,
        iterations=int(res.nfev),
        diagnostics={"status": int(res.status), "message": str(res.message), "condition": cond},
    )


def _peak_guess(freqs: np.ndarray, values: np.ndarray) -> tuple[float, float, float]:
    """(center, hwhm, height) from the maximum and half-maximum crossings."""
    i = int(np.argmax(values))
    height = float(values[i])
    center = float(freqs[i])
    half = height / 2.0
    above = values >= half
    left = i
    while left > 0 and above[left - 1]:
        left -= 1
    right = i
    while right < len(values) - 1 and above[right + 1]:
        right += 1
    hwhm = max(float(freqs[right] - freqs[left]) / 2.0, float(freqs[1] - freqs[0]))
    return center, hwhm, height


def fit_lorentzian(spec: Spectrum, n_peaks: int = 1) -> FitResult:
    """Fit one or two Lorentzian peaks (center, hwhm, height each).

    Initial guesses come from max/half-max heuristics; for two peaks the
    second guess is the maximum outside 3 half-widths of the first.  The
    grid must resolve each peak with at least 8 points per FWHM.
    """
    if n_peaks not in (1, 2):
        raise ValueError("n_peaks must be 1 or 2")
    f, v = spec.freqs, spec.values
    df = float(np.min(np.diff(f)))
    c1, w1, h1 = _peak_guess(f, v)
    if 2.0 * w1 / df < 8.0:
        raise ValueError("peak not resolvable: fewer than 8 points per FWHM")

    if n_peaks == 1:
        names = ["center_hz", "hwhm_hz", "height"]
        x0 = np.array([c1, w1, h1])

        def resid(x):
            c, w, h = x
            return h * w**2 / ((f - c) ** 2 + w**2) - v

        fit = _damped_least_squares(resid, x0, names)
        fit.params["hwhm_hz"] = abs(fit.params["hwhm_hz"])
        return fit

    masked = np.where(np.abs(f - c1) > 3.0 * w1, v, -np.inf)
    if not np.any(np.isfinite(masked)):
        raise ValueError("no second peak candidate outside the first peak")
    c2, w2, h2 = _peak_guess(f, np.where(np.isfinite(masked), masked, 0.0))
    names = ["center1_hz", "hwhm1_hz", "height1", "center2_hz", "hwhm2_hz", "height2"]
    x0 = np.array([c1, w1, h1, c2, w2, h2])

    def resid2(x):
        c1_, w1_, h1_, c2_, w2_, h2_ = x
        model = h1_ * w1_**2 / ((f - c1_) ** 2 + w1_**2) + h2_ * w2_**2 / ((f - c2_) ** 2 + w2_**2)
        return model - v

    fit = _damped_least_squares(resid2, x0, names)
    for key in ("hwhm1_hz", "hwhm2_hz"):
        fit.params[key] = abs(fit.params[key])
    return fit


def fit_thermal(spec: Spectrum, omega01: float | None = None) -> FitResult:
    """Fit the undriven emission line.

    Parameters are the amplitude coefficient gamma_r*gamma_n*delta_n/
    (2*pi*gamma_1) in Hz, the half-width gamma_2 (Hz), and the line center;
    the diagnostics carry the integrated power of the fitted line.
    """
    f, v = spec.freqs, spec.values
    c0, w0, h0 = _peak_guess(f, v)
    scale = HBAR * (omega01 if omega01 is not None else TWO_PI * c0)
    # display model: 2*hbar*omega01*A*g2 / ((f-c)^2 + g2^2), A in Hz
    a0 = h0 * w0 / (2.0 * scale)

    def resid(x):
        a, g2, c = x
        return 2.0 * scale * a * g2 / ((f - c) ** 2 + g2**2) - v

    fit = _damped_least_squares(resid, np.array([a0, w0, c0]), ["amp_coeff_hz", "gamma_2_hz", "center_hz"])
    fit.params["gamma_2_hz"] = abs(fit.params["gamma_2_hz"])
    # exact Lorentzian integral of the display model: pi * peak * hwhm = 2*pi*scale*a
    fit.diagnostics["integrated_power_w"] = TWO_PI * scale * fit.params["amp_coeff_hz"]
    fit.diagnostics["sigma_integrated_power_w"] = TWO_PI * scale * fit.sigmas["amp_coeff_hz"]
    return fit


def fit_mollow(spec: Spectrum, omega01: float | None = None) -> FitResult:
    """Fit the strong-drive center peak for (gamma_r, gamma_2, center)."""
    f, v = spec.freqs, spec.values
    c0, w0, h0 = _peak_guess(f, v)
    scale = HBAR * (omega01 if omega01 is not None else TWO_PI * c0)
    gr0 = 2.0 * h0 * w0 / scale  # display peak = scale*gr/(2*g2)

    def resid(x):
        gr, g2, c = x
        return scale * gr * g2 / (2.0 * ((f - c) ** 2 + g2**2)) - v

    fit = _damped_least_squares(resid, np.array([gr0, w0, c0]), ["gamma_r_hz", "gamma_2_hz", "center_hz"])
    for key in ("gamma_r_hz", "gamma_2_hz"):
        fit.params[key] = abs(fit.params[key])
    return fit


def fit_power_loss(
    points,
    gamma_2: float,
    gamma_r: float,
    omega01: float,
    gamma_1: float | None = None,
) -> FitResult:
    """Fit (gamma_n, delta_n) to a power-loss-vs-drive curve.

    ``points`` is a sequence of (omega_rabi_rad_s, watts).  gamma_2 and
    gamma_r are fixed from the driven-spectrum fit; gamma_1 defaults to
    2*gamma_2 (negligible pure dephasing).  A curve that never crosses zero
    (delta_n ~ 0, or all points saturated) is still fit but flagged
    ill-conditioned in the diagnostics.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 5:
        raise ValueError("need at least 5 (omega_rabi, watts) points")
    om2 = pts[:, 0] ** 2
    p = pts[:, 1]
    g1 = 2.0 * gamma_2 if gamma_1 is None else gamma_1

    crosses_zero = bool(np.min(p) < 0 < np.max(p))

    def model(x):
        gn, dn = x
        return HBAR * omega01 * (gn / 2.0) * (om2 - 2.0 * gamma_2 * gamma_r * dn) / (om2 + gamma_2 * g1)

    sat = HBAR * omega01 / 2.0
    gn0 = max(np.max(np.abs(p)) / sat, 1e3)
    dn0 = 0.1

    def resid(x):
        return model(x) - p

    fit = _damped_least_squares(resid, np.array([gn0, dn0]), ["gamma_n_rad", "delta_n"])
    fit.params["gamma_n_hz"] = fit.params.pop("gamma_n_rad") / TWO_PI
    fit.sigmas["gamma_n_hz"] = fit.sigmas.pop("gamma_n_rad") / TWO_PI

    # relative sensitivity of the curve to delta_n: negligible when every
    # point sits in the saturated regime
    x_fit = np.array([fit.params["gamma_n_hz"] * TWO_PI, fit.params["delta_n"]])
    h = 1e-6
    base_model = model(x_fit)
    d_dn = (model(x_fit + [0.0, h]) - base_model) / h
    scale = np.max(np.abs(base_model)) or 1.0
    sensitivity = float(np.max(np.abs(d_dn))) * max(abs(fit.params["delta_n"]), 0.1) / scale
    unidentifiable = sensitivity < 1e-3

    ill = not crosses_zero or fit.diagnostics.get("condition", np.inf) > 1e12
    fit.diagnostics["ill_conditioned"] = bool(ill)
    fit.diagnostics["delta_n_unidentifiable"] = bool(unidentifiable)
    if ill:
        warnings.warn("power-loss curve does not bracket zero: delta_n weakly constrained", stacklevel=2)
    return fit


def fit_reflection(trace, component: str = "complex") -> FitResult:
    """Fit a reflection trace for the effective numerator, width, and center.

    ``trace`` is a sequence of (delta_rad_s, complex r); the model is
    1 - i*A/((delta - c) + i*g2).  ``component`` selects complex, magnitude,
    or phase residuals; magnitude and phase fits constrain the width equally
    well, which the tests use as a consistency check.
    """
    rows = list(trace)
    delta = np.array([float(d) for d, _ in rows])
    r = np.array([complex(v) for _, v in rows])
    if component not in ("complex", "magnitude", "phase"):
        raise ValueError("component must be complex, magnitude, or phase")

    i0 = int(np.argmin(np.abs(r)))
    depth = 1.0 - np.abs(r[i0])
    half = np.abs(r) <= 1.0 - depth / 2.0
    span = np.ptp(delta[half]) if np.count_nonzero(half) > 1 else np.ptp(delta) / 10.0
    g2_0 = max(span / 2.0, abs(delta[1] - delta[0]))
    a0 = max((1.0 - np.real(r[i0])) * g2_0, 0.05 * g2_0)  # exact on a noiseless dip

    def model(x):
        a, g2, c = x
        return 1.0 - 1j * a / ((delta - c) + 1j * g2)

    def resid(x):
        m = model(x)
        if component == "complex":
            return np.concatenate([(m - r).real, (m - r).imag])
        if component == "magnitude":
            return np.abs(m) - np.abs(r)
        return np.angle(m * np.conj(r))

    fit = _damped_least_squares(resid, np.array([a0, g2_0, delta[i0]]), ["numerator_rad", "gamma_2_rad", "center_rad"])
    out_params = {
        "numerator_hz": abs(fit.params["numerator_rad"]) / TWO_PI,
        "gamma_2_hz": abs(fit.params["gamma_2_rad"]) / TWO_PI,
        "center_hz": fit.params["center_rad"] / TWO_PI,
    }
    out_sigmas = {
        "numerator_hz": fit.sigmas["numerator_rad"] / TWO_PI,
        "gamma_2_hz": fit.sigmas["gamma_2_rad"] / TWO_PI,
        "center_hz": fit.sigmas["center_rad"] / TWO_PI,
    }
    return FitResult(
        params=out_params,
        sigmas=out_sigmas,
        residual_rms=fit.residual_rms,
        converged=fit.converged,
        iterations=fit.iterations,
        diagnostics=fit.diagnostics,
    )


@dataclass(frozen=True)
class Table1Record:
    """Reconciled system parameters (Hz for rates, mK for temperatures)."""

    gamma_r_hz: float
    gamma_n_hz: float
    gamma_1_hz: float
    gamma_2_hz: float
    delta_n: float
    n_r: float
    n_n: float
    n_q: float
    rho11: float
    t_r_mk: float
    t_q_mk: float
    t_n_mk: float
    gamma_phi_implied_hz: float
    gamma_2_reflection_hz: float
    sigmas: dict = field(default_factory=dict)

    def to_json(self) -> str:
        d = {k: getattr(self, k) for k in self.__dataclass_fields__ if k != "sigmas"}
        d["sigmas"] = self.sigmas
        return json.dumps(d, indent=2, sort_keys=True)


def _reconcile_values(gamma_r_hz, gamma_2_hz, gamma_n_hz, delta_n, numerator_hz, omega01):
    rho11 = 0.5 * (1.0 - numerator_hz / gamma_r_hz)
    if not 0.0 <= rho11 < 0.5:
        raise ValueError("reflection numerator implies an unphysical population")
    gamma_1_hz = (gamma_n_hz + gamma_r_hz) / (1.0 - 2.0 * rho11)
    gamma_plus_hz = rho11 * gamma_1_hz
    n_n = (gamma_plus_hz + gamma_r_hz * delta_n) / (gamma_n_hz + gamma_r_hz)
    n_r = n_n - delta_n
    if n_r < 0 or n_n < 0:
        raise ValueError(f"inconsistent fits: negative occupations ({n_r:.4g}, {n_n:.4g})")
    n_q = qubit_occupation_from_population(rho11)
    return rho11, gamma_1_hz, n_r, n_n, n_q


def reconcile_table1(
    mollow: FitResult,
    power_loss_fit: FitResult,
    reflection: FitResult,
    omega01: float,
) -> Table1Record:
    """Combine the three fits into one consistent parameter set.

    gamma_r and gamma_2 come from the driven-spectrum fit (primary over the
    reflection-derived width, whose value is reported alongside), gamma_n
    and delta_n from the power-loss fit, and the excited-state population
    from the reflection numerator; occupations follow from the linear
    system {n_n - n_r = delta_n, n_n*gamma_n + n_r*gamma_r = gamma_plus}.
    Temperatures are bosonic inversions at omega01.  1-sigma uncertainties
    are propagated by finite differences of the full map.
    """
    for fit in (mollow, power_loss_fit, reflection):
        if not fit.converged:
            raise ValueError("all three fits must have converged")
    inputs = np.array(
        [
            mollow.params["gamma_r_hz"],
            mollow.params["gamma_2_hz"],
            power_loss_fit.params["gamma_n_hz"],
            power_loss_fit.params["delta_n"],
            reflection.params["numerator_hz"],
        ]
    )
    input_sigmas = np.array(
        [
            mollow.sigmas["gamma_r_hz"],
            mollow.sigmas["gamma_2_hz"],
            power_loss_fit.sigmas["gamma_n_hz"],
            power_loss_fit.sigmas["delta_n"],
            reflection.sigmas["numerator_hz"],
        ]
    )

    def outputs(x):
        gr, g2, gn, dn, num = x
        rho11, g1, n_r, n_n, n_q = _reconcile_values(gr, g2, gn, dn, num, omega01)
        t_r = temperature_from_occupation(n_r, omega01) if n_r > 0 else 0.0
        t_q = temperature_from_occupation(n_q, omega01) if n_q > 0 else 0.0
        t_n = temperature_from_occupation(n_n, omega01) if n_n > 0 else 0.0
        return np.array([g1, n_r, n_n, n_q, rho11, t_r, t_q, t_n])

    base = outputs(inputs)
    jac = np.zeros((len(base), len(inputs)))
    for j in range(len(inputs)):
        h = max(1e-7 * abs(inputs[j]), 1e-12)
        xp = inputs.copy()
        xp[j] += h
        try:
            jac[:, j] = (outputs(xp) - base) / h
        except ValueError:
            jac[:, j] = 0.0
    out_sigmas = np.sqrt((jac**2) @ (input_sigmas**2))
    names = ["gamma_1_hz", "n_r", "n_n", "n_q", "rho11", "t_r_mk", "t_q_mk", "t_n_mk"]
    scale = {"t_r_mk": 1e3, "t_q_mk": 1e3, "t_n_mk": 1e3}
    sigmas = {k: float(s) * scale.get(k, 1.0) for k, s in zip(names, out_sigmas)}

    g1_hz, n_r, n_n, n_q, rho11, t_r, t_q, t_n = base
    gamma_2_hz = mollow.params["gamma_2_hz"]
    return Table1Record(
        gamma_r_hz=mollow.params["gamma_r_hz"],
        gamma_n_hz=power_loss_fit.params["gamma_n_hz"],
        gamma_1_hz=float(g1_hz),
        gamma_2_hz=gamma_2_hz,
        delta_n=power_loss_fit.params["delta_n"],
        n_r=float(n_r),
        n_n=float(n_n),
        n_q=float(n_q),
        rho11=float(rho11),
        t_r_mk=float(t_r * 1e3),
        t_q_mk=float(t_q * 1e3),
        t_n_mk=float(t_n * 1e3),
        gamma_phi_implied_hz=float(gamma_2_hz - g1_hz / 2.0),
        gamma_2_reflection_hz=reflection.params.get("gamma_2_hz", float("nan")),
        sigmas=sigmas,
    )
