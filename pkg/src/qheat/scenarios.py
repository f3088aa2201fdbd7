"""Config-driven scenario execution shared by the HTTP service and the CLI.

A run is described by one JSON document (strictly validated, unknown keys
rejected): the scenario name, the physical system, scenario parameters, a
seed, and an output prefix.  Execution is deterministic given config+seed;
each produced file gets a JSON sidecar carrying the fully resolved config
and a sha256 digest of the content.

Units at this boundary are plain SI with explicit suffixes: ``*_hz`` (no
implicit 2*pi anywhere in files), ``*_mk`` for millikelvin,
``*_photons`` for occupations.
"""

from __future__ import annotations

import base64
import hashlib
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from . import fitting, observables, spectrometer
from .constants import EV, HBAR, TWO_PI
from .lindblad import output_psd
from .model import (
    BathSpec,
    ConfigError,
    DriveSpec,
    QuasiparticleSpec,
    SystemConfig,
    TransmonSpec,
    derive_rates,
    occupation_from_temperature,
)
from .spectra import Spectrum, default_omega_grid

__all__ = ["RunConfig", "run_scenario", "validate_scenario", "ScenarioError", "thread_count"]

SCENARIOS = ("spectrum", "reflection", "power-loss", "budget", "autler", "qp", "welch", "fit", "table1", "spectrometer")
STRONG_DRIVE_FACTOR = 30.0  # Omega >= 30*Gamma_1 counts as strong drive


class ScenarioError(RuntimeError):
    """Numerical failure while executing a validated scenario."""


def thread_count() -> int:
    """Worker count for internal sweeps (QHEAT_THREADS, default = cores)."""
    env = os.environ.get("QHEAT_THREADS", "")
    if env.strip():
        n = int(env)
        if n < 1:
            raise ConfigError("QHEAT_THREADS must be a positive integer")
        return n
    return os.cpu_count() or 1


def _parallel_map(fn, items):
    workers = thread_count()
    if workers == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class BathModel(_Strict):
    gamma_hz: float = Field(ge=0)
    occupation_photons: Optional[float] = Field(default=None, ge=0)
    temperature_mk: Optional[float] = Field(default=None, ge=0)
    statistics: Literal["bosonic", "tls"] = "bosonic"

    @model_validator(mode="after")
    def _one_of(self):
        if (self.occupation_photons is None) == (self.temperature_mk is None):
            raise ValueError("give exactly one of occupation_photons or temperature_mk")
        return self

    def to_spec(self, label: str, omega01: float) -> BathSpec:
        n = self.occupation_photons
        if n is None:
            n = occupation_from_temperature(self.temperature_mk * 1e-3, omega01, self.statistics)
        return BathSpec(label=label, gamma=TWO_PI * self.gamma_hz, occupation=n, statistics=self.statistics)


class DriveModel(_Strict):
    transition: Literal["t01", "t12"] = "t01"
    detuning_hz: float = 0.0
    amplitude_hz: float = Field(default=0.0, ge=0)
    phase_deg: float = 0.0

    def to_spec(self) -> DriveSpec:
        amp = TWO_PI * self.amplitude_hz * np.exp(1j * math.radians(self.phase_deg))
        return DriveSpec(transition=self.transition, detuning=TWO_PI * self.detuning_hz, amplitude=complex(amp))


class QuasiparticleModel(_Strict):
    gamma_up_hz: float = Field(default=0.0, ge=0)
    gamma_down_hz: float = Field(default=0.0, ge=0)
    gap_uev: float = Field(default=170.0, gt=0)
    r_n_ohm: float = Field(default=6.3e3, gt=0)
    capacitance_f: float = Field(default=78e-15, gt=0)

    def to_spec(self) -> QuasiparticleSpec:
        return QuasiparticleSpec(
            gamma_up=TWO_PI * self.gamma_up_hz,
            gamma_down=TWO_PI * self.gamma_down_hz,
            gap_delta_g=self.gap_uev * 1e-6 * EV,
            r_n=self.r_n_ohm,
            capacitance=self.capacitance_f,
        )


class SystemModel(_Strict):
    omega01_hz: float = Field(gt=0)
    anharmonicity_hz: float = -250e6
    levels: Literal[2, 3] = 2
    gamma_phi_hz: float = Field(default=0.0, ge=0)
    radiative: BathModel
    nonradiative: BathModel
    drives: list[DriveModel] = Field(default_factory=list)
    quasiparticles: Optional[QuasiparticleModel] = None
    n_r_12_photons: Optional[float] = Field(default=None, ge=0)
    n_n_12_photons: Optional[float] = Field(default=None, ge=0)

    def to_config(self) -> SystemConfig:
        omega01 = TWO_PI * self.omega01_hz
        occ12 = None
        if self.n_r_12_photons is not None or self.n_n_12_photons is not None:
            rad = self.radiative.to_spec("radiative", omega01)
            non = self.nonradiative.to_spec("nonradiative", omega01)
            occ12 = (
                self.n_r_12_photons if self.n_r_12_photons is not None else rad.occupation,
                self.n_n_12_photons if self.n_n_12_photons is not None else non.occupation,
            )
        return SystemConfig(
            transmon=TransmonSpec(
                omega01=omega01,
                anharmonicity_delta=TWO_PI * self.anharmonicity_hz,
                levels=self.levels,
                gamma_phi=TWO_PI * self.gamma_phi_hz,
            ),
            radiative=self.radiative.to_spec("radiative", omega01),
            nonradiative=self.nonradiative.to_spec("nonradiative", omega01),
            drives=tuple(d.to_spec() for d in self.drives),
            quasiparticles=self.quasiparticles.to_spec() if self.quasiparticles else None,
            occupations_12=occ12,
        )


class GridModel(_Strict):
    span_linewidths: float = Field(default=40.0, gt=0)
    points_per_linewidth: float = Field(default=40.0, gt=0)


class SpectrumParams(_Strict):
    grid: GridModel = Field(default_factory=GridModel)
    drive_rabi_hz: float = Field(default=8.8e6, gt=0)
    include_numeric: bool = True


class ReflectionParams(_Strict):
    span_hz: float = Field(default=2e6, gt=0)
    points: int = Field(default=801, ge=5)


class PowerLossParams(_Strict):
    rabi_min_hz: float = Field(default=10e3, gt=0)
    rabi_max_hz: float = Field(default=10e6, gt=0)
    points: int = Field(default=200, ge=2)
    log_spaced: bool = True


class BudgetParams(_Strict):
    rabi_hz: float = Field(ge=0)
    detuning_hz: float = 0.0
    sweep: Optional[PowerLossParams] = None


class AutlerParams(_Strict):
    omega2_rabi_hz: float = Field(gt=0)
    grid: GridModel = Field(default_factory=lambda: GridModel(span_linewidths=40.0, points_per_linewidth=20.0))


class QpParams(_Strict):
    rho11: float = Field(default=0.0286, ge=0, lt=0.5)
    temperature_mk: float = Field(default=131.0, gt=0)


class SynthModel(_Strict):
    duration_s: float = Field(gt=0)
    sample_rate_hz: float = Field(gt=0)


class InputModel(_Strict):
    path: Optional[str] = None
    inline: Optional[str] = None
    inline_b64: Optional[str] = None
    sidecar: Optional[str] = None

    @model_validator(mode="after")
    def _one_of(self):
        if sum(x is not None for x in (self.path, self.inline, self.inline_b64)) != 1:
            raise ValueError("give exactly one of path, inline, or inline_b64")
        return self

    def read_text(self) -> str:
        if self.inline is not None:
            return self.inline
        if self.inline_b64 is not None:
            return base64.b64decode(self.inline_b64).decode()
        with open(self.path, "r", encoding="utf-8") as fh:
            return fh.read()


class WelchParams(_Strict):
    input: Optional[InputModel] = None
    synth: Optional[SynthModel] = None
    segment_len: Optional[int] = Field(default=None, ge=16)
    overlap_fraction: float = Field(default=0.5, ge=0, lt=1)
    window: Literal["hann", "hamming", "blackman", "boxcar"] = "hann"
    gain_w_per_unit2: float = Field(default=1.0, gt=0)

    @model_validator(mode="after")
    def _one_of(self):
        if (self.input is None) == (self.synth is None):
            raise ValueError("give exactly one of input or synth")
        return self


class FitParams(_Strict):
    kind: Literal["thermal", "mollow", "power_loss", "reflection", "lorentzian"]
    input: InputModel
    n_peaks: Literal[1, 2] = 1
    component: Literal["complex", "magnitude", "phase"] = "complex"
    fixed_gamma_2_hz: Optional[float] = None
    fixed_gamma_r_hz: Optional[float] = None


class Table1Params(_Strict):
    gamma_r_hz: float = Field(gt=0)
    gamma_2_hz: float = Field(gt=0)
    gamma_n_hz: float = Field(gt=0)
    delta_n: float
    numerator_hz: float = Field(gt=0)
    sigma_gamma_r_hz: float = Field(default=0.0, ge=0)
    sigma_gamma_2_hz: float = Field(default=0.0, ge=0)
    sigma_gamma_n_hz: float = Field(default=0.0, ge=0)
    sigma_delta_n: float = Field(default=0.0, ge=0)
    sigma_numerator_hz: float = Field(default=0.0, ge=0)


class SpectrometerParams(_Strict):
    gamma_r_hz: float = Field(gt=0)
    gamma_n_hz: float = Field(default=0.0, ge=0)
    n_r: float = Field(ge=0)
    n_th: float = Field(ge=0)
    omega01_min_hz: float = Field(gt=0)
    omega01_max_hz: float = Field(gt=0)
    points: int = Field(default=21, ge=1)
    noise_rms: float = Field(default=0.0, ge=0)
    gamma_phi_hz: float = Field(default=0.0, ge=0)


class RunConfig(_Strict):
    scenario: Literal[
        "spectrum", "reflection", "power-loss", "budget", "autler", "qp", "welch", "fit", "table1", "spectrometer"
    ]
    system: Optional[SystemModel] = None
    seed: int = 0
    output_prefix: str = ""
    spectrum: Optional[SpectrumParams] = None
    reflection: Optional[ReflectionParams] = None
    power_loss: Optional[PowerLossParams] = None
    budget: Optional[BudgetParams] = None
    autler: Optional[AutlerParams] = None
    qp: Optional[QpParams] = None
    welch: Optional[WelchParams] = None
    fit: Optional[FitParams] = None
    table1: Optional[Table1Params] = None
    spectrometer: Optional[SpectrometerParams] = None

    @model_validator(mode="after")
    def _sections(self):
        section = self.scenario.replace("-", "_")
        needs_system = self.scenario in ("spectrum", "reflection", "power-loss", "budget", "autler", "qp")
        if needs_system and self.system is None:
            raise ValueError(f"scenario {self.scenario} requires a system section")
        if self.scenario in ("autler", "welch", "fit", "table1", "spectrometer", "budget") and getattr(self, section) is None:
            raise ValueError(f"scenario {self.scenario} requires a {section} section")
        for name in ("spectrum", "reflection", "power_loss", "budget", "autler", "qp", "welch", "fit", "table1", "spectrometer"):
            if getattr(self, name) is not None and name != section:
                raise ValueError(f"section {name} does not belong to scenario {self.scenario}")
        return self


def _digest(content: bytes | str) -> str:
    data = content.encode() if isinstance(content, str) else content
    return hashlib.sha256(data).hexdigest()


def _csv_two_columns(header: str, col_a, col_b) -> str:
    lines = [header]
    for a, b in zip(col_a, col_b):
        lines.append(f"{a:.12e},{b:.12e}")
    return "\n".join(lines) + "\n"


def _run_spectrum(cfg: RunConfig) -> dict:
    params = cfg.spectrum or SpectrumParams()
    system = cfg.system.to_config()
    rates = derive_rates(system)
    omega01 = system.transmon.omega01
    width = rates.gamma_2 if rates.three_level is None else rates.three_level.gamma_2_t
    grid = default_omega_grid(omega01, width, params.grid.span_linewidths, params.grid.points_per_linewidth)

    if rates.three_level is None:
        s_th = observables.thermal_psd(grid, rates, omega01)
        s_on = observables.mollow_center_psd(grid, rates, omega01)
    else:
        s_th = observables.thermal_psd_three_level(grid, rates.three_level, omega01)
        s_on = observables.mollow_center_psd_three_level(grid, rates.three_level, omega01)
    outputs = {"thermal_analytic.csv": s_th.to_csv(), "mollow_analytic.csv": s_on.to_csv()}

    if params.include_numeric:
        base = system.with_drive(None)
        outputs["thermal_numeric.csv"] = output_psd(base, grid).to_csv()
        driven = system.with_drive(DriveSpec("t01", 0.0, TWO_PI * params.drive_rabi_hz))
        outputs["mollow_numeric.csv"] = output_psd(driven, grid).to_csv()
    summary = {
        "thermal_peak_w_per_hz": float(np.max(s_th.values)),
        "mollow_peak_w_per_hz": float(np.max(s_on.values)),
        "integrated_thermal_w": observables.integrated_thermal_power(rates, omega01),
    }
    return {"outputs": outputs, "summary": summary}


def _run_reflection(cfg: RunConfig) -> dict:
    params = cfg.reflection or ReflectionParams()
    system = cfg.system.to_config()
    rates = derive_rates(system)
    deltas = TWO_PI * np.linspace(-params.span_hz / 2, params.span_hz / 2, params.points)
    if rates.three_level is None:
        r = observables.reflection_coefficient(deltas, rates)
    else:
        r = observables.reflection_three_level(deltas, rates.three_level)
    lines = ["delta_hz,re,im"]
    for d, v in zip(deltas, r):
        lines.append(f"{d / TWO_PI:.12e},{v.real:.12e},{v.imag:.12e}")
    r0 = r[params.points // 2]
    return {
        "outputs": {"reflection.csv": "\n".join(lines) + "\n"},
        "summary": {"r_on_resonance_re": float(r0.real), "r_on_resonance_im": float(r0.imag)},
    }


def _rabi_sweep(params: PowerLossParams) -> np.ndarray:
    if params.log_spaced:
        return np.geomspace(params.rabi_min_hz, params.rabi_max_hz, params.points)
    return np.linspace(params.rabi_min_hz, params.rabi_max_hz, params.points)


def _run_power_loss(cfg: RunConfig) -> dict:
    params = cfg.power_loss or PowerLossParams()
    system = cfg.system.to_config()
    rates = derive_rates(system)
    omega01 = system.transmon.omega01
    rabi_hz = _rabi_sweep(params)
    watts = observables.power_loss(TWO_PI * rabi_hz, rates, omega01)
    crossing = math.sqrt(2.0 * rates.gamma_2 * rates.gamma_r * rates.delta_n) / TWO_PI if rates.delta_n > 0 else float("nan")
    return {
        "outputs": {"power_loss.csv": _csv_two_columns("rabi_hz,watts", rabi_hz, watts)},
        "summary": {"zero_crossing_hz": crossing, "saturation_w": HBAR * omega01 * rates.gamma_n / 2.0},
    }


def _run_budget(cfg: RunConfig) -> dict:
    params = cfg.budget
    system = cfg.system.to_config()
    rates = derive_rates(system)
    omega01 = system.transmon.omega01
    b = observables.heat_rates(TWO_PI * params.rabi_hz, TWO_PI * params.detuning_hz, rates, omega01)
    record = {
        "p_loss_w": b.p_loss,
        "w_dot_w": b.w_dot,
        "q_dot_r_w": b.q_dot_r,
        "q_dot_n_w": b.q_dot_n,
        "u_dot_w": b.u_dot,
    }
    outputs = {"budget.json": json.dumps(record, indent=2, sort_keys=True)}
    if params.sweep is not None:
        rabi_hz = _rabi_sweep(params.sweep)
        rows = ["rabi_hz,p_loss_w,w_dot_w,q_dot_r_w,q_dot_n_w"]
        for f in rabi_hz:
            bb = observables.heat_rates(TWO_PI * f, TWO_PI * params.detuning_hz, rates, omega01)
            rows.append(f"{f:.12e},{bb.p_loss:.12e},{bb.w_dot:.12e},{bb.q_dot_r:.12e},{bb.q_dot_n:.12e}")
        outputs["budget.csv"] = "\n".join(rows) + "\n"
    return {"outputs": outputs, "summary": record}


def _run_autler(cfg: RunConfig) -> dict:
    params = cfg.autler
    system = cfg.system.to_config()
    if system.transmon.levels != 3:
        raise ConfigError("autler scenario needs a 3-level system")
    rates3 = derive_rates(system).three_level
    omega01 = system.transmon.omega01
    omega2 = TWO_PI * params.omega2_rabi_hz
    width = 0.5 * (rates3.gamma_2_t + rates3.gamma_2_02)
    step = width / params.grid.points_per_linewidth
    span = omega2 / math.sqrt(2.0) + params.grid.span_linewidths * width
    n = int(np.ceil(span / step))
    grid = omega01 + step * np.arange(-n, n + 1)

    on = output_psd(system.with_drive(DriveSpec("t12", 0.0, omega2)), grid)
    off = output_psd(system.with_drive(None), grid)
    diff = fitting.subtract_background(on, off)
    analytic = observables.autler_sidepeak_psd(grid, rates3, omega2, omega01)
    return {
        "outputs": {"autler_difference_numeric.csv": diff.to_csv(), "autler_sidepeaks_analytic.csv": analytic.to_csv()},
        "summary": {
            "separation_hz": math.sqrt(2.0) * params.omega2_rabi_hz,
            "dip_w_per_hz": float(diff.values[len(grid) // 2]),
        },
    }


def _run_qp(cfg: RunConfig) -> dict:
    params = cfg.qp or QpParams()
    system = cfg.system.to_config()
    rates = derive_rates(system)
    omega01 = system.transmon.omega01
    qp_spec = system.quasiparticles or QuasiparticleSpec()
    qp_rates = observables.qp_decay_rate(params.rho11, qp_spec.r_n, qp_spec.capacitance, qp_spec.gap_delta_g, omega01)
    x_qp, gamma_qp_thermal = observables.qp_thermal_rate(params.temperature_mk * 1e-3, qp_spec.gap_delta_g, omega01)
    configured = QuasiparticleSpec(
        gamma_up=qp_rates.gamma_up,
        gamma_down=qp_rates.gamma_down,
        gap_delta_g=qp_spec.gap_delta_g,
        r_n=qp_spec.r_n,
        capacitance=qp_spec.capacitance,
    )
    record = {
        "gamma_down_hz": qp_rates.gamma_down / TWO_PI,
        "gamma_up_hz": qp_rates.gamma_up / TWO_PI,
        "gamma_qp_hz": qp_rates.gamma_qp / TWO_PI,
        "density_ratio": observables.qp_density_ratio(params.rho11, qp_spec.gap_delta_g, omega01),
        "x_qp_thermal": x_qp,
        "gamma_qp_thermal_per_s": gamma_qp_thermal,
        "p_loss_w": observables.qp_power_loss(rates, configured, omega01),
    }
    return {"outputs": {"qp.json": json.dumps(record, indent=2, sort_keys=True)}, "summary": record}


def _load_timeseries(params: WelchParams) -> fitting.TimeSeries:
    src = params.input
    if src.path is not None and src.path.endswith(".raw"):
        with open(src.path, "rb") as fh:
            blob = fh.read()
        if src.sidecar is None:
            raise ConfigError("raw time series needs a sidecar path")
        with open(src.sidecar, "r", encoding="utf-8") as fh:
            sidecar = fh.read()
        return fitting.TimeSeries.from_raw(blob, sidecar)
    if src.inline_b64 is not None:
        if src.sidecar is None:
            raise ConfigError("raw time series needs an inline sidecar")
        return fitting.TimeSeries.from_raw(base64.b64decode(src.inline_b64), src.sidecar)
    return fitting.TimeSeries.from_csv(src.read_text(), gain=params.gain_w_per_unit2)


def _run_welch(cfg: RunConfig) -> dict:
    params = cfg.welch
    hint = None
    if params.synth is not None:
        if cfg.system is None:
            raise ConfigError("welch synth mode requires a system section")
        system = cfg.system.to_config()
        rates = derive_rates(system)
        ts = fitting.surrogate_timeseries(
            rates, system.transmon.omega01, params.synth.duration_s, params.synth.sample_rate_hz, seed=cfg.seed
        )
        hint = rates.gamma_2 / TWO_PI
    else:
        ts = _load_timeseries(params)
    spec = fitting.welch_psd(ts, params.segment_len, params.overlap_fraction, params.window, linewidth_hint_hz=hint)
    band_power = float(np.trapezoid(spec.values, spec.freqs))
    return {"outputs": {"psd.csv": spec.to_csv()}, "summary": {"band_power_w": band_power, "nperseg": spec.meta["nperseg"]}}


def _parse_reflection_csv(text: str):
    import io as _io

    rows = np.loadtxt(_io.StringIO(text), delimiter=",", skiprows=1, ndmin=2)
    return [(TWO_PI * row[0], complex(row[1], row[2])) for row in rows]


def _parse_ploss_csv(text: str):
    import io as _io

    rows = np.loadtxt(_io.StringIO(text), delimiter=",", skiprows=1, ndmin=2)
    return [(TWO_PI * row[0], row[1]) for row in rows]


def _run_fit(cfg: RunConfig) -> dict:
    params = cfg.fit
    text = params.input.read_text()
    if params.kind in ("thermal", "mollow", "lorentzian"):
        spec = Spectrum.from_csv(text)
        if params.kind == "thermal":
            result = fitting.fit_thermal(spec)
        elif params.kind == "mollow":
            result = fitting.fit_mollow(spec)
        else:
            result = fitting.fit_lorentzian(spec, n_peaks=params.n_peaks)
    elif params.kind == "power_loss":
        if params.fixed_gamma_2_hz is None or params.fixed_gamma_r_hz is None:
            raise ConfigError("power_loss fit needs fixed_gamma_2_hz and fixed_gamma_r_hz")
        if cfg.system is None:
            raise ConfigError("power_loss fit needs a system section for omega01")
        result = fitting.fit_power_loss(
            _parse_ploss_csv(text),
            gamma_2=TWO_PI * params.fixed_gamma_2_hz,
            gamma_r=TWO_PI * params.fixed_gamma_r_hz,
            omega01=TWO_PI * cfg.system.omega01_hz,
        )
    else:
        result = fitting.fit_reflection(_parse_reflection_csv(text), component=params.component)
    if not result.converged:
        raise ScenarioError(f"fit did not converge: {result.diagnostics.get('message', '')}")
    return {"outputs": {"fit.json": result.to_json()}, "summary": result.params}


def _run_table1(cfg: RunConfig) -> dict:
    p = cfg.table1
    if cfg.system is None:
        raise ConfigError("table1 needs a system section for omega01")
    omega01 = TWO_PI * cfg.system.omega01_hz
    mollow = fitting.FitResult(
        params={"gamma_r_hz": p.gamma_r_hz, "gamma_2_hz": p.gamma_2_hz, "center_hz": cfg.system.omega01_hz},
        sigmas={"gamma_r_hz": p.sigma_gamma_r_hz, "gamma_2_hz": p.sigma_gamma_2_hz, "center_hz": 0.0},
        residual_rms=0.0,
        converged=True,
        iterations=0,
    )
    ploss = fitting.FitResult(
        params={"gamma_n_hz": p.gamma_n_hz, "delta_n": p.delta_n},
        sigmas={"gamma_n_hz": p.sigma_gamma_n_hz, "delta_n": p.sigma_delta_n},
        residual_rms=0.0,
        converged=True,
        iterations=0,
    )
    refl = fitting.FitResult(
        params={"numerator_hz": p.numerator_hz, "gamma_2_hz": float("nan"), "center_hz": cfg.system.omega01_hz},
        sigmas={"numerator_hz": p.sigma_numerator_hz, "gamma_2_hz": 0.0, "center_hz": 0.0},
        residual_rms=0.0,
        converged=True,
        iterations=0,
    )
    record = fitting.reconcile_table1(mollow, ploss, refl, omega01)
    summary = json.loads(record.to_json())
    return {"outputs": {"table1.json": record.to_json()}, "summary": summary}


def _run_spectrometer(cfg: RunConfig) -> dict:
    p = cfg.spectrometer
    base = spectrometer.SpectrometerConfig(
        gamma_r=TWO_PI * p.gamma_r_hz,
        gamma_n=TWO_PI * p.gamma_n_hz,
        n_th=p.n_th,
        n_r=p.n_r,
        omega01=TWO_PI * p.omega01_min_hz,
        gamma_phi=TWO_PI * p.gamma_phi_hz,
    )
    grid = TWO_PI * np.linspace(p.omega01_min_hz, p.omega01_max_hz, p.points)

    def one(args):
        i, om = args
        return spectrometer.sweep_spectrometer(
            base, [om], lambda _om: p.n_th, noise_rms=p.noise_rms, seed=cfg.seed + i
        )[0]

    values = _parallel_map(one, list(enumerate(grid)))
    csv = _csv_two_columns("omega01_hz,delta_n", grid / TWO_PI, values)
    return {
        "outputs": {"spectrometer.csv": csv},
        "summary": {"mean_delta_n": float(np.mean(values)), "true_delta_n": p.n_th - p.n_r},
    }


_RUNNERS = {
    "spectrum": _run_spectrum,
    "reflection": _run_reflection,
    "power-loss": _run_power_loss,
    "budget": _run_budget,
    "autler": _run_autler,
    "qp": _run_qp,
    "welch": _run_welch,
    "fit": _run_fit,
    "table1": _run_table1,
    "spectrometer": _run_spectrometer,
}


def validate_scenario(cfg: RunConfig) -> dict:
    """Dry-run schema and regime checks; no computation.

    Returns {"ok", "errors", "warnings", "notes"}.  Regime rules: a drive
    labelled strong must satisfy Omega >= 30*Gamma_1; a weak probe must stay
    well under Gamma_1; surrogate sampling must exceed 10 linewidths.
    """
    errors: list[str] = []
    warnings_: list[str] = []
    notes: list[str] = []
    system = None
    if cfg.system is not None:
        try:
            system = cfg.system.to_config()
        except (ConfigError, ValueError) as exc:
            errors.append(str(exc))
    if system is not None:
        rates = derive_rates(system)
        notes.append(f"gamma_1 = {rates.gamma_1 / TWO_PI:.6g} Hz, gamma_2 = {rates.gamma_2 / TWO_PI:.6g} Hz")
        notes.append(f"thermal population = {rates.thermal_population:.4g}")
        for d in system.drives:
            if d.is_on and abs(d.amplitude) < STRONG_DRIVE_FACTOR * rates.gamma_1 and cfg.scenario in ("spectrum", "autler"):
                warnings_.append(
                    f"drive on {d.transition} is not strong (|Omega| < {STRONG_DRIVE_FACTOR:g}*gamma_1): "
                    "saturated-line formulas are out of regime"
                )
        if cfg.scenario == "spectrum" and cfg.spectrum is not None:
            if TWO_PI * cfg.spectrum.drive_rabi_hz < STRONG_DRIVE_FACTOR * rates.gamma_1:
                warnings_.append("drive_rabi_hz below the strong-drive regime (Omega >= 30*gamma_1)")
        if cfg.scenario == "welch" and cfg.welch is not None and cfg.welch.synth is not None:
            if cfg.welch.synth.sample_rate_hz <= 10.0 * rates.gamma_2 / TWO_PI:
                errors.append("synth sample rate does not resolve the line (need > 10 linewidths)")
    if cfg.scenario == "spectrometer" and cfg.spectrometer is not None:
        try:
            spectrometer.SpectrometerConfig(
                gamma_r=TWO_PI * cfg.spectrometer.gamma_r_hz,
                gamma_n=TWO_PI * cfg.spectrometer.gamma_n_hz,
                n_th=cfg.spectrometer.n_th,
                n_r=cfg.spectrometer.n_r,
                omega01=TWO_PI * cfg.spectrometer.omega01_min_hz,
                gamma_phi=TWO_PI * cfg.spectrometer.gamma_phi_hz,
            )
        except ConfigError as exc:
            errors.append(str(exc))
    return {"ok": not errors, "errors": errors, "warnings": warnings_, "notes": notes}


def run_scenario(cfg: RunConfig) -> dict:
    """Execute a validated config.

    Returns {"outputs": {filename: str|bytes}, "summary": dict,
    "sidecars": {filename: json str}}.  Deterministic for a fixed
    config+seed; sidecars embed the resolved config and a sha256 digest.
    """
    result = _RUNNERS[cfg.scenario](cfg)
    resolved = json.loads(cfg.model_dump_json(exclude_none=True))
    sidecars = {}
    prefix = cfg.output_prefix
    outputs = {prefix + name: content for name, content in result["outputs"].items()}
    for name, content in outputs.items():
        sidecars[name + ".meta.json"] = json.dumps(
            {"config": resolved, "sha256": _digest(content), "file": name}, indent=2, sort_keys=True
        )
    return {"outputs": outputs, "summary": result["summary"], "sidecars": sidecars}
