"""Dense Lindblad generator, steady states, dynamics, and output spectra.

This is the package's numerical oracle: everything closed-form elsewhere is
cross-checked against it.  States are dim x dim complex matrices; generators
act on column-stacked density matrices (vec by columns, so a sandwich
A rho B maps to kron(B.T, A)).  That convention is fixed here and shared by
every module.

Dissipators follow the doubled convention D[c]rho = 2 c rho c+ - {c+c, rho}
with bath prefactors gamma/2, i.e. a standard-rate channel gamma contributes
gamma * (c rho c+ - {c+c, rho}/2).  The 1<->2 transition of the 3-level
model carries twice the 0<->1 rates (sqrt(2) dipole moment).

Emission spectra are evaluated exactly from the stationary connected
correlators via resolvent solves 2 Re <A| (i*delta - L)^(-1) |B rho_ss>;
projecting out the stationary component implements the omission of the
coherent delta peaks.  The thermal black-body background of the line itself
is never added.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .constants import HBAR, TWO_PI
from .model import SystemConfig, derive_rates
from .spectra import CorrelationTrace, Spectrum

__all__ = [
    "DensityMatrix",
    "Superoperator",
    "DegenerateSteadyStateError",
    "NumericsError",
    "build_liouvillian",
    "steady_state",
    "evolve",
    "regression_correlator",
    "output_psd",
    "output_intensity",
    "steady_moments",
    "lowering_operator",
]

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
EIGENVALUE_FLOOR = -1e-10


class DegenerateSteadyStateError(RuntimeError):
    """The generator has more than one stationary state (disconnected model)."""


class NumericsError(RuntimeError):
    """A numerical solve failed to meet its accuracy contract."""


@dataclass(frozen=True)
class DensityMatrix:
    """Validated density matrix.  Violations fail loudly; nothing is clipped."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.entries, dtype=complex)
        object.__setattr__(self, "entries", m)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in (2, 3):
            raise ValueError("density matrix must be 2x2 or 3x3")
        if np.max(np.abs(m - m.conj().T)) > HERMITICITY_TOL:
            raise NumericsError("density matrix is not Hermitian within tolerance")
        if abs(np.trace(m).real - 1.0) > TRACE_TOL or abs(np.trace(m).imag) > TRACE_TOL:
            raise NumericsError("density matrix trace deviates from 1")
        if np.min(np.linalg.eigvalsh((m + m.conj().T) / 2)) < EIGENVALUE_FLOOR:
            raise NumericsError("density matrix has a negative eigenvalue beyond tolerance")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def expectation(self, op: np.ndarray) -> complex:
        return complex(np.trace(op @ self.entries))

    def population(self, level: int) -> float:
        return float(self.entries[level, level].real)


@dataclass(frozen=True)
class Superoperator:
    """Generator on column-stacked density matrices, with frame bookkeeping.

    ``frame`` records the lab frequency (rad/s) each transition's coherence
    is referenced to, so spectra can be mapped back to absolute frequency.
    """

    matrix: np.ndarray
    dim: int
    frame: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", m)
        d2 = self.dim * self.dim
        if m.shape != (d2, d2):
            raise ValueError("generator must be dim^2 x dim^2")
        # trace preservation: vec(I) is a left null vector
        tr = _vec(np.eye(self.dim, dtype=complex)).conj() @ m
        scale = max(1.0, float(np.max(np.abs(m))))
        if np.max(np.abs(tr)) > 1e-10 * scale:
            raise NumericsError("generator is not trace preserving")


def _vec(m: np.ndarray) -> np.ndarray:
    return np.asarray(m, dtype=complex).reshape(-1, order="F")


def _unvec(v: np.ndarray, dim: int) -> np.ndarray:
    return np.asarray(v, dtype=complex).reshape((dim, dim), order="F")


def _trace_product(op: np.ndarray, v: np.ndarray) -> complex:
    """Tr(op @ unvec(v)) without reshaping."""
    return complex(_vec(op.conj().T).conj() @ v)


def lowering_operator(dim: int, transition: str = "t01") -> np.ndarray:
    """|i><j| lowering operator for the requested transition."""
    if dim not in (2, 3):
        raise ValueError("levels must be 2 or 3")
    m = np.zeros((dim, dim), dtype=complex)
    if transition == "t01":
        m[0, 1] = 1.0
    elif transition == "t12":
        if dim < 3:
            raise ValueError("t12 requires a 3-level model")
        m[1, 2] = 1.0
    else:
        raise ValueError("unknown transition")
    return m


def _hamiltonian_superop(h: np.ndarray) -> np.ndarray:
    eye = np.eye(h.shape[0], dtype=complex)
    return -1j * (np.kron(eye, h) - np.kron(h.T, eye))


def _dissipator_superop(c: np.ndarray, rate: float) -> np.ndarray:
    """Standard-rate dissipator: rate * (c . c+ - {c+c, .}/2)."""
    eye = np.eye(c.shape[0], dtype=complex)
    cdc = c.conj().T @ c
    return rate * (np.kron(c.conj(), c) - 0.5 * (np.kron(eye, cdc) + np.kron(cdc.T, eye)))


def build_liouvillian(config: SystemConfig) -> Superoperator:
    """Lindblad generator for a 2- or 3-level config in its drive frame.

    The rotating frame is set by the drive frequencies (undriven transitions
    default to resonance, detuning 0).  Thermal dissipators honor each
    bath's statistics; 1<->2 channels carry the doubled rates; quasiparticle
    channels, when configured, add their population rates on the 0<->1
    transition.
    """
    dim = config.transmon.levels
    if dim not in (2, 3):
        raise ValueError("levels must be 2 or 3")

    d01 = config.drive("t01")
    d12 = config.drive("t12")
    delta1 = d01.detuning if d01 else 0.0
    omega1 = complex(d01.amplitude) if d01 else 0.0
    delta2 = d12.detuning if d12 else 0.0
    omega2 = complex(d12.amplitude) if d12 else 0.0

    sm01 = lowering_operator(dim, "t01")
    sp01 = sm01.conj().T

    h = np.zeros((dim, dim), dtype=complex)
    h[1, 1] = -delta1
    h += 0.5 * omega1 * sp01 + 0.5 * np.conj(omega1) * sm01
    if dim == 3:
        sm12 = lowering_operator(dim, "t12")
        sp12 = sm12.conj().T
        h[2, 2] = -(delta1 + delta2)
        amp2 = np.sqrt(2.0) * omega2  # dipole enhancement on 1<->2
        h += 0.5 * amp2 * sp12 + 0.5 * np.conj(amp2) * sm12

    gen = _hamiltonian_superop(h)

    wr_down, wr_up = config.radiative.weights()
    wn_down, wn_up = config.nonradiative.weights()
    gr, gn = config.radiative.gamma, config.nonradiative.gamma
    gen += _dissipator_superop(sm01, gr * wr_down + gn * wn_down)
    gen += _dissipator_superop(sp01, gr * wr_up + gn * wn_up)

    gamma_phi = config.transmon.gamma_phi
    if dim == 2:
        sz = np.diag([-1.0, 1.0]).astype(complex)  # |1><1| - |0><0|
        gen += _dissipator_superop(sz, gamma_phi / 2.0)
    else:
        rates = derive_rates(config).three_level
        from dataclasses import replace as _replace

        rad12 = _replace(config.radiative, occupation=rates.n_r_12)
        non12 = _replace(config.nonradiative, occupation=rates.n_n_12)
        w12r_down, w12r_up = rad12.weights()
        w12n_down, w12n_up = non12.weights()
        gen += _dissipator_superop(sm12, 2.0 * (gr * w12r_down + gn * w12n_down))
        gen += _dissipator_superop(sp12, 2.0 * (gr * w12r_up + gn * w12n_up))
        for i in range(3):
            proj = np.zeros((3, 3), dtype=complex)
            proj[i, i] = 1.0
            gen += _dissipator_superop(proj, gamma_phi)

    if config.quasiparticles is not None:
        gen += _dissipator_superop(sm01, config.quasiparticles.gamma_down)
        gen += _dissipator_superop(sp01, config.quasiparticles.gamma_up)

    omega01 = config.transmon.omega01
    frame = {"t01": omega01 + delta1}
    if dim == 3:
        frame["t12"] = config.transmon.omega12 + delta2
    return Superoperator(matrix=gen, dim=dim, frame=frame)


def steady_state(liouvillian: Superoperator) -> DensityMatrix:
    """Unique stationary state of the generator.

    Solves the bordered least-squares system {L v = 0, Tr v = 1}; an SVD
    null-space dimension above one (disconnected or purely unitary model)
    raises :class:`DegenerateSteadyStateError`.
    """
    mat = liouvillian.matrix
    dim = liouvillian.dim
    svals = np.linalg.svd(mat, compute_uv=False)
    smax = svals[0] if svals[0] > 0 else 1.0
    null_dim = int(np.sum(svals < 1e-10 * dim * dim * smax))
    if null_dim > 1:
        raise DegenerateSteadyStateError(f"stationary subspace has dimension {null_dim}")
    if null_dim == 0:
        raise DegenerateSteadyStateError("generator has no stationary state within tolerance")

    tr_row = _vec(np.eye(dim, dtype=complex)).conj()[None, :]
    a = np.vstack([mat / smax, tr_row])
    b = np.zeros(dim * dim + 1, dtype=complex)
    b[-1] = 1.0
    v, *_ = np.linalg.lstsq(a, b, rcond=None)

    residual = np.max(np.abs(mat @ v))
    if residual > 1e-10 * smax:
        raise NumericsError(f"steady-state residual {residual:.3e} exceeds tolerance")

    rho = _unvec(v, dim)
    rho = (rho + rho.conj().T) / 2.0
    rho = rho / np.trace(rho).real
    return DensityMatrix(entries=rho)


def steady_moments(config: SystemConfig) -> dict:
    """Steady-state moments of the 0<->1 transition operators."""
    lio = build_liouvillian(config)
    rho = steady_state(lio)
    sm = lowering_operator(lio.dim, "t01")
    sp = sm.conj().T
    return {
        "sm": rho.expectation(sm),
        "sp": rho.expectation(sp),
        "sp_sm": rho.expectation(sp @ sm),
        "sm_sp": rho.expectation(sm @ sp),
        "rho": rho,
        "liouvillian": lio,
    }


def evolve(rho0: DensityMatrix, liouvillian: Superoperator, t_grid: np.ndarray) -> list[DensityMatrix]:
    """Propagate rho0 along a strictly increasing time grid.

    Exact matrix-exponential stepping (one expm per distinct step size);
    trace drift beyond 1e-8 or non-finite entries raise
    :class:`NumericsError`.
    """
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or len(t) == 0 or np.any(np.diff(t) <= 0):
        raise ValueError("t_grid must be non-empty and strictly increasing")
    if rho0.dim != liouvillian.dim:
        raise ValueError("dimension mismatch between state and generator")

    props: dict[float, np.ndarray] = {}
    v = _vec(rho0.entries)
    out: list[DensityMatrix] = []
    prev = 0.0
    for tk in t:
        dt = tk - prev
        if dt > 0:
            if dt not in props:
                props[dt] = expm(liouvillian.matrix * dt)
            v = props[dt] @ v
        prev = tk
        if not np.all(np.isfinite(v)):
            raise NumericsError("propagation produced non-finite entries")
        if abs(_trace_product(np.eye(liouvillian.dim, dtype=complex), v).real - 1.0) > 1e-8:
            raise NumericsError("trace drift exceeded 1e-8 during propagation")
        rho = _unvec(v, liouvillian.dim)
        out.append(DensityMatrix(entries=(rho + rho.conj().T) / 2.0))
    return out


_KIND_TABLE = {
    # kind -> (applied operator, initial vec builder)
    "sp_sm": ("sp", lambda rho, sm: sm @ rho),   # <sp(t) sm(0)>, later op left
    "sm_sp": ("sp", lambda rho, sm: rho @ sm),   # <sm(0) sp(t)>, later op right
    "sm": ("sm", lambda rho, sm: rho),           # <sm(t)> transient from rho_ss
    "sp": ("sp", lambda rho, sm: rho),
}


def regression_correlator(
    liouvillian: Superoperator,
    steady: DensityMatrix,
    t_grid: np.ndarray,
    kind: str = "sp_sm",
    transition: str = "t01",
) -> CorrelationTrace:
    """Stationary two-time correlator on t_grid >= 0 by quantum regression.

    ``<A(t)B(0)> = Tr{A exp(L t)[B rho_ss]}`` with the later operator applied
    after propagation; negative times follow from conjugate symmetry of
    stationary correlators and are not sampled.  The input state must be
    stationary (residual check).
    """
    if kind not in _KIND_TABLE:
        raise ValueError("unknown correlator kind")
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or len(t) == 0 or np.any(t < 0) or np.any(np.diff(t) <= 0):
        raise ValueError("t_grid must be nonnegative and strictly increasing")

    scale = max(1.0, float(np.max(np.abs(liouvillian.matrix))))
    if np.max(np.abs(liouvillian.matrix @ _vec(steady.entries))) > 1e-8 * scale:
        raise NumericsError("input state is not stationary for this generator")

    sm = lowering_operator(liouvillian.dim, transition)
    applied_name, init = _KIND_TABLE[kind]
    applied = sm.conj().T if applied_name == "sp" else sm

    v = _vec(init(steady.entries, sm))
    values = np.empty(len(t), dtype=complex)
    props: dict[float, np.ndarray] = {}
    last_t = 0.0
    for i, tk in enumerate(t):
        dt = tk - last_t
        if dt > 0:
            if dt not in props:
                props[dt] = expm(liouvillian.matrix * dt)
            v = props[dt] @ v
            last_t = tk
        values[i] = _trace_product(applied, v)
    return CorrelationTrace(times=t, values=values, kind=kind)


def correlator_horizon(linewidth: float, decades: float = 15.0) -> float:
    """Default truncation horizon for time-domain traces: decades/linewidth."""
    if linewidth <= 0:
        raise ValueError("linewidth must be positive")
    return decades / linewidth


def _connected_resolvent_fts(
    mat: np.ndarray,
    rho_vec: np.ndarray,
    applied: np.ndarray,
    initial_vecs: list[np.ndarray],
    deltas: np.ndarray,
    chunk: int = 512,
) -> list[np.ndarray]:
    """2 Re Tr{applied (i d - L)^(-1) [connected initial]} for each d.

    The solve is restricted to the traceless (stable) spectral subspace with
    a bordered system, so it stays nonsingular at d = 0 where the generator
    itself has its zero mode.  All initial vectors share one batched
    factorization per frequency chunk.
    """
    d2 = mat.shape[0]
    dim = int(np.sqrt(d2))
    tr_row = _vec(np.eye(dim, dtype=complex)).conj()

    rhs = np.zeros((d2 + 1, len(initial_vecs)), dtype=complex)
    for j, vec in enumerate(initial_vecs):
        rhs[:d2, j] = vec - rho_vec * complex(tr_row @ vec)

    base = np.zeros((d2 + 1, d2 + 1), dtype=complex)
    base[:d2, :d2] = -mat
    base[:d2, d2] = rho_vec
    base[d2, :d2] = tr_row

    w = _vec(applied.conj().T).conj()
    outs = [np.empty(len(deltas)) for _ in initial_vecs]
    idx = np.arange(d2)
    for start in range(0, len(deltas), chunk):
        dd = deltas[start : start + chunk]
        a = np.broadcast_to(base, (len(dd), d2 + 1, d2 + 1)).copy()
        a[:, idx, idx] += 1j * dd[:, None]
        x = np.linalg.solve(a, np.broadcast_to(rhs, (len(dd), d2 + 1, len(initial_vecs))))
        vals = 2.0 * np.real(np.einsum("i,nij->nj", w, x[:, :d2, :]))
        for j, out in enumerate(outs):
            out[start : start + len(dd)] = vals[:, j]
    return outs


def output_psd(config: SystemConfig, omega_grid: np.ndarray, raw: bool = False) -> Spectrum:
    """Emission PSD into the waveguide near the 0<->1 line, exactly.

    Assembles gamma_r*[(n_r+1) FT<sp(t)sm> - n_r FT<sm(t')sp(t)>] from the
    connected stationary correlators, scaled by hbar*omega01/(2*pi) and
    reported in the display convention 2*pi*S(omega) (pass ``raw=True`` for
    S(omega) itself).  Coherent delta peaks and the waveguide black-body
    background are omitted.  The grid must cover at least +-20 coherence
    linewidths around the emission line.
    """
    omega = np.asarray(omega_grid, dtype=float)
    lio = build_liouvillian(config)
    rho = steady_state(lio)
    rates = derive_rates(config)
    gamma2 = rates.gamma_2 if rates.three_level is None else rates.three_level.gamma_2_t

    omega_ref = lio.frame["t01"]
    if omega.max() - omega_ref < 20 * gamma2 or omega_ref - omega.min() < 20 * gamma2:
        raise ValueError("omega_grid must span at least 20 linewidths around the emission line")

    sm = lowering_operator(lio.dim, "t01")
    sp = sm.conj().T
    rho_vec = _vec(rho.entries)
    deltas = omega - omega_ref

    s_plus, s_minus = _connected_resolvent_fts(
        lio.matrix, rho_vec, sp, [_vec(sm @ rho.entries), _vec(rho.entries @ sm)], deltas
    )

    n_r = rates.n_r if rates.three_level is None else rates.three_level.n_r_01
    omega01 = config.transmon.omega01
    psd = HBAR * omega01 / TWO_PI * rates.gamma_r * ((n_r + 1.0) * s_plus - n_r * s_minus)
    values = psd if raw else TWO_PI * psd
    return Spectrum(freqs=omega / TWO_PI, values=values, meta={"convention": "raw" if raw else "2piS"})


def output_intensity(config: SystemConfig) -> float:
    """Net power removed from the waveguide (W), from equal-time moments.

    hbar*omega01*(<b_in+ b_in> - <b_out+ b_out>) including the thermal-input
    cross correlations; negative values mean the waveguide is being heated
    by the emitter.
    """
    lio = build_liouvillian(config)
    rho = steady_state(lio)
    rates = derive_rates(config)

    sm = lowering_operator(lio.dim, "t01")
    sp = sm.conj().T
    d01 = config.drive("t01")
    omega1 = complex(d01.amplitude) if d01 else 0.0
    n_r = rates.n_r if rates.three_level is None else rates.three_level.n_r_01

    flux = rates.gamma_r * (
        (n_r + 1.0) * rho.expectation(sp @ sm).real - n_r * rho.expectation(sm @ sp).real
    )
    flux += 2.0 * np.real(0.5j * omega1 * rho.expectation(sp))

    if lio.dim == 3:
        sm12 = lowering_operator(3, "t12")
        sp12 = sm12.conj().T
        n_r12 = rates.three_level.n_r_12
        d12 = config.drive("t12")
        amp2 = np.sqrt(2.0) * complex(d12.amplitude) if d12 else 0.0
        flux += 2.0 * rates.gamma_r * (
            (n_r12 + 1.0) * rho.expectation(sp12 @ sm12).real - n_r12 * rho.expectation(sm12 @ sp12).real
        )
        flux += 2.0 * np.real(0.5j * amp2 * rho.expectation(sp12))

    return -HBAR * config.transmon.omega01 * flux
