"""Closed moment equations of motion: a second, independent oracle.

The 2-level system closes on (s1, s1*, s2) = (<sm>, <sp>, <sp sm>) with an
explicit 3x3 drift matrix; the weak-drive 3-level system closes on
(w1, w1*, w2, w3) once the upper transition is undriven.  Steady moments
come from one linear solve, two-time correlators from the matrix
exponential acting on regression initial conditions.

The 3-level drift is written with the per-transition convenience rates
(half the physical 1<->2 thermalization rates, see
:class:`qheat.model.ThreeLevelRates`).  Its steady state coincides exactly
with the Lindblad steady state -- the factor 2 cancels there -- while
1<->2 transients relax twice as fast in the full model; no closed-form
observable in this package depends on those transients.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .model import DerivedRates, ThreeLevelRates
from .spectra import CorrelationTrace

__all__ = ["MomentSystem", "two_level_eom", "three_level_weak_eom", "steady_moments", "correlator_from_eom"]


@dataclass(frozen=True)
class MomentSystem:
    """Linear moment dynamics d/dt x = M x + b."""

    m_matrix: np.ndarray
    b_vector: np.ndarray
    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        m = np.asarray(self.m_matrix, dtype=complex)
        b = np.asarray(self.b_vector, dtype=complex)
        object.__setattr__(self, "m_matrix", m)
        object.__setattr__(self, "b_vector", b)
        if m.shape != (len(self.labels), len(self.labels)) or b.shape != (len(self.labels),):
            raise ValueError("matrix/vector shape mismatch")

    @property
    def order(self) -> int:
        return len(self.labels)

    def is_stable(self) -> bool:
        return bool(np.all(np.linalg.eigvals(self.m_matrix).real < 0))


def two_level_eom(delta: float, omega_rabi: complex, rates: DerivedRates) -> MomentSystem:
    """Drift matrix and drive vector for the driven 2-level moments."""
    g1, g2, gp = rates.gamma_1, rates.gamma_2, rates.gamma_plus
    om = complex(omega_rabi)
    m = np.array(
        [
            [1j * delta - g2, 0.0, 1j * om],
            [0.0, -1j * delta - g2, -1j * np.conj(om)],
            [0.5j * np.conj(om), -0.5j * om, -g1],
        ],
        dtype=complex,
    )
    b = np.array([-0.5j * om, 0.5j * np.conj(om), gp], dtype=complex)
    return MomentSystem(m_matrix=m, b_vector=b, labels=("sm", "sp", "sp_sm"))


def three_level_weak_eom(delta01: float, omega1: complex, rates3: ThreeLevelRates, omega2: complex = 0.0) -> MomentSystem:
    """Weak-drive 3-level moments (w1, w1*, w2, w3).

    Valid only with the upper transition undriven; a nonzero ``omega2`` is
    rejected because the moment hierarchy no longer closes.  w2 and w3 are
    the 0<->1 ladder products; the |2> population enters through the
    normalization w2 + w3 + <sp12 sm12> = 1.
    """
    if complex(omega2) != 0:
        raise ValueError("the closed moment set requires omega2 = 0")
    t = rates3
    om = complex(omega1)
    g2t = t.gamma_2_t
    m = np.array(
        [
            [1j * delta01 - g2t, 0.0, 0.5j * om, -0.5j * om],
            [0.0, -1j * delta01 - g2t, -0.5j * np.conj(om), 0.5j * np.conj(om)],
            [0.5j * np.conj(om), -0.5j * om, -(t.gamma_minus_01 + t.gamma_1_12), t.gamma_plus_01 - t.gamma_minus_12],
            [-0.5j * np.conj(om), 0.5j * om, t.gamma_minus_01, -t.gamma_plus_01],
        ],
        dtype=complex,
    )
    b = np.array([0.0, 0.0, t.gamma_minus_12, 0.0], dtype=complex)
    return MomentSystem(m_matrix=m, b_vector=b, labels=("sm", "sp", "sp_sm", "sm_sp"))


def steady_moments(system: MomentSystem) -> dict[str, complex]:
    """Stationary moments from M x = -b; singular drift is rejected."""
    m = system.m_matrix
    if np.linalg.cond(m) > 1e12:
        raise np.linalg.LinAlgError("moment drift matrix is singular (all rates zero?)")
    x = np.linalg.solve(m, -system.b_vector)
    return dict(zip(system.labels, (complex(v) for v in x)))


def correlator_from_eom(system: MomentSystem, t_grid: np.ndarray, kind: str = "sp_sm") -> CorrelationTrace:
    """Two-time correlator of the 2-level system by quantum regression.

    The regression vector v_i(t) = <X_i(t) B(0)> (or <B(0) X_i(t)> for the
    reversed ordering) obeys the same drift with inhomogeneity b*<B>, so
    v(t) = exp(M t)(v0 - v_inf) + v_inf with v_inf the factorized limit.
    Requires a stable drift (all eigenvalue real parts negative).
    """
    if system.labels[:3] != ("sm", "sp", "sp_sm") or system.order != 3:
        raise ValueError("correlators are implemented for the 2-level moment system")
    if kind not in ("sp_sm", "sm_sp"):
        raise ValueError("kind must be sp_sm or sm_sp")
    if not system.is_stable():
        raise ValueError("moment drift matrix is not stable")
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or len(t) == 0 or np.any(t < 0) or np.any(np.diff(t) <= 0):
        raise ValueError("t_grid must be nonnegative and strictly increasing")

    ss = steady_moments(system)
    s1, s2 = ss["sm"], ss["sp_sm"]
    x_ss = np.array([ss["sm"], ss["sp"], ss["sp_sm"]], dtype=complex)

    if kind == "sp_sm":
        # B = sm applied at time 0 from the right of rho
        v0 = np.array([0.0, s2, 0.0], dtype=complex)  # (<sm sm>, <sp sm>, <sp sm sm>)
        b_weight = s1
    else:
        # B = sm applied at time 0 from the left of rho: <sm(0) X(t)>
        v0 = np.array([0.0, 1.0 - s2, s1], dtype=complex)  # (<sm sm>, <sm sp>, <sm sp sm>)
        b_weight = s1
    v_inf = x_ss * b_weight

    values = np.empty(len(t), dtype=complex)
    w = v0 - v_inf
    props: dict[float, np.ndarray] = {}
    last = 0.0
    for i, tk in enumerate(t):
        dt = tk - last
        if dt > 0:
            if dt not in props:
                props[dt] = expm(system.m_matrix * dt)
            w = props[dt] @ w
            last = tk
        values[i] = w[1] + v_inf[1]  # the <sp ...> component
    return CorrelationTrace(times=t, values=values, kind=kind)
