"""Propagators: free unitary evolution, Lindblad dissipation, driven pulses.

Unitary propagation uses exact Hermitian eigendecomposition. Dissipative
propagation integrates the Lindblad master equation either with the
mandated fixed-step RK4 kernel or, for long durations where the required
step count is prohibitive, with the exact exponential of the (time
independent) Liouvillian; the two paths agree to integrator accuracy and
are cross-checked in the test suite.
"""
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import kernels
from .constants import TWO_PI
from .spin_system import SystemParams, build_H, delta_shift, nuclear_zeeman

__all__ = [
    "DissipationParams",
    "PulseSpec",
    "StepSizeUnderflow",
    "OffResonance",
    "propagator",
    "lindblad_evolve",
    "lindblad_pulse_evolve",
    "pulse_propagator",
    "resonant_carrier",
    "rotation_electron",
    "rotation_nuclear_controlled",
]

MIN_STEP_US = 1e-9
# beyond this many RK4 steps, lindblad_evolve(method="auto") switches to the
# exact Liouvillian exponential
AUTO_RK4_MAX_STEPS = 200_000

_PROJ_1 = np.diag([0.0, 0.0, 1.0, 1.0]).astype(complex)  # |1><1| x I
_LOWER = np.zeros((4, 4), dtype=complex)  # |0><1| x I
_LOWER[0, 2] = 1.0
_LOWER[1, 3] = 1.0
_ZDIAG = np.diag([1.0, 1.0, -1.0, -1.0]).astype(complex)  # Z x I


class StepSizeUnderflow(ValueError):
    """The mandated integration step fell below the representable minimum."""


class OffResonance(ValueError):
    """Pulse carrier too far from the |1,up> -> |1,down> transition."""


@dataclass(frozen=True)
class DissipationParams:
    """Electron relaxation and coherence times, in microseconds."""

    T1: float = 5.9e3
    T2: float = 350.0

    def __post_init__(self) -> None:
        if not (self.T1 > 0.0 and self.T2 > 0.0):
            raise ValueError("T1 and T2 must be positive")
        if self.T2 > 2.0 * self.T1:
            raise ValueError(f"T2 = {self.T2} exceeds 2*T1 = {2.0 * self.T1}")

    @property
    def gamma1(self) -> float:
        return 1.0 / self.T1

    @property
    def gamma_phi(self) -> float:
        # calibrated so the electron coherence envelope is exactly e^{-t/T2}
        return 1.0 / self.T2 - 0.5 / self.T1


@dataclass(frozen=True)
class PulseSpec:
    """Square drive over [t1, t2]; omega_R and carrier in rad/us.

    A pi pulse satisfies omega_R * (t2 - t1) = pi.
    """

    t1: float
    t2: float
    omega_R: float
    carrier: float

    def __post_init__(self) -> None:
        if not self.t2 > self.t1:
            raise ValueError(f"require t2 > t1, got [{self.t1}, {self.t2}]")
        if self.omega_R <= 0.0:
            raise ValueError("omega_R must be positive")

    @property
    def duration(self) -> float:
        return self.t2 - self.t1


def _spectral_norm(H: np.ndarray) -> float:
    return float(np.max(np.abs(np.linalg.eigvalsh(H))))


def propagator(H: np.ndarray, tau: float) -> np.ndarray:
    """exp(-i H tau) via exact eigendecomposition of the Hermitian H."""
    if tau < 0.0:
        raise ValueError(f"tau must be non-negative, got {tau}")
    w, V = np.linalg.eigh(H)
    return (V * np.exp(-1j * w * tau)) @ V.conj().T


def _liouvillian(H: np.ndarray, diss: DissipationParams) -> np.ndarray:
    """Lindblad generator as a 16x16 matrix acting on row-major vec(rho)."""
    eye = np.eye(4)
    L = -1j * (np.kron(H, eye) - np.kron(eye, H.T))
    g1 = diss.gamma1
    if g1 != 0.0:
        L += g1 * (
            np.kron(_LOWER, _LOWER.conj())
            - 0.5 * (np.kron(_PROJ_1, eye) + np.kron(eye, _PROJ_1.T))
        )
    gphi = diss.gamma_phi
    if gphi != 0.0:
        L += 0.5 * gphi * (np.kron(_ZDIAG, _ZDIAG) - np.eye(16))
    return L


def _rk4_steps(tau: float, max_step: float) -> int:
    if max_step < MIN_STEP_US:
        raise StepSizeUnderflow(
            f"required step {max_step:.3e} us is below {MIN_STEP_US} us"
        )
    return max(1, math.ceil(tau / max_step))


def lindblad_evolve(
    rho: np.ndarray,
    H: np.ndarray,
    diss: DissipationParams,
    tau: float,
    method: str = "auto",
) -> np.ndarray:
    """Evolve rho under H with electron relaxation (T1) and dephasing (T2).

    method: "rk4" for the fixed-step integrator with step
    <= min(T2, 2*pi/||H||)/1000, "expm" for the exact Liouvillian
    exponential, "auto" to pick rk4 when its step count is affordable.
    """
    if tau < 0.0:
        raise ValueError(f"tau must be non-negative, got {tau}")
    if tau == 0.0:
        return np.array(rho, dtype=complex)
    norm = _spectral_norm(H)
    max_step = min(diss.T2, TWO_PI / norm if norm > 0.0 else math.inf) / 1000.0
    n_steps = _rk4_steps(tau, max_step)
    if method == "auto":
        method = "rk4" if n_steps <= AUTO_RK4_MAX_STEPS else "expm"
    if method == "rk4":
        return kernels.lindblad_rk4(
            np.asarray(rho, dtype=complex),
            np.asarray(H, dtype=complex),
            diss.gamma1,
            diss.gamma_phi,
            0.0,
            0.0,
            0.0,
            tau,
            n_steps,
        )
    if method == "expm":
        S = scipy.linalg.expm(_liouvillian(H, diss) * tau)
        return (S @ np.asarray(rho, dtype=complex).reshape(16)).reshape(4, 4)
    raise ValueError(f"unknown method {method!r}")


def resonant_carrier(params: SystemParams) -> float:
    """Angular frequency 2*pi*(A - gN*muN*B - delta) of the driven transition."""
    return TWO_PI * (params.A - nuclear_zeeman(params) - delta_shift(params))


def _check_resonance(params: SystemParams, pulse: PulseSpec) -> None:
    omega_res = resonant_carrier(params)
    if abs(pulse.carrier - omega_res) > pulse.omega_R:
        raise OffResonance(
            f"carrier {pulse.carrier:.6f} rad/us is detuned from the "
            f"transition at {omega_res:.6f} rad/us by more than "
            f"omega_R = {pulse.omega_R:.6f}"
        )


def pulse_propagator(params: SystemParams, pulse: PulseSpec) -> np.ndarray:
    """Exact time-ordered propagator for H + V(t) over [t1, t2].

    V(t) is the circularly polarized drive of the |1,up> -> |1,down>
    transition; integration is in the lab frame with fixed RK4 step
    <= 2*pi/(1000*max(||H||, carrier)).
    """
    _check_resonance(params, pulse)
    H = build_H(params)
    scale = max(_spectral_norm(H), abs(pulse.carrier))
    max_step = TWO_PI / (1000.0 * scale)
    n_steps = _rk4_steps(pulse.duration, max_step)
    return kernels.schrodinger_pulse_rk4(
        H, pulse.omega_R, pulse.carrier, pulse.t1, pulse.t2, n_steps
    )


def lindblad_pulse_evolve(
    rho: np.ndarray,
    params: SystemParams,
    diss: DissipationParams,
    pulse: PulseSpec,
) -> np.ndarray:
    """Dissipative evolution through a driven pulse window."""
    _check_resonance(params, pulse)
    H = build_H(params)
    scale = max(_spectral_norm(H), abs(pulse.carrier))
    max_step = min(diss.T2, TWO_PI / scale) / 1000.0
    n_steps = _rk4_steps(pulse.duration, max_step)
    return kernels.lindblad_rk4(
        np.asarray(rho, dtype=complex),
        H,
        diss.gamma1,
        diss.gamma_phi,
        pulse.omega_R,
        pulse.carrier,
        pulse.t1,
        pulse.t2,
        n_steps,
    )


def rotation_electron(angle: float) -> np.ndarray:
    """exp(-i*angle*Y/2) on the electron, identity on the nucleus."""
    c, s = math.cos(angle / 2.0), math.sin(angle / 2.0)
    return np.kron(np.array([[c, -s], [s, c]], dtype=complex), np.eye(2))


def rotation_nuclear_controlled(angle: float) -> np.ndarray:
    """|1><1| x exp(-i*angle*sigma_y/2) + |0><0| x I."""
    c, s = math.cos(angle / 2.0), math.sin(angle / 2.0)
    U = np.eye(4, dtype=complex)
    U[2:, 2:] = np.array([[c, -s], [s, c]])
    return U
