"""Single-estimation circuit: exact evolution, analytic forms, sampling.

The sequence is: prepare |+><+| x (I/2 + q_z sigma_z/2), free evolution,
controlled nuclear pi rotation, electron pi, controlled nuclear pi
rotation, free evolution, final electron pi/2, measure Z on the electron.
With finite pulses the two controlled rotations are square driven pulses
over [-tau_n, 0] and [0, tau_n]; these windows do not depend on tau, so
the two pulse propagators are cached.
"""
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .constants import TWO_PI
from .evolution import (
    DissipationParams,
    PulseSpec,
    lindblad_evolve,
    lindblad_pulse_evolve,
    propagator,
    pulse_propagator,
    resonant_carrier,
    rotation_electron,
    rotation_nuclear_controlled,
)
from .spin_system import SystemParams, build_H, d_prime, delta_shift

__all__ = [
    "Ideal",
    "RotationError",
    "Decoherence",
    "ErrorModel",
    "CircuitSpec",
    "MeasurementRecord",
    "ProbabilityOutOfRange",
    "dqc1_expectation",
    "expectation_X_no_echo",
    "run_circuit_exact",
    "analytic_expectation",
    "sample_estimator",
    "measure_circuit",
]

_Z_ELECTRON = np.kron(np.diag([1.0, -1.0]), np.eye(2)).astype(complex)
_CLAMP_TOL = 1e-9


class ProbabilityOutOfRange(ValueError):
    """Expectation value outside [-1, 1] beyond the roundoff clamp."""


@dataclass(frozen=True)
class Ideal:
    """Error-free circuit."""

    def visibility(self, tau_effective: float) -> float:
        return 1.0


@dataclass(frozen=True)
class RotationError:
    """Gaussian angle errors on the two controlled rotations.

    Each circuit execution draws independent eps_a, eps_b with zero mean
    and standard deviation epsilon; the realized rotation angle is
    pi + 2*eps (so the mean visibility is 1 - epsilon^2).
    """

    epsilon: float

    def __post_init__(self) -> None:
        if self.epsilon < 0.0:
            raise ValueError("epsilon must be non-negative")

    def visibility(self, tau_effective: float) -> float:
        return 1.0 - self.epsilon**2


@dataclass(frozen=True)
class Decoherence:
    """Electron relaxation and dephasing during all evolution segments."""

    diss: DissipationParams = DissipationParams()

    def visibility(self, tau_effective: float) -> float:
        return math.exp(-2.0 * tau_effective / self.diss.T2)


ErrorModel = Ideal | RotationError | Decoherence


@dataclass(frozen=True)
class CircuitSpec:
    """Timing and repetition parameters of one estimation circuit.

    tau is the free-evolution half-duration (us) and tau_n the controlled
    pulse duration (us); the accumulated phase is 2*pi*A*(tau + tau_n).
    rabi is in kHz.
    """

    tau: float
    tau_n: float = 0.0
    N: int = 1000
    rabi: float = 500.0
    use_finite_pulses: bool = False

    def __post_init__(self) -> None:
        if not self.tau > 0.0:
            raise ValueError(f"tau must be positive, got {self.tau}")
        if self.tau_n < 0.0:
            raise ValueError("tau_n must be non-negative")
        if self.use_finite_pulses and self.tau_n <= 0.0:
            raise ValueError("finite pulses require tau_n > 0")
        if self.N < 100:
            raise ValueError(f"N must be at least 100, got {self.N}")

    @property
    def tau_effective(self) -> float:
        return self.tau + self.tau_n

    @property
    def omega_R(self) -> float:
        """Rabi angular frequency, rad/us."""
        return TWO_PI * self.rabi * 1e-3


@dataclass(frozen=True)
class MeasurementRecord:
    """N-shot estimator of <Z> with its conservative deviation zeta."""

    Z: float
    zeta: float
    tau_effective: float
    n_plus: int
    n_minus: int


def dqc1_expectation(theta: float, tau: float, q_z: float = 0.0) -> float:
    """Interferometric expectation cos(theta*tau); theta in rad/us.

    Independent of the target polarization q_z.
    """
    return math.cos(theta * tau)


def expectation_X_no_echo(params: SystemParams, tau: float) -> float:
    """Electron <X> after plain free evolution (no echo), to O(eta^2)."""
    dlt = delta_shift(params)
    phase_fast = TWO_PI * (d_prime(params) + dlt) * tau
    phase_slow = TWO_PI * params.A / 2.0 * tau
    return math.cos(phase_fast) * math.cos(phase_slow) + params.q_z * math.sin(
        phase_fast
    ) * math.sin(phase_slow)


def initial_state(q_z: float) -> np.ndarray:
    """|+><+| on the electron, polarization q_z on the nucleus."""
    rho_e = np.full((2, 2), 0.5, dtype=complex)
    rho_n = np.diag([(1.0 + q_z) / 2.0, (1.0 - q_z) / 2.0]).astype(complex)
    return np.kron(rho_e, rho_n)


@lru_cache(maxsize=16)
def _pulse_pair(params: SystemParams, tau_n: float, omega_R: float):
    """Cached propagators for the fixed pulse windows [-tau_n,0], [0,tau_n]."""
    carrier = resonant_carrier(params)
    U_a = pulse_propagator(params, PulseSpec(-tau_n, 0.0, omega_R, carrier))
    U_b = pulse_propagator(params, PulseSpec(0.0, tau_n, omega_R, carrier))
    U_a.setflags(write=False)
    U_b.setflags(write=False)
    return U_a, U_b


def _controlled_rotations(
    spec: CircuitSpec, params: SystemParams, eps_a: float, eps_b: float
):
    if spec.use_finite_pulses:
        U_a, U_b = _pulse_pair(params, spec.tau_n, spec.omega_R)
        if eps_a != 0.0:
            U_a = rotation_nuclear_controlled(2.0 * eps_a) @ U_a
        if eps_b != 0.0:
            U_b = rotation_nuclear_controlled(2.0 * eps_b) @ U_b
        return U_a, U_b
    R_a = rotation_nuclear_controlled(math.pi + 2.0 * eps_a)
    R_b = rotation_nuclear_controlled(math.pi + 2.0 * eps_b)
    return R_a, R_b


def _conjugate(U: np.ndarray, rho: np.ndarray) -> np.ndarray:
    return U @ rho @ U.conj().T


def run_circuit_exact(
    params: SystemParams,
    spec: CircuitSpec,
    err=Ideal(),
    rng: np.random.Generator | None = None,
) -> float:
    """Execute the estimation sequence on the exact 4x4 state; return <Z>.

    Under RotationError the two controlled-rotation angle errors are drawn
    from rng (required in that case). Under Decoherence every evolution
    segment integrates the Lindblad equation.
    """
    eps_a = eps_b = 0.0
    if isinstance(err, RotationError):
        if rng is None:
            raise ValueError("RotationError requires an rng for the error draws")
        eps_a, eps_b = rng.normal(0.0, err.epsilon, size=2)

    H = build_H(params)
    rho = initial_state(params.q_z)
    R_a, R_b = _controlled_rotations(spec, params, eps_a, eps_b)
    R_e = rotation_electron(math.pi)
    R_f = rotation_electron(math.pi / 2.0)

    if isinstance(err, Decoherence):
        rho = lindblad_evolve(rho, H, err.diss, spec.tau)
        if spec.use_finite_pulses:
            carrier = resonant_carrier(params)
            omega_R = spec.omega_R
            rho = lindblad_pulse_evolve(
                rho, params, err.diss, PulseSpec(-spec.tau_n, 0.0, omega_R, carrier)
            )
            rho = _conjugate(R_e, rho)
            rho = lindblad_pulse_evolve(
                rho, params, err.diss, PulseSpec(0.0, spec.tau_n, omega_R, carrier)
            )
        else:
            rho = _conjugate(R_b @ R_e @ R_a, rho)
        rho = lindblad_evolve(rho, H, err.diss, spec.tau)
        rho = _conjugate(R_f, rho)
    else:
        U = propagator(H, spec.tau)
        M = R_f @ U @ R_b @ R_e @ R_a @ U
        rho = _conjugate(M, rho)

    return float(np.trace(_Z_ELECTRON @ rho).real)


def analytic_expectation(params: SystemParams, spec: CircuitSpec, err=Ideal()) -> float:
    """Closed form Q * cos(2*pi*A*(tau + tau_n)) for the error model."""
    Q = err.visibility(spec.tau_effective)
    return Q * math.cos(TWO_PI * params.A * spec.tau_effective)


def _draw_outcomes(p_plus: np.ndarray, rng: np.random.Generator) -> int:
    return int(np.count_nonzero(rng.random(p_plus.shape) < p_plus))


def sample_estimator(
    expectation: float,
    N: int,
    rng: np.random.Generator,
    tau_effective: float = math.nan,
) -> MeasurementRecord:
    """Draw N projective +/-1 outcomes with p(+1) = (1 + <Z>)/2."""
    if N < 1:
        raise ValueError("N must be at least 1")
    if abs(expectation) > 1.0 + _CLAMP_TOL:
        raise ProbabilityOutOfRange(
            f"expectation {expectation!r} lies outside [-1, 1]"
        )
    e = min(1.0, max(-1.0, expectation))
    p = (1.0 + e) / 2.0
    n_plus = _draw_outcomes(np.full(N, p), rng)
    n_minus = N - n_plus
    return MeasurementRecord(
        Z=(n_plus - n_minus) / N,
        zeta=1.0 / math.sqrt(N),
        tau_effective=tau_effective,
        n_plus=n_plus,
        n_minus=n_minus,
    )


def _rotation_error_batch(
    params: SystemParams, spec: CircuitSpec, err: RotationError, rng
) -> np.ndarray:
    """Per-execution <Z> values for N independent angle-error draws."""
    draws = rng.normal(0.0, err.epsilon, size=(spec.N, 2))
    H = build_H(params)
    U = propagator(H, spec.tau)
    R_e = rotation_electron(math.pi)
    R_f = rotation_electron(math.pi / 2.0)
    rho0 = initial_state(params.q_z)

    half = math.pi / 2.0 + draws  # rotation half-angles (pi + 2 eps)/2
    c, s = np.cos(half), np.sin(half)
    R_ab = np.tile(np.eye(4, dtype=complex), (spec.N, 2, 1, 1))
    R_ab[..., 2, 2] = c
    R_ab[..., 2, 3] = -s
    R_ab[..., 3, 2] = s
    R_ab[..., 3, 3] = c
    if spec.use_finite_pulses:
        U_a, U_b = _pulse_pair(params, spec.tau_n, spec.omega_R)
        # residual miscalibration applied on top of the cached ideal pulse
        R_err = np.tile(np.eye(4, dtype=complex), (spec.N, 2, 1, 1))
        R_err[..., 2, 2] = np.cos(draws)
        R_err[..., 2, 3] = -np.sin(draws)
        R_err[..., 3, 2] = np.sin(draws)
        R_err[..., 3, 3] = np.cos(draws)
        R_ab = np.stack(
            [R_err[:, 0] @ U_a, R_err[:, 1] @ U_b], axis=1
        )

    left = R_f @ U
    inner = R_ab[:, 1] @ R_e @ R_ab[:, 0]
    M = left @ inner @ U
    W = M @ rho0 @ np.conj(np.swapaxes(M, -1, -2))
    zdiag = np.array([1.0, 1.0, -1.0, -1.0])
    return np.einsum("d,ndd->n", zdiag, W).real


def measure_circuit(
    params: SystemParams,
    spec: CircuitSpec,
    err,
    rng: np.random.Generator,
) -> MeasurementRecord:
    """N-repetition measurement producing one estimator record.

    Deterministic error models evaluate <Z> once and draw N outcomes;
    RotationError draws fresh angle errors per execution (the RNG stream
    is consumed as N*2 normals followed by N uniforms).
    """
    if isinstance(err, RotationError):
        z_values = _rotation_error_batch(params, spec, err, rng)
        p = np.clip((1.0 + z_values) / 2.0, 0.0, 1.0)
        n_plus = _draw_outcomes(p, rng)
        n_minus = spec.N - n_plus
        return MeasurementRecord(
            Z=(n_plus - n_minus) / spec.N,
            zeta=1.0 / math.sqrt(spec.N),
            tau_effective=spec.tau_effective,
            n_plus=n_plus,
            n_minus=n_minus,
        )
    z = run_circuit_exact(params, spec, err)
    return sample_estimator(z, spec.N, rng, tau_effective=spec.tau_effective)
