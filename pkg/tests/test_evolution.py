"""Propagators, dissipative evolution, and driven pulse windows."""
import math

import numpy as np
import pytest

from nvhyperfine.constants import TWO_PI
from nvhyperfine.evolution import (
    DissipationParams,
    OffResonance,
    PulseSpec,
    StepSizeUnderflow,
    lindblad_evolve,
    lindblad_pulse_evolve,
    propagator,
    pulse_propagator,
    resonant_carrier,
    rotation_electron,
    rotation_nuclear_controlled,
)
from nvhyperfine.spin_system import SystemParams, build_H

OMEGA_RES_RAD_US = 24.4787980665  # frozen, default parameter point


def _coherent_state():
    psi = np.array([1.0, 0.0, 1.0, 0.0], dtype=complex) / math.sqrt(2.0)
    return np.outer(psi, psi.conj())


class TestPropagator:
    """Unitary free evolution."""

    def test_matches_expm(self):
        from scipy.linalg import expm

        H = build_H(SystemParams())
        np.testing.assert_allclose(
            propagator(H, 0.37), expm(-1j * H * 0.37), atol=1e-10
        )

    def test_group_property(self):
        H = build_H(SystemParams())
        np.testing.assert_allclose(
            propagator(H, 0.2) @ propagator(H, 0.5),
            propagator(H, 0.7),
            atol=1e-12,
        )

    def test_unitary(self):
        U = propagator(build_H(SystemParams()), 3.0)
        np.testing.assert_allclose(U @ U.conj().T, np.eye(4), atol=1e-12)

    def test_rejects_negative_tau(self):
        with pytest.raises(ValueError):
            propagator(build_H(SystemParams()), -0.1)


class TestDissipationParams:
    """Rate bookkeeping."""

    def test_rates(self):
        d = DissipationParams(T1=5.9e3, T2=350.0)
        np.testing.assert_allclose(d.gamma1, 1.0 / 5.9e3)
        np.testing.assert_allclose(d.gamma_phi, 1.0 / 350.0 - 0.5 / 5.9e3)

    def test_rejects_t2_above_2t1(self):
        with pytest.raises(ValueError):
            DissipationParams(T1=100.0, T2=201.0)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            DissipationParams(T1=0.0, T2=10.0)


class TestLindbladEvolve:
    """Dissipative free evolution."""

    def test_coherence_decays_at_1_over_t2(self):
        # with H = 0 the electron coherence envelope is exactly exp(-t/T2)
        diss = DissipationParams(T1=5.9e3, T2=350.0)
        rho = _coherent_state()
        for t in (10.0, 50.0, 200.0):
            out = lindblad_evolve(rho, np.zeros((4, 4)), diss, t, method="expm")
            np.testing.assert_allclose(
                abs(out[0, 2]) / abs(rho[0, 2]), math.exp(-t / 350.0), rtol=1e-9
            )

    def test_population_relaxes_at_1_over_t1(self):
        diss = DissipationParams(T1=100.0, T2=150.0)
        rho = np.diag([0.0, 0.0, 1.0, 0.0]).astype(complex)
        out = lindblad_evolve(rho, np.zeros((4, 4)), diss, 40.0, method="expm")
        np.testing.assert_allclose(out[2, 2].real, math.exp(-0.4), rtol=1e-9)
        np.testing.assert_allclose(out[0, 0].real, 1.0 - math.exp(-0.4), rtol=1e-9)

    def test_rk4_matches_expm(self):
        diss = DissipationParams(T1=5.9e3, T2=350.0)
        H = build_H(SystemParams())
        rho = _coherent_state()
        a = lindblad_evolve(rho, H, diss, 0.01, method="rk4")
        b = lindblad_evolve(rho, H, diss, 0.01, method="expm")
        np.testing.assert_allclose(a, b, atol=1e-9)

    def test_auto_switches_to_expm_for_long_tau(self):
        # step <= 2*pi/||H||/1000 makes rk4 infeasible at tau ~ 50 us
        diss = DissipationParams(T1=5.9e3, T2=350.0)
        H = build_H(SystemParams())
        rho = _coherent_state()
        np.testing.assert_allclose(
            lindblad_evolve(rho, H, diss, 50.0, method="auto"),
            lindblad_evolve(rho, H, diss, 50.0, method="expm"),
            atol=0.0,
        )

    def test_trace_and_positivity(self):
        diss = DissipationParams(T1=5.9e3, T2=350.0)
        H = build_H(SystemParams())
        out = lindblad_evolve(_coherent_state(), H, diss, 123.0)
        np.testing.assert_allclose(np.trace(out).real, 1.0, atol=1e-10)
        evals = np.linalg.eigvalsh(out)
        assert np.all(evals > -1e-10)

    def test_step_size_underflow(self):
        diss = DissipationParams(T1=1e-3, T2=5e-7)
        with pytest.raises(StepSizeUnderflow):
            lindblad_evolve(_coherent_state(), np.zeros((4, 4)), diss, 1.0,
                            method="rk4")


class TestPulsePropagator:
    """Driven |1,up> <-> |1,down> window."""

    def test_resonant_carrier_frozen(self):
        np.testing.assert_allclose(
            resonant_carrier(SystemParams()), OMEGA_RES_RAD_US, rtol=1e-10
        )

    def test_off_resonance_rejected(self):
        p = SystemParams()
        pulse = PulseSpec(
            t1=-1.0, t2=0.0, omega_R=math.pi,
            carrier=resonant_carrier(p) + 10.0,
        )
        with pytest.raises(OffResonance):
            pulse_propagator(p, pulse)

    def test_unitary(self):
        p = SystemParams()
        pulse = PulseSpec(-1.0, 0.0, math.pi, resonant_carrier(p))
        U = pulse_propagator(p, pulse)
        np.testing.assert_allclose(U @ U.conj().T, np.eye(4), atol=1e-8)

    def test_pi_area_transfers_population(self):
        # pi pulse: |1,up> -> |1,down> up to counter-rotating corrections
        p = SystemParams()
        pulse = PulseSpec(-1.0, 0.0, math.pi, resonant_carrier(p))
        U = pulse_propagator(p, pulse)
        assert abs(U[3, 2]) ** 2 > 1.0 - 2e-2
        # ground-electron states are spectators
        assert abs(U[0, 0]) ** 2 > 1.0 - 1e-4
        assert abs(U[1, 1]) ** 2 > 1.0 - 1e-4

    def test_lindblad_pulse_preserves_trace(self):
        p = SystemParams()
        diss = DissipationParams(T1=5.9e3, T2=350.0)
        pulse = PulseSpec(0.0, 0.01, math.pi / 0.01, resonant_carrier(p))
        out = lindblad_pulse_evolve(_coherent_state(), p, diss, pulse)
        np.testing.assert_allclose(np.trace(out).real, 1.0, atol=1e-9)


class TestRotations:
    """Instantaneous rotation conventions."""

    def test_electron_pi_swaps_manifolds(self):
        R = rotation_electron(math.pi)
        np.testing.assert_allclose(R[2, 0], 1.0, atol=1e-15)
        np.testing.assert_allclose(R[0, 2], -1.0, atol=1e-15)

    def test_controlled_acts_only_on_excited_block(self):
        R = rotation_nuclear_controlled(1.2)
        np.testing.assert_allclose(R[:2, :2], np.eye(2), atol=1e-15)
        assert np.all(R[:2, 2:] == 0.0) and np.all(R[2:, :2] == 0.0)

    def test_controlled_2pi_is_block_sign_flip(self):
        R = rotation_nuclear_controlled(2.0 * math.pi)
        np.testing.assert_allclose(R, np.diag([1, 1, -1, -1]), atol=1e-12)

    def test_echo_sandwich_uncontrols_the_rotation(self):
        # R~(pi) Re(pi) R~(pi) = Re(pi) (I x Ry(pi)): the electron pi echo
        # turns two controlled pulses into one unconditional nuclear flip
        Rt = rotation_nuclear_controlled(math.pi)
        Re = rotation_electron(math.pi)
        Ry = np.array([[0.0, -1.0], [1.0, 0.0]], dtype=complex)
        np.testing.assert_allclose(
            Rt @ Re @ Rt, Re @ np.kron(np.eye(2), Ry), atol=1e-12
        )
