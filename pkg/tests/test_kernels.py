"""Compiled and pure-Python integration kernels agree."""
import numpy as np
import pytest

from nvhyperfine import _kernels_py
from nvhyperfine import kernels

cy = pytest.importorskip(
    "nvhyperfine._kernels_cy", reason="compiled extension not built"
)


def _random_hermitian(rng, scale=5.0):
    M = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    return scale * (M + M.conj().T) / 2.0


class TestBackendSelection:
    """The package prefers the compiled kernels when available."""

    def test_backend_reported(self):
        assert kernels.BACKEND in ("cython", "python")

    def test_compiled_preferred(self):
        assert kernels.BACKEND == "cython"


class TestEquivalence:
    """Both backends produce the same trajectories."""

    def test_schrodinger_pulse(self):
        rng = np.random.default_rng(11)
        for _ in range(5):
            H = _random_hermitian(rng)
            args = (H, 3.1, 24.0, -1.0, 0.0, 4000)
            U_py = _kernels_py.schrodinger_pulse_rk4(*args)
            U_cy = cy.schrodinger_pulse_rk4(*args)
            np.testing.assert_allclose(U_cy, U_py, atol=1e-13)

    def test_lindblad(self):
        rng = np.random.default_rng(12)
        for _ in range(5):
            H = _random_hermitian(rng)
            rho = np.eye(4, dtype=complex) / 4.0
            args = (rho, H, 1e-3, 2e-3, 3.1, 24.0, 0.0, 1.0, 4000)
            r_py = _kernels_py.lindblad_rk4(*args)
            r_cy = cy.lindblad_rk4(*args)
            np.testing.assert_allclose(r_cy, r_py, atol=1e-13)


class TestKernelProperties:
    """Structural invariants of the integrators."""

    def test_schrodinger_unitary(self):
        H = _random_hermitian(np.random.default_rng(3))
        U = kernels.schrodinger_pulse_rk4(H, 2.0, 20.0, 0.0, 1.0, 8000)
        np.testing.assert_allclose(U @ U.conj().T, np.eye(4), atol=1e-9)

    def test_zero_drive_matches_free_propagator(self):
        from scipy.linalg import expm

        H = _random_hermitian(np.random.default_rng(4), scale=2.0)
        U = kernels.schrodinger_pulse_rk4(H, 0.0, 20.0, 0.0, 0.7, 8000)
        np.testing.assert_allclose(U, expm(-1j * H * 0.7), atol=1e-9)

    def test_lindblad_trace_and_hermiticity(self):
        rng = np.random.default_rng(5)
        H = _random_hermitian(rng)
        psi = rng.normal(size=4) + 1j * rng.normal(size=4)
        psi /= np.linalg.norm(psi)
        rho = np.outer(psi, psi.conj())
        out = kernels.lindblad_rk4(rho, H, 1e-2, 3e-2, 1.0, 15.0, 0.0, 2.0, 8000)
        np.testing.assert_allclose(np.trace(out).real, 1.0, atol=1e-10)
        np.testing.assert_allclose(out, out.conj().T, atol=1e-10)

    def test_lindblad_zero_rates_is_unitary_evolution(self):
        from scipy.linalg import expm

        H = _random_hermitian(np.random.default_rng(6), scale=2.0)
        rho = np.diag([0.5, 0.5, 0.0, 0.0]).astype(complex)
        out = kernels.lindblad_rk4(rho, H, 0.0, 0.0, 0.0, 10.0, 0.0, 0.5, 8000)
        U = expm(-1j * H * 0.5)
        np.testing.assert_allclose(out, U @ rho @ U.conj().T, atol=1e-9)
