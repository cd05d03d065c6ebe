"""Pure-python fallback for the fixed-step RK4 integration kernels.

Semantics identical to the compiled backend (_kernels_cy): same stepping,
same drive term, same dissipators. The compiled module is preferred at
import time; this one keeps the package functional without a C toolchain.
"""
import numpy as np

# drive couples |1,up> (index 2) <-> |1,down> (index 3)
_ZDIAG = np.array([1.0, 1.0, -1.0, -1.0])


def _drive_apply(out, src, omega_R, carrier, t):
    """out += V(t) @ src with V(t) the circularly polarized nuclear drive."""
    phase = complex(np.cos(carrier * t), -np.sin(carrier * t))
    v32 = 0.5j * omega_R * phase
    out[3, :] += v32 * src[2, :]
    out[2, :] += np.conj(v32) * src[3, :]


def schrodinger_pulse_rk4(H, omega_R, carrier, t1, t2, n_steps):
    """Propagator for dU/dt = -i(H + V(t))U over [t1, t2], fixed-step RK4."""
    h = (t2 - t1) / n_steps
    U = np.eye(4, dtype=complex)

    def rhs(t, M):
        out = H @ M
        if omega_R != 0.0:
            _drive_apply(out, M, omega_R, carrier, t)
        return -1j * out

    t = t1
    for _ in range(n_steps):
        k1 = rhs(t, U)
        k2 = rhs(t + 0.5 * h, U + 0.5 * h * k1)
        k3 = rhs(t + 0.5 * h, U + 0.5 * h * k2)
        k4 = rhs(t + h, U + h * k3)
        U = U + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t += h
    return U


def lindblad_rk4(rho, H, gamma1, gamma_phi, omega_R, carrier, t1, t2, n_steps):
    """Lindblad master equation over [t1, t2], fixed-step RK4.

    Dissipators: electron amplitude damping at rate gamma1 (jump
    |0><1| x I) and electron pure dephasing at rate gamma_phi (jump
    sqrt(gamma_phi/2) Z x I). omega_R = 0 turns off the drive.
    """
    h = (t2 - t1) / n_steps
    r = np.array(rho, dtype=complex)

    def rhs(t, m):
        Ht = np.array(H)
        if omega_R != 0.0:
            phase = complex(np.cos(carrier * t), -np.sin(carrier * t))
            v32 = 0.5j * omega_R * phase
            Ht[3, 2] += v32
            Ht[2, 3] += np.conj(v32)
        out = -1j * (Ht @ m - m @ Ht)
        if gamma1 != 0.0:
            damp = np.zeros((4, 4), dtype=complex)
            damp[0:2, 0:2] = m[2:4, 2:4]
            damp[2:4, :] -= 0.5 * m[2:4, :]
            damp[:, 2:4] -= 0.5 * m[:, 2:4]
            out += gamma1 * damp
        if gamma_phi != 0.0:
            zz = np.outer(_ZDIAG, _ZDIAG)
            out += 0.5 * gamma_phi * (zz - 1.0) * m
        return out

    t = t1
    for _ in range(n_steps):
        k1 = rhs(t, r)
        k2 = rhs(t + 0.5 * h, r + 0.5 * h * k1)
        k3 = rhs(t + 0.5 * h, r + 0.5 * h * k2)
        k4 = rhs(t + h, r + h * k3)
        r = r + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t += h
    return r
