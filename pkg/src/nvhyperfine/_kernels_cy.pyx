# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled fixed-step RK4 kernels (4x4 complex), twin of _kernels_py."""
import numpy as np

from libc.math cimport cos, sin


cdef inline void _rhs_schrod(double complex[4][4] H, double complex[4][4] U,
                             double omega_R, double carrier, double t,
                             double complex[4][4] out) noexcept nogil:
    cdef int i, j, k
    cdef double complex acc, v32
    for i in range(4):
        for j in range(4):
            acc = 0
            for k in range(4):
                acc = acc + H[i][k] * U[k][j]
            out[i][j] = acc
    if omega_R != 0.0:
        v32 = 0.5j * omega_R * (cos(carrier * t) - 1j * sin(carrier * t))
        for j in range(4):
            out[3][j] = out[3][j] + v32 * U[2][j]
            out[2][j] = out[2][j] + v32.conjugate() * U[3][j]
    for i in range(4):
        for j in range(4):
            out[i][j] = -1j * out[i][j]


def schrodinger_pulse_rk4(H, double omega_R, double carrier,
                          double t1, double t2, long n_steps):
    """Propagator for dU/dt = -i(H + V(t))U over [t1, t2], fixed-step RK4."""
    cdef double complex[4][4] Hc, U, k1, k2, k3, k4, tmp
    cdef double h = (t2 - t1) / n_steps
    cdef double t = t1
    cdef long s
    cdef int i, j
    Harr = np.ascontiguousarray(H, dtype=complex)
    cdef double complex[:, :] Hv = Harr
    for i in range(4):
        for j in range(4):
            Hc[i][j] = Hv[i, j]
            U[i][j] = 1.0 if i == j else 0.0
    with nogil:
        for s in range(n_steps):
            _rhs_schrod(Hc, U, omega_R, carrier, t, k1)
            for i in range(4):
                for j in range(4):
                    tmp[i][j] = U[i][j] + 0.5 * h * k1[i][j]
            _rhs_schrod(Hc, tmp, omega_R, carrier, t + 0.5 * h, k2)
            for i in range(4):
                for j in range(4):
                    tmp[i][j] = U[i][j] + 0.5 * h * k2[i][j]
            _rhs_schrod(Hc, tmp, omega_R, carrier, t + 0.5 * h, k3)
            for i in range(4):
                for j in range(4):
                    tmp[i][j] = U[i][j] + h * k3[i][j]
            _rhs_schrod(Hc, tmp, omega_R, carrier, t + h, k4)
            for i in range(4):
                for j in range(4):
                    U[i][j] = U[i][j] + (h / 6.0) * (
                        k1[i][j] + 2.0 * k2[i][j] + 2.0 * k3[i][j] + k4[i][j])
            t = t + h
    out = np.empty((4, 4), dtype=complex)
    for i in range(4):
        for j in range(4):
            out[i, j] = U[i][j]
    return out


cdef inline void _rhs_lindblad(double complex[4][4] H, double complex[4][4] m,
                               double gamma1, double gamma_phi,
                               double omega_R, double carrier, double t,
                               double complex[4][4] out) noexcept nogil:
    cdef int i, j, k
    cdef double complex acc, v32
    cdef double complex[4][4] Ht
    cdef double zi, zj
    for i in range(4):
        for j in range(4):
            Ht[i][j] = H[i][j]
    if omega_R != 0.0:
        v32 = 0.5j * omega_R * (cos(carrier * t) - 1j * sin(carrier * t))
        Ht[3][2] = Ht[3][2] + v32
        Ht[2][3] = Ht[2][3] + v32.conjugate()
    for i in range(4):
        for j in range(4):
            acc = 0
            for k in range(4):
                acc = acc + Ht[i][k] * m[k][j] - m[i][k] * Ht[k][j]
            out[i][j] = -1j * acc
    if gamma1 != 0.0:
        for i in range(2):
            for j in range(2):
                out[i][j] = out[i][j] + gamma1 * m[i + 2][j + 2]
        for i in range(2, 4):
            for j in range(4):
                out[i][j] = out[i][j] - 0.5 * gamma1 * m[i][j]
        for i in range(4):
            for j in range(2, 4):
                out[i][j] = out[i][j] - 0.5 * gamma1 * m[i][j]
    if gamma_phi != 0.0:
        for i in range(4):
            zi = 1.0 if i < 2 else -1.0
            for j in range(4):
                zj = 1.0 if j < 2 else -1.0
                out[i][j] = out[i][j] + 0.5 * gamma_phi * (zi * zj - 1.0) * m[i][j]


def lindblad_rk4(rho, H, double gamma1, double gamma_phi, double omega_R,
                 double carrier, double t1, double t2, long n_steps):
    """Lindblad master equation over [t1, t2], fixed-step RK4.

    Dissipators: electron amplitude damping at rate gamma1 and electron
    pure dephasing at rate gamma_phi; omega_R = 0 turns off the drive.
    """
    cdef double complex[4][4] Hc, r, k1, k2, k3, k4, tmp
    cdef double h = (t2 - t1) / n_steps
    cdef double t = t1
    cdef long s
    cdef int i, j
    Harr = np.ascontiguousarray(H, dtype=complex)
    Rarr = np.ascontiguousarray(rho, dtype=complex)
    cdef double complex[:, :] Hv = Harr
    cdef double complex[:, :] Rv = Rarr
    for i in range(4):
        for j in range(4):
            Hc[i][j] = Hv[i, j]
            r[i][j] = Rv[i, j]
    with nogil:
        for s in range(n_steps):
            _rhs_lindblad(Hc, r, gamma1, gamma_phi, omega_R, carrier, t, k1)
            for i in range(4):
                for j in range(4):
                    tmp[i][j] = r[i][j] + 0.5 * h * k1[i][j]
            _rhs_lindblad(Hc, tmp, gamma1, gamma_phi, omega_R, carrier,
                          t + 0.5 * h, k2)
            for i in range(4):
                for j in range(4):
                    tmp[i][j] = r[i][j] + 0.5 * h * k2[i][j]
            _rhs_lindblad(Hc, tmp, gamma1, gamma_phi, omega_R, carrier,
                          t + 0.5 * h, k3)
            for i in range(4):
                for j in range(4):
                    tmp[i][j] = r[i][j] + h * k3[i][j]
            _rhs_lindblad(Hc, tmp, gamma1, gamma_phi, omega_R, carrier,
                          t + h, k4)
            for i in range(4):
                for j in range(4):
                    r[i][j] = r[i][j] + (h / 6.0) * (
                        k1[i][j] + 2.0 * k2[i][j] + 2.0 * k3[i][j] + k4[i][j])
            t = t + h
    out = np.empty((4, 4), dtype=complex)
    for i in range(4):
        for j in range(4):
            out[i, j] = r[i][j]
    return out
