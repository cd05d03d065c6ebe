"""Two-qubit NV Hamiltonians and perturbative quantities.

Basis ordering is fixed throughout the package: |0,up>, |0,down>, |1,up>,
|1,down> (electron qubit tensor nuclear qubit). All quoted frequencies are
ordinary (MHz, GHz); Hamiltonian matrix entries are angular (rad/us), i.e.
multiplied by 2*pi at construction.
"""
from dataclasses import dataclass

import numpy as np

from .constants import CONSTANTS, TWO_PI

__all__ = [
    "SystemParams",
    "DegenerateDenominator",
    "build_H0",
    "build_Hmix",
    "build_H",
    "build_H_echoed",
    "eta",
    "delta_shift",
    "d_prime",
    "nuclear_zeeman",
]

# basis indices
IDX_0U, IDX_0D, IDX_1U, IDX_1D = 0, 1, 2, 3

SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])


class DegenerateDenominator(ValueError):
    """Perturbation theory invalid: |D' + gN*muN*B - A/2| too close to A_perp."""


@dataclass(frozen=True)
class SystemParams:
    """Physical parameters of the electron-nuclear register.

    A and A_perp in MHz, D in GHz, B in tesla; g-factors and q_z
    dimensionless with |q_z| <= 1.
    """

    A: float = 3.03
    A_perp: float = 3.65
    D: float = 2.87
    B: float = 0.2
    g_e: float = 2.0023
    g_N: float = -0.5664
    q_z: float = 0.0

    def __post_init__(self) -> None:
        if abs(self.q_z) > 1.0:
            raise ValueError(f"q_z must lie in [-1, 1], got {self.q_z}")
        if self.A_perp < 0.0:
            raise ValueError(f"A_perp must be non-negative, got {self.A_perp}")
        if self.B < 0.0:
            raise ValueError(f"B must be non-negative, got {self.B}")


def d_prime(params: SystemParams) -> float:
    """Effective electron splitting D' = D - g_e*mu_B*B, in MHz."""
    return params.D * 1e3 - params.g_e * CONSTANTS.mu_B * params.B


def nuclear_zeeman(params: SystemParams) -> float:
    """Nuclear Zeeman frequency g_N*mu_N*B, in MHz."""
    return params.g_N * CONSTANTS.mu_N * params.B


def build_H0(params: SystemParams) -> np.ndarray:
    """Diagonal Hamiltonian: nuclear Zeeman plus conditional electron splitting."""
    g = nuclear_zeeman(params)
    dp = d_prime(params)
    diag = np.array(
        [
            g / 2.0,
            -g / 2.0,
            g / 2.0 + dp - params.A / 2.0,
            -g / 2.0 + dp + params.A / 2.0,
        ]
    )
    return np.diag(TWO_PI * diag).astype(complex)


def build_Hmix(params: SystemParams) -> np.ndarray:
    """Off-diagonal hyperfine coupling between |0,down> and |1,up>."""
    H = np.zeros((4, 4), dtype=complex)
    coupling = TWO_PI * params.A_perp / np.sqrt(2.0)
    H[IDX_0D, IDX_1U] = coupling
    H[IDX_1U, IDX_0D] = coupling
    return H


def build_H(params: SystemParams) -> np.ndarray:
    """Full two-qubit Hamiltonian H0 + Hmix, in rad/us."""
    return build_H0(params) + build_Hmix(params)


def build_H_echoed(params: SystemParams) -> np.ndarray:
    """Spin-echo partner Hamiltonian sigma_y Y H Y sigma_y.

    Computed by explicit conjugation with Y tensor sigma_y; its diagonal is
    the echoed free Hamiltonian whose sum with H0 leaves only the hyperfine
    term |1><1| (x) (-A sigma_z).
    """
    P = np.kron(SIGMA_Y, SIGMA_Y)
    return P @ build_H(params) @ P


def eta(params: SystemParams) -> float:
    """Perturbation parameter A_perp / (D' + gN*muN*B - A/2), dimensionless."""
    den = d_prime(params) + nuclear_zeeman(params) - params.A / 2.0
    if abs(den) < max(10.0 * params.A_perp, 1e-12):
        raise DegenerateDenominator(
            f"|D' + gN*muN*B - A/2| = {abs(den):.6g} MHz is below "
            f"10*A_perp = {10.0 * params.A_perp:.6g} MHz"
        )
    return params.A_perp / den


def delta_shift(params: SystemParams) -> float:
    """Second-order energy shift delta = eta*A_perp/2 of |1,up>, in MHz."""
    return eta(params) * params.A_perp / 2.0
