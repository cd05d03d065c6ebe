"""Physical constants in frequency-per-tesla units."""
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi

# Bohr magneton / h, in MHz/T (CODATA 13.996 GHz/T)
MU_B_MHZ_PER_T = 13.996e3
# nuclear magneton / h, in MHz/T (CODATA 7.6226 MHz/T)
MU_N_MHZ_PER_T = 7.6226


@dataclass(frozen=True)
class PhysicalConstants:
    """Magnetic moments in MHz/T and the angular conversion factor.

    The ratio mu_B/mu_N equals the proton/electron mass ratio 1836.15
    to within 0.1%.
    """

    mu_B: float = MU_B_MHZ_PER_T
    mu_N: float = MU_N_MHZ_PER_T
    two_pi: float = TWO_PI


CONSTANTS = PhysicalConstants()
