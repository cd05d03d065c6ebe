"""Backend selection for the RK4 integration kernels.

The compiled extension is used when it imported successfully; set
NVHYPERFINE_PURE_PYTHON=1 to force the pure-python fallback.
"""
import os

if os.environ.get("NVHYPERFINE_PURE_PYTHON") == "1":
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _kernels_cy as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        from . import _kernels_py as _impl

        BACKEND = "python"

schrodinger_pulse_rk4 = _impl.schrodinger_pulse_rk4
lindblad_rk4 = _impl.lindblad_rk4

__all__ = ["BACKEND", "schrodinger_pulse_rk4", "lindblad_rk4"]
