"""Adaptive Bayesian estimation of a hyperfine coupling on a two-qubit
register (electron + nucleus) with spin-echo readout.

The package simulates the full system Hamiltonian exactly, models the
interferometric estimation circuit under ideal, rotation-error, and
decoherence conditions, and drives an adaptive measurement schedule
whose precision tracks the quantum metrology limit.
"""
from .bayes import (
    ConstraintError,
    ConstraintReport,
    GaussianKnowledge,
    NoFeasibleTau,
    SchedulerConfig,
    VisibilityUnderflow,
    bayes_update,
    check_constraints,
    choose_tau,
    knowledge_from_measurement,
)
from .circuit import (
    CircuitSpec,
    Decoherence,
    ErrorModel,
    Ideal,
    MeasurementRecord,
    RotationError,
    analytic_expectation,
    dqc1_expectation,
    expectation_X_no_echo,
    measure_circuit,
    run_circuit_exact,
    sample_estimator,
)
from .config import ConfigError, Settings, echo_config, load_config, parse_config
from .evolution import (
    DissipationParams,
    OffResonance,
    PulseSpec,
    StepSizeUnderflow,
    lindblad_evolve,
    propagator,
    pulse_propagator,
    resonant_carrier,
    rotation_electron,
    rotation_nuclear_controlled,
)
from .kernels import BACKEND
from .protocol import (
    PrecisionTrace,
    RunConfig,
    StepRecord,
    TrialEnsemble,
    achieved_precision,
    qml_reference,
    run_ensemble,
    run_estimation,
    sql_reference,
)
from .spin_system import (
    DegenerateDenominator,
    SystemParams,
    build_H,
    build_H0,
    build_H_echoed,
    build_Hmix,
    d_prime,
    delta_shift,
    eta,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "__version__",
    # spin system
    "SystemParams",
    "DegenerateDenominator",
    "build_H0",
    "build_Hmix",
    "build_H",
    "build_H_echoed",
    "d_prime",
    "eta",
    "delta_shift",
    # evolution
    "DissipationParams",
    "PulseSpec",
    "StepSizeUnderflow",
    "OffResonance",
    "propagator",
    "lindblad_evolve",
    "pulse_propagator",
    "resonant_carrier",
    "rotation_electron",
    "rotation_nuclear_controlled",
    # circuit
    "CircuitSpec",
    "MeasurementRecord",
    "Ideal",
    "RotationError",
    "Decoherence",
    "ErrorModel",
    "dqc1_expectation",
    "expectation_X_no_echo",
    "run_circuit_exact",
    "analytic_expectation",
    "sample_estimator",
    "measure_circuit",
    # knowledge / scheduling
    "GaussianKnowledge",
    "SchedulerConfig",
    "ConstraintReport",
    "ConstraintError",
    "NoFeasibleTau",
    "VisibilityUnderflow",
    "knowledge_from_measurement",
    "bayes_update",
    "choose_tau",
    "check_constraints",
    # protocol
    "RunConfig",
    "StepRecord",
    "PrecisionTrace",
    "TrialEnsemble",
    "run_estimation",
    "run_ensemble",
    "qml_reference",
    "sql_reference",
    "achieved_precision",
    # configuration
    "ConfigError",
    "Settings",
    "load_config",
    "parse_config",
    "echo_config",
]
