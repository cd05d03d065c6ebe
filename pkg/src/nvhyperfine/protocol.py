"""Adaptive estimation loop: schedule, measure, update, repeat.

Each step measures at a resonance point of the current best estimate,
turns the estimator average into linearized Gaussian knowledge, and
fuses it with the prior. Reference precisions (QML, SQL, achieved) are
tracked per step from the same durations.
"""
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .bayes import (
    ConstraintReport,
    GaussianKnowledge,
    NoFeasibleTau,
    SchedulerConfig,
    bayes_update,
    choose_tau,
    check_constraints,
    knowledge_from_measurement,
)
from .circuit import (
    CircuitSpec,
    Decoherence,
    ErrorModel,
    Ideal,
    MeasurementRecord,
    analytic_expectation,
    measure_circuit,
)
from .constants import TWO_PI
from .spin_system import SystemParams

__all__ = [
    "RunConfig",
    "StepRecord",
    "PrecisionTrace",
    "TrialEnsemble",
    "run_estimation",
    "run_ensemble",
    "qml_reference",
    "sql_reference",
    "achieved_precision",
]


@dataclass(frozen=True)
class RunConfig:
    """Full description of one estimation run.

    true_A is the value being estimated (MHz); system.A is only the
    nominal parameter and is overridden by true_A in the simulated
    circuit. scheduler.zeta must equal 1/sqrt(N).
    """

    true_A: float
    prior: GaussianKnowledge
    scheduler: SchedulerConfig
    N: int = 1000
    K_max: int = 6
    target_std: float | None = None
    error_model: ErrorModel = field(default_factory=Ideal)
    system: SystemParams = field(default_factory=SystemParams)
    tau_n: float = 1.0
    rabi: float = 500.0
    use_finite_pulses: bool = False
    noiseless: bool = False
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.true_A <= 0.0:
            raise ValueError("true_A must be positive")
        if self.K_max < 1:
            raise ValueError("K_max must be at least 1")
        zeta = 1.0 / math.sqrt(self.N)
        if abs(self.scheduler.zeta - zeta) > 1e-12 * zeta:
            raise ValueError(
                f"scheduler.zeta = {self.scheduler.zeta} inconsistent with "
                f"1/sqrt(N) = {zeta}"
            )


@dataclass(frozen=True)
class StepRecord:
    """One estimation step; tau is the effective phase duration in us."""

    k: int
    tau: float
    m: int
    Z: float
    A: float
    Delta: float
    Q: float
    R: float
    Delta_QML: float
    Delta_SQL: float
    repeated_tau: bool
    constraints: ConstraintReport


@dataclass(frozen=True)
class PrecisionTrace:
    """Per-step history of one run."""

    true_A: float
    prior: GaussianKnowledge
    N: int
    steps: tuple[StepRecord, ...]

    @property
    def taus(self) -> np.ndarray:
        return np.array([s.tau for s in self.steps])

    @property
    def deltas(self) -> np.ndarray:
        return np.array([s.Delta for s in self.steps])

    @property
    def final(self) -> GaussianKnowledge:
        last = self.steps[-1]
        return GaussianKnowledge(mean=last.A, std=last.Delta)

    def covers_truth(self, z: float = 1.96) -> bool:
        last = self.steps[-1]
        return abs(last.A - self.true_A) <= z * last.Delta


@dataclass(frozen=True)
class TrialEnsemble:
    """Independent repetitions of the same run configuration."""

    config: RunConfig
    traces: tuple[PrecisionTrace, ...]

    @property
    def n_steps(self) -> int:
        return min(len(t.steps) for t in self.traces)

    def median_deltas(self) -> np.ndarray:
        K = self.n_steps
        return np.median([t.deltas[:K] for t in self.traces], axis=0)

    def median_qml(self) -> np.ndarray:
        K = self.n_steps
        rows = [
            [s.Delta_QML for s in t.steps[:K]] for t in self.traces
        ]
        return np.median(rows, axis=0)

    def median_sql(self) -> np.ndarray:
        K = self.n_steps
        rows = [
            [s.Delta_SQL for s in t.steps[:K]] for t in self.traces
        ]
        return np.median(rows, axis=0)

    def coverage(self, z: float = 1.96) -> float:
        return float(np.mean([t.covers_truth(z) for t in self.traces]))


def qml_reference(N: int, taus: np.ndarray) -> np.ndarray:
    """Cumulative quantum limit: Delta_QML(k) = 1/(sqrt(N)*2*pi*sum tau)."""
    cum = np.cumsum(np.asarray(taus, dtype=float))
    return 1.0 / (math.sqrt(N) * TWO_PI * cum)

def sql_reference(N: int, taus: np.ndarray) -> np.ndarray:
    """Cumulative shot-noise limit referenced to the first duration."""
    taus = np.asarray(taus, dtype=float)
    cum = np.cumsum(taus)
    return 1.0 / np.sqrt(N * (TWO_PI * taus[0]) * (TWO_PI * cum))

def achieved_precision(
    N: int, taus: np.ndarray, Q_values: np.ndarray
) -> np.ndarray:
    """Cumulative precision of the fused estimate for given visibilities."""
    taus = np.asarray(taus, dtype=float)
    Q = np.asarray(Q_values, dtype=float)
    info = np.cumsum(N * (TWO_PI * Q * taus) ** 2)
    return info ** -0.5


def _scheduler_for(cfg: RunConfig) -> SchedulerConfig:
    """Apply error-model-driven bounds on top of the configured scheduler."""
    sched = cfg.scheduler
    if isinstance(cfg.error_model, Decoherence):
        cap = cfg.error_model.diss.T2 / 2.0
        if sched.tau_cap is None or sched.tau_cap > cap:
            sched = replace(sched, tau_cap=cap)
    if cfg.use_finite_pulses and sched.tau_min < cfg.tau_n:
        sched = replace(sched, tau_min=cfg.tau_n)
    return sched


def _measure(
    cfg: RunConfig,
    params: SystemParams,
    tau_eff: float,
    rng: np.random.Generator,
) -> MeasurementRecord:
    zeta = 1.0 / math.sqrt(cfg.N)
    if cfg.use_finite_pulses:
        spec = CircuitSpec(
            tau=tau_eff - cfg.tau_n,
            tau_n=cfg.tau_n,
            N=cfg.N,
            rabi=cfg.rabi,
            use_finite_pulses=True,
        )
    else:
        spec = CircuitSpec(tau=tau_eff, tau_n=0.0, N=cfg.N)
    if cfg.noiseless:
        Z = analytic_expectation(params, spec, cfg.error_model)
        return MeasurementRecord(
            Z=Z,
            zeta=zeta,
            tau_effective=spec.tau_effective,
            n_plus=cfg.N,
            n_minus=0,
        )
    return measure_circuit(params, spec, cfg.error_model, rng)


def run_estimation(
    cfg: RunConfig, rng: np.random.Generator | None = None
) -> PrecisionTrace:
    """Run the adaptive loop; stops at K_max or once target_std is reached.

    When no grid point is feasible after the first step the previous
    duration is repeated and the step is flagged; at the first step the
    scheduler error propagates.
    """
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    params = replace(cfg.system, A=cfg.true_A)
    sched = _scheduler_for(cfg)
    Q_model = (
        cfg.error_model.visibility
        if isinstance(cfg.error_model, Decoherence)
        else None
    )
    zeta = 1.0 / math.sqrt(cfg.N)

    knowledge = cfg.prior
    steps: list[StepRecord] = []
    taus: list[float] = []
    R = 0.0
    for k in range(1, cfg.K_max + 1):
        repeated = False
        try:
            tau_k, m_k = choose_tau(knowledge, sched, Q_model=Q_model)
        except NoFeasibleTau:
            if not steps:
                raise
            tau_k, m_k = steps[-1].tau, steps[-1].m
            repeated = True
        Q_k = cfg.error_model.visibility(tau_k)
        report = check_constraints(knowledge, tau_k, sched, Q_k)
        record = _measure(cfg, params, tau_k, rng)
        meas = knowledge_from_measurement(record, knowledge.mean, tau_k, Q_k)
        knowledge = bayes_update(knowledge, meas)

        taus.append(tau_k)
        R += cfg.N * 2.0 * tau_k
        steps.append(
            StepRecord(
                k=k,
                tau=tau_k,
                m=m_k,
                Z=record.Z,
                A=knowledge.mean,
                Delta=knowledge.std,
                Q=Q_k,
                R=R,
                Delta_QML=float(qml_reference(cfg.N, taus)[-1]),
                Delta_SQL=float(sql_reference(cfg.N, taus)[-1]),
                repeated_tau=repeated,
                constraints=report,
            )
        )
        if cfg.target_std is not None and knowledge.std <= cfg.target_std:
            break

    return PrecisionTrace(
        true_A=cfg.true_A, prior=cfg.prior, N=cfg.N, steps=tuple(steps)
    )


def run_ensemble(cfg: RunConfig, trials: int) -> TrialEnsemble:
    """Independent trials with generators spawned from cfg.seed."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    seqs = np.random.SeedSequence(cfg.seed).spawn(trials)
    traces = tuple(
        run_estimation(cfg, rng=np.random.default_rng(s)) for s in seqs
    )
    return TrialEnsemble(config=cfg, traces=traces)
