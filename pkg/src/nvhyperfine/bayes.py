"""Gaussian knowledge updates and the adaptive tau scheduler.

Measurements at the resonance points 2*pi*A_{k-1}*tau = pi/2 + 2*m*pi
linearize to Gaussian knowledge; knowledge fuses by inverse-variance
weighting. The scheduler picks the resonance grid point nearest
tau* = c/(2*pi*Delta_{k-1}), i.e. the largest usable m with phase
dispersion approximately c, subject to an optional cap (T2/2 under
decoherence) and an optional lower bound (finite pulse duration).
"""
import math
from dataclasses import dataclass

import numpy as np

from .circuit import MeasurementRecord
from .constants import TWO_PI

__all__ = [
    "GaussianKnowledge",
    "SchedulerConfig",
    "ConstraintReport",
    "NoFeasibleTau",
    "VisibilityUnderflow",
    "ConstraintError",
    "knowledge_from_measurement",
    "bayes_update",
    "choose_tau",
    "check_constraints",
]

# operational reading of "much greater/much less than"
HARD_RATIO = 5.0
# default O(eta^2) scale (B = 0.2 T reference field)
DEFAULT_ETA_SQ = 2e-6
RESONANCE_TOL = 1e-9


class NoFeasibleTau(ValueError):
    """No resonance grid point satisfies the dispersion bound."""


class VisibilityUnderflow(ValueError):
    """Visibility too small for the linearized estimator to be meaningful."""


class ConstraintError(ValueError):
    """Scheduler configuration violates c >> zeta or c^3 << 6*zeta."""


@dataclass(frozen=True)
class GaussianKnowledge:
    """Knowledge about A as a Gaussian: mean and std in MHz (std may be inf)."""

    mean: float
    std: float

    def __post_init__(self) -> None:
        if not self.std > 0.0:
            raise ValueError(f"std must be positive, got {self.std}")


@dataclass(frozen=True)
class SchedulerConfig:
    """Dispersion target c, per-step estimator deviation zeta, and bounds.

    tau_cap bounds tau from above (T2/2 under decoherence), tau_min from
    below (finite pulse duration); tau_override provides the first-step
    tau when the prior is uninformative (std = inf).
    """

    c: float
    zeta: float
    tau_cap: float | None = None
    tau_min: float = 0.0
    m_max: int = 10_000_000
    tau_override: float | None = None

    def __post_init__(self) -> None:
        if self.c <= 0.0 or self.zeta <= 0.0:
            raise ConstraintError("c and zeta must be positive")
        r1 = self.c / self.zeta
        r2 = 6.0 * self.zeta / self.c**3
        if r1 < HARD_RATIO or r2 < HARD_RATIO:
            raise ConstraintError(
                f"scheduler constants infeasible: c/zeta = {r1:.3f}, "
                f"6*zeta/c^3 = {r2:.3f}; both must be >= {HARD_RATIO}"
            )


@dataclass(frozen=True)
class ConstraintReport:
    """Diagnostics for one estimation step; *_ok use the >=5 ratio rule."""

    resonance_offset: float
    resonance_ok: bool
    taylor_ratio: float
    taylor_ok: bool
    visibility_ratio: float
    visibility_ok: bool
    qml_ratio: float
    qml_ok: bool
    delta_taylor: float

    def all_ok(self) -> bool:
        return (
            self.resonance_ok
            and self.taylor_ok
            and self.visibility_ok
            and self.qml_ok
        )


def knowledge_from_measurement(
    record: MeasurementRecord,
    prior_mean: float,
    tau_k: float,
    Q: float,
    eta_sq: float = DEFAULT_ETA_SQ,
) -> GaussianKnowledge:
    """Linearized Gaussian knowledge from one estimator record.

    mean = prior_mean - Z/(2*pi*Q*tau_k), std = zeta/(2*pi*Q*tau_k),
    with tau_k the effective phase duration in us.
    """
    if Q * tau_k <= 0.0:
        raise ValueError(f"require Q*tau_k > 0, got Q={Q}, tau_k={tau_k}")
    if Q <= 10.0 * eta_sq:
        raise VisibilityUnderflow(
            f"visibility Q = {Q:.3e} is at or below 10*eta^2 = {10 * eta_sq:.3e}"
        )
    scale = TWO_PI * Q * tau_k
    return GaussianKnowledge(
        mean=prior_mean - record.Z / scale, std=record.zeta / scale
    )


def bayes_update(
    prior: GaussianKnowledge, meas: GaussianKnowledge
) -> GaussianKnowledge:
    """Inverse-variance weighted fusion of two Gaussians."""
    if math.isinf(prior.std):
        return meas
    if math.isinf(meas.std):
        return prior
    w_p = prior.std**-2
    w_m = meas.std**-2
    total = w_p + w_m
    return GaussianKnowledge(
        mean=(w_p * prior.mean + w_m * meas.mean) / total,
        std=1.0 / math.sqrt(total),
    )


def _grid_tau(mean: float, m: int) -> float:
    return (m + 0.25) / mean


def choose_tau(
    prior: GaussianKnowledge,
    cfg: SchedulerConfig,
    Q_model=None,
) -> tuple[float, int]:
    """Select the next effective duration on the resonance grid.

    Returns (tau_k, m_k) with 2*pi*prior.mean*tau_k = pi/2 + 2*m_k*pi.
    With a Q_model the selected grid point maximizes Q(tau)*tau over the
    feasible prefix; otherwise the largest feasible m is taken.
    """
    A = prior.mean
    if not A > 0.0:
        raise ValueError(f"prior mean must be positive, got {A}")

    if math.isinf(prior.std):
        if cfg.tau_override is None:
            raise NoFeasibleTau(
                "uninformative prior (std = inf) requires tau_override"
            )
        m = max(0, round(A * cfg.tau_override - 0.25))
    else:
        if TWO_PI * prior.std * _grid_tau(A, 0) > cfg.c:
            raise NoFeasibleTau(
                f"dispersion at m = 0 is "
                f"{TWO_PI * prior.std * _grid_tau(A, 0):.4f} > c = {cfg.c}; "
                "prior too broad for any half-period"
            )
        tau_star = cfg.c / (TWO_PI * prior.std)
        m = max(0, round(A * tau_star - 0.25))

    if cfg.tau_cap is not None and _grid_tau(A, m) > cfg.tau_cap:
        m = math.floor(A * cfg.tau_cap - 0.25)
        if m < 0:
            raise NoFeasibleTau(
                f"tau_cap = {cfg.tau_cap} us is below the first grid point"
            )
    if cfg.tau_min > 0.0 and _grid_tau(A, m) < cfg.tau_min:
        m = math.ceil(A * cfg.tau_min - 0.25)
        if math.isfinite(prior.std):
            # a forced bump may overshoot the target dispersion c, but not
            # so far that the linearization (Taylor) constraint breaks
            disp = TWO_PI * prior.std * _grid_tau(A, m)
            if disp**3 / 6.0 > cfg.zeta / HARD_RATIO:
                raise NoFeasibleTau(
                    f"tau_min = {cfg.tau_min} us forces dispersion "
                    f"{disp:.4f}, beyond the linearization limit"
                )
    m = min(m, cfg.m_max)

    if Q_model is not None and math.isfinite(prior.std):
        ms = np.arange(m + 1)
        taus = (ms + 0.25) / A
        if cfg.tau_min > 0.0:
            first = math.ceil(A * cfg.tau_min - 0.25)
            ms, taus = ms[first:], taus[first:]
        gains = np.array([Q_model(t) for t in taus]) * taus
        best = int(np.argmax(gains))
        m = int(ms[best])

    return _grid_tau(A, m), int(m)


def check_constraints(
    prior: GaussianKnowledge,
    tau: float,
    cfg: SchedulerConfig,
    Q: float,
    eta_sq: float = DEFAULT_ETA_SQ,
) -> ConstraintReport:
    """Diagnostics for resonance, Taylor remainder, visibility, QML regime."""
    phase = TWO_PI * prior.mean * tau - math.pi / 2.0
    offset = math.remainder(phase, TWO_PI)
    disp = TWO_PI * prior.std * tau if math.isfinite(prior.std) else math.inf
    remainder = disp**3 / 6.0
    taylor_ratio = cfg.zeta / remainder if remainder > 0.0 else math.inf
    visibility_ratio = Q * disp / eta_sq
    qml_ratio = disp * Q / cfg.zeta
    return ConstraintReport(
        resonance_offset=offset,
        resonance_ok=abs(offset) < RESONANCE_TOL,
        taylor_ratio=taylor_ratio,
        taylor_ok=taylor_ratio >= HARD_RATIO,
        visibility_ratio=visibility_ratio,
        visibility_ok=visibility_ratio >= HARD_RATIO,
        qml_ratio=qml_ratio,
        qml_ok=qml_ratio >= HARD_RATIO,
        delta_taylor=Q * disp**3 / 6.0,
    )
