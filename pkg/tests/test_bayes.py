"""Knowledge fusion and the resonance-grid scheduler."""
import math

import numpy as np
import pytest

from nvhyperfine.bayes import (
    ConstraintError,
    GaussianKnowledge,
    NoFeasibleTau,
    SchedulerConfig,
    VisibilityUnderflow,
    bayes_update,
    check_constraints,
    choose_tau,
    knowledge_from_measurement,
)
from nvhyperfine.circuit import MeasurementRecord

ZETA_1000 = 1.0 / math.sqrt(1000.0)
TAU_1 = 3.25 / 3.03  # first grid point of the default prior, 1.0726... us
# frozen pipeline values for the pinned first step (Z = -0.1, Q = 1)
MEAS_STD_1 = 4.6922311593e-3
POSTERIOR_1 = (3.0444838148, 4.6358692835e-3)


def _sched(**kw):
    kw.setdefault("c", 0.2)
    kw.setdefault("zeta", ZETA_1000)
    return SchedulerConfig(**kw)


def _record(Z):
    return MeasurementRecord(
        Z=Z, zeta=ZETA_1000, tau_effective=TAU_1,
        n_plus=int(round(500 * (1 + Z))), n_minus=int(round(500 * (1 - Z))),
    )


class TestGaussianKnowledge:
    """Container invariants."""

    def test_infinite_std_allowed(self):
        assert math.isinf(GaussianKnowledge(3.0, math.inf).std)

    def test_rejects_nonpositive_std(self):
        with pytest.raises(ValueError):
            GaussianKnowledge(3.0, 0.0)


class TestSchedulerConfig:
    """Constant feasibility at construction."""

    def test_reference_constants_accepted(self):
        cfg = _sched()
        np.testing.assert_allclose(cfg.c / cfg.zeta, 6.3246, rtol=1e-4)
        np.testing.assert_allclose(6 * cfg.zeta / cfg.c**3, 23.717, rtol=1e-4)

    def test_rejects_small_c_over_zeta(self):
        with pytest.raises(ConstraintError):
            SchedulerConfig(c=0.2, zeta=0.05)

    def test_rejects_large_c_cubed(self):
        with pytest.raises(ConstraintError):
            SchedulerConfig(c=0.5, zeta=ZETA_1000)


class TestKnowledgeFromMeasurement:
    """Linearized estimator to Gaussian."""

    def test_pinned_first_step(self):
        k = knowledge_from_measurement(_record(-0.1), 3.03, TAU_1, 1.0)
        np.testing.assert_allclose(k.std, MEAS_STD_1, rtol=1e-9)
        np.testing.assert_allclose(
            k.mean, 3.03 + 0.1 / (2 * math.pi * TAU_1), rtol=1e-12
        )

    def test_visibility_underflow(self):
        with pytest.raises(VisibilityUnderflow):
            knowledge_from_measurement(_record(0.0), 3.03, TAU_1, Q=1e-6)

    def test_visibility_scales_std(self):
        k1 = knowledge_from_measurement(_record(0.0), 3.03, TAU_1, Q=1.0)
        k2 = knowledge_from_measurement(_record(0.0), 3.03, TAU_1, Q=0.5)
        np.testing.assert_allclose(k2.std, 2.0 * k1.std, rtol=1e-12)


class TestBayesUpdate:
    """Inverse-variance fusion."""

    def test_pinned_posterior(self):
        prior = GaussianKnowledge(3.03, 0.03)
        meas = knowledge_from_measurement(_record(-0.1), 3.03, TAU_1, 1.0)
        post = bayes_update(prior, meas)
        np.testing.assert_allclose(post.mean, POSTERIOR_1[0], rtol=1e-9)
        np.testing.assert_allclose(post.std, POSTERIOR_1[1], rtol=1e-9)

    def test_commutative(self):
        a = GaussianKnowledge(3.0, 0.01)
        b = GaussianKnowledge(3.1, 0.04)
        ab, ba = bayes_update(a, b), bayes_update(b, a)
        np.testing.assert_allclose(ab.mean, ba.mean, rtol=1e-12)
        np.testing.assert_allclose(ab.std, ba.std, rtol=1e-12)

    def test_associative(self):
        a = GaussianKnowledge(3.0, 0.01)
        b = GaussianKnowledge(3.1, 0.04)
        c = GaussianKnowledge(2.9, 0.002)
        left = bayes_update(bayes_update(a, b), c)
        right = bayes_update(a, bayes_update(b, c))
        np.testing.assert_allclose(left.mean, right.mean, rtol=1e-12)
        np.testing.assert_allclose(left.std, right.std, rtol=1e-12)

    def test_posterior_sharper_than_both(self):
        a = GaussianKnowledge(3.0, 0.01)
        b = GaussianKnowledge(3.02, 0.03)
        post = bayes_update(a, b)
        assert post.std < a.std and post.std < b.std

    def test_infinite_prior_passthrough(self):
        meas = GaussianKnowledge(3.1, 0.02)
        assert bayes_update(GaussianKnowledge(3.0, math.inf), meas) == meas


class TestChooseTau:
    """Resonance-grid selection."""

    def test_snaps_to_m3(self):
        tau, m = choose_tau(GaussianKnowledge(3.03, 0.03), _sched())
        assert m == 3
        np.testing.assert_allclose(tau, TAU_1, rtol=1e-12)

    def test_resonance_identity(self):
        prior = GaussianKnowledge(3.03, 0.03)
        tau, m = choose_tau(prior, _sched())
        phase = 2 * math.pi * prior.mean * tau
        np.testing.assert_allclose(phase, math.pi / 2 + 2 * math.pi * m, rtol=1e-12)

    def test_sharper_prior_grows_tau(self):
        last = 0.0
        for std in (0.03, 0.01, 0.003, 0.001):
            tau, _ = choose_tau(GaussianKnowledge(3.03, std), _sched())
            assert tau > last
            last = tau

    def test_cap_snaps_below(self):
        tau, m = choose_tau(
            GaussianKnowledge(3.06, 1e-4), _sched(tau_cap=175.0)
        )
        assert m == 535
        np.testing.assert_allclose(tau, 535.25 / 3.06, rtol=1e-12)
        assert tau <= 175.0

    def test_m_max_clamps(self):
        tau, m = choose_tau(GaussianKnowledge(3.03, 1e-6), _sched(m_max=10))
        assert m == 10

    def test_broad_prior_infeasible(self):
        with pytest.raises(NoFeasibleTau):
            choose_tau(GaussianKnowledge(3.03, 1.0), _sched())

    def test_infinite_prior_needs_override(self):
        with pytest.raises(NoFeasibleTau):
            choose_tau(GaussianKnowledge(3.03, math.inf), _sched())
        tau, m = choose_tau(
            GaussianKnowledge(3.03, math.inf), _sched(tau_override=1.0)
        )
        assert m == round(3.03 * 1.0 - 0.25)
        np.testing.assert_allclose(tau, (m + 0.25) / 3.03, rtol=1e-12)

    def test_q_model_moves_optimum_to_coherence_peak(self):
        # tau * exp(-2 tau/T2) peaks at T2/2 = 175 us
        tau, m = choose_tau(
            GaussianKnowledge(3.03, 1e-6),
            _sched(),
            Q_model=lambda t: math.exp(-2.0 * t / 350.0),
        )
        assert m == 530
        np.testing.assert_allclose(tau, 530.25 / 3.03, rtol=1e-12)

    def test_tau_min_bumps_up(self):
        tau, m = choose_tau(
            GaussianKnowledge(3.03, 0.03), _sched(tau_min=1.5)
        )
        assert tau >= 1.5 and m == math.ceil(3.03 * 1.5 - 0.25)

    def test_tau_min_beyond_linearization_infeasible(self):
        with pytest.raises(NoFeasibleTau):
            choose_tau(GaussianKnowledge(3.03, 0.03), _sched(tau_min=2.0))


class TestCheckConstraints:
    """Per-step diagnostics."""

    def test_on_resonance_step_passes(self):
        prior = GaussianKnowledge(3.03, 0.03)
        cfg = _sched()
        tau, _ = choose_tau(prior, cfg)
        rep = check_constraints(prior, tau, cfg, Q=1.0)
        assert rep.all_ok()
        assert abs(rep.resonance_offset) < 1e-9
        np.testing.assert_allclose(rep.qml_ratio, 6.394, rtol=1e-3)
        np.testing.assert_allclose(rep.taylor_ratio, 22.96, rtol=1e-3)
        np.testing.assert_allclose(rep.delta_taylor, 1.3772e-3, rtol=1e-3)

    def test_off_resonance_flagged(self):
        prior = GaussianKnowledge(3.03, 0.03)
        rep = check_constraints(prior, 1.0, _sched(), Q=1.0)
        assert not rep.resonance_ok

    def test_low_visibility_flagged(self):
        prior = GaussianKnowledge(3.03, 0.03)
        cfg = _sched()
        tau, _ = choose_tau(prior, cfg)
        rep = check_constraints(prior, tau, cfg, Q=1e-6)
        assert not rep.visibility_ok and not rep.qml_ok

    def test_broad_prior_breaks_taylor(self):
        rep = check_constraints(GaussianKnowledge(3.03, 0.2), 1.07, _sched(), 1.0)
        assert not rep.taylor_ok
