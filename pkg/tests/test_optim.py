"""Tests for ADAM, the multiplier controller and the stopping rules"""
import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from ..domain import AdamState, DomainError, LagrangeState, NonFiniteError, ShapeMismatchError, StoppingRule
from ..services.optim import adam_step, lagrange_update, lagrangian_value, stopping_satisfied


class TestAdam:
    def test_first_step_moves_by_learning_rate(self):
        """Bias correction makes the first step lr * sign(grad)"""
        state = AdamState.create(3, learning_rate=0.01)
        params, state = adam_step(state, np.zeros(3), np.array([4.0, -0.5, 2.0]))
        assert params == pytest.approx([-0.01, 0.01, -0.01], rel=1e-6)
        assert state.step == 1

    def test_minimises_a_quadratic(self):
        target = np.array([1.0, -2.0, 0.5])
        state = AdamState.create(3, learning_rate=0.01)
        params = np.zeros(3)
        for _ in range(3000):
            params, state = adam_step(state, params, 2.0 * (params - target))
        assert params == pytest.approx(target, abs=2e-2)

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatchError):
            adam_step(AdamState.create(2), np.zeros(2), np.zeros(3))

    def test_non_finite_gradient(self):
        with pytest.raises(NonFiniteError) as exc:
            adam_step(AdamState.create(2), np.zeros(2), np.array([0.0, np.inf]))
        assert exc.value.index == 1

    def test_rejects_bad_hyperparameters(self):
        with pytest.raises(DomainError):
            AdamState.create(2, learning_rate=0.0)
        with pytest.raises(DomainError):
            AdamState.create(2, beta1=1.0)


class TestLagrange:
    def test_update_order(self):
        """lam grows with the old mu, then mu is scaled"""
        state = lagrange_update(LagrangeState(lam=1.0, mu=10.0, growth=1.5), 0.2)
        assert state.lam == pytest.approx(3.0)
        assert state.mu == pytest.approx(15.0)

    def test_zero_constraint_error_keeps_lambda(self):
        state = lagrange_update(LagrangeState(lam=2.0, mu=4.0), 0.0)
        assert state.lam == 2.0
        assert state.mu == pytest.approx(6.0)

    def test_mu_stops_at_the_ceiling(self):
        state = LagrangeState(mu=10.0, growth=1.5, max_mu=100.0)
        for _ in range(10):
            state = lagrange_update(state, 0.0)
        assert state.mu == 100.0
        assert state.lam == 1.0

    def test_rejects_negative_constraint_error(self):
        with pytest.raises(DomainError):
            lagrange_update(LagrangeState(), -0.1)

    def test_lagrangian_value(self):
        assert lagrangian_value(1.0, 0.5, LagrangeState(lam=2.0, mu=4.0)) == pytest.approx(2.5)

    @pytest.mark.parametrize("kwargs", [{"lam": -1.0}, {"mu": 0.0}, {"growth": 1.0}, {"update_period": 0}, {"max_mu": 5.0}])
    def test_rejects_bad_state(self, kwargs):
        with pytest.raises(DomainError):
            LagrangeState(**kwargs)

    def test_converges_on_a_toy_problem(self):
        """min (x - 2)^2 subject to x <= 1 settles on the boundary with lam -> 2"""
        state = LagrangeState(lam=0.0, mu=10.0, growth=1.5)
        c = np.inf
        for _ in range(20):
            current = state

            def augmented(x):
                violation = max(0.0, x - 1.0)
                return lagrangian_value((x - 2.0) ** 2, violation, current)

            x = minimize_scalar(augmented, bounds=(-5.0, 5.0), method="bounded", options={"xatol": 1e-10}).x
            c = max(0.0, x - 1.0)
            state = lagrange_update(state, c)
        assert c < 1e-4
        assert state.lam == pytest.approx(2.0, abs=0.05)


class TestStopping:
    def test_relative_change_needs_two_windows(self):
        rule = StoppingRule(tolerance=0.01, window=3)
        assert not stopping_satisfied(rule, [1.0] * 5)
        assert stopping_satisfied(rule, [1.0] * 6)

    def test_relative_change_detects_movement(self):
        rule = StoppingRule(tolerance=0.01, window=2)
        assert not stopping_satisfied(rule, [1.0, 1.0, 0.5, 0.5])
        assert stopping_satisfied(rule, [1.0, 1.0, 0.999, 0.999])

    def test_no_improvement(self):
        rule = StoppingRule(kind="no_improvement", window=2)
        assert not stopping_satisfied(rule, [3.0, 2.0])
        assert stopping_satisfied(rule, [3.0, 2.0, 1.0, 1.5, 1.2])
        assert not stopping_satisfied(rule, [3.0, 2.0, 1.0, 0.5])

    def test_rejects_unknown_kind(self):
        with pytest.raises(DomainError):
            StoppingRule(kind="patience")
