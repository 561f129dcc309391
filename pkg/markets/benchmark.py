"""Multi-asset market with a short rate, a constant-proportion benchmark and
dynamic self-financing strategies."""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..domain.arrays import FloatArray
from ..domain.enums.experiments import ShortRate
from ..domain.enums.networks import OutputActivation
from ..domain.errors import DomainError, ShapeMismatchError, check_finite
from ..domain.markets import BenchmarkMarketSpec
from ..domain.networks import Mlp
from ..domain.training import PolicyOutcome
from ..interfaces.scenarios import Scenario
from ..services.nn import backward, forward
from ..services.seeding import Seed, as_generator


@dataclass(frozen=True)
class BenchmarkPaths:
    """Per-step simple returns (M, T, d), short rates (M, T) and prices (M, T+1, d)"""
    returns: FloatArray
    rates: FloatArray
    prices: FloatArray
    dt: float

    @property
    def steps(self) -> int:
        return int(self.returns.shape[1])


def simulate_benchmark_paths(spec: BenchmarkMarketSpec, n_paths: int, seed: Seed = None) -> BenchmarkPaths:
    """Correlated GBM prices started at 1 and the short-rate path"""
    if n_paths < 1:
        raise DomainError(f"Need at least one path, got {n_paths}")
    rng = as_generator(seed)
    drifts = np.asarray(spec.drifts)
    vols = np.asarray(spec.volatilities)
    cholesky = np.linalg.cholesky(np.asarray(spec.correlation) + 1e-12 * np.eye(spec.d))
    shocks = rng.standard_normal((n_paths, spec.steps, spec.d)) @ cholesky.T
    log_growth = (drifts - 0.5 * vols ** 2) * spec.dt + vols * np.sqrt(spec.dt) * shocks
    returns = np.expm1(log_growth)
    prices = np.concatenate(
        (np.ones((n_paths, 1, spec.d)), np.exp(np.cumsum(log_growth, axis=1))), axis=1
    )

    rate = spec.short_rate
    rates = np.empty((n_paths, spec.steps))
    current = np.full(n_paths, rate.initial)
    rate_shocks = rng.standard_normal((n_paths, spec.steps)) if rate.kind == ShortRate.VASICEK else None
    for k in range(spec.steps):
        rates[:, k] = current
        if rate_shocks is not None:
            current = (
                current
                + rate.kappa * (rate.mean - current) * spec.dt
                + rate.sigma * np.sqrt(spec.dt) * rate_shocks[:, k]
            )
    return BenchmarkPaths(returns=returns, rates=rates, prices=prices, dt=spec.dt)


def constant_proportion_wealth(paths: BenchmarkPaths, weights, initial_wealth: float = 1.0) -> FloatArray:
    """Terminal wealth rebalanced to fixed proportions each step; the rest earns the short rate"""
    weights = np.asarray(weights, dtype=np.float64)
    if weights.shape != (paths.returns.shape[2],):
        raise ShapeMismatchError(f"Expected {paths.returns.shape[2]} weights, got {weights.shape}")
    carry = paths.rates * paths.dt
    growth = 1.0 + paths.returns @ weights + (1.0 - weights.sum()) * carry
    return initial_wealth * np.prod(growth, axis=1)


def _strategy_features(paths: BenchmarkPaths, k: int, wealth: FloatArray) -> FloatArray:
    n = wealth.size
    return np.column_stack((np.full(n, k / paths.steps), paths.prices[:, k, :], wealth))


def strategy_wealth(paths: BenchmarkPaths, strategy: Mlp, initial_wealth: float = 1.0) -> FloatArray:
    """Terminal wealth of positions pi_t = strategy(t/T, S_t, X_t), cash 1 - sum(pi_t)"""
    d = paths.returns.shape[2]
    if strategy.input_size != d + 2 or strategy.output_size != d:
        raise ShapeMismatchError(f"Strategy must map {d + 2} features to {d} positions")
    wealth = np.full(paths.returns.shape[0], initial_wealth)
    for k in range(paths.steps):
        positions, _ = forward(strategy, _strategy_features(paths, k, wealth))
        excess = paths.returns[:, k, :] - (paths.rates[:, k] * paths.dt)[:, None]
        wealth = wealth * (1.0 + np.sum(positions * excess, axis=1) + paths.rates[:, k] * paths.dt)
    check_finite(wealth, "strategy wealth")
    return wealth


def strategy_wealth_vjp(
    paths: BenchmarkPaths,
    strategy: Mlp,
    cotangent,
    initial_wealth: float = 1.0,
) -> FloatArray:
    """Back-propagation through time of sum_m v_m X_T,m wrt the strategy parameters"""
    n = paths.returns.shape[0]
    wealth = np.empty((paths.steps + 1, n))
    wealth[0] = initial_wealth
    for k in range(paths.steps):
        positions, _ = forward(strategy, _strategy_features(paths, k, wealth[k]))
        excess = paths.returns[:, k, :] - (paths.rates[:, k] * paths.dt)[:, None]
        wealth[k + 1] = wealth[k] * (1.0 + np.sum(positions * excess, axis=1) + paths.rates[:, k] * paths.dt)

    grad = np.zeros(strategy.parameter_count)
    wealth_adjoint = np.asarray(cotangent, dtype=np.float64).copy()
    for k in range(paths.steps - 1, -1, -1):
        positions, tape = forward(strategy, _strategy_features(paths, k, wealth[k]))
        excess = paths.returns[:, k, :] - (paths.rates[:, k] * paths.dt)[:, None]
        growth = 1.0 + np.sum(positions * excess, axis=1) + paths.rates[:, k] * paths.dt
        position_adjoint = (wealth_adjoint * wealth[k])[:, None] * excess
        param_grad, input_grad = backward(strategy, tape, position_adjoint)
        grad += param_grad
        wealth_adjoint = wealth_adjoint * growth + input_grad[:, -1]
    return grad


def benchmark_strategy_init(strategy: Mlp, weights) -> Mlp:
    """Strategy that starts out holding the benchmark proportions"""
    if strategy.output_activation != OutputActivation.IDENTITY:
        raise DomainError("Benchmark initialisation needs an identity output layer")
    weights = np.asarray(weights, dtype=np.float64)
    output_weights = np.zeros_like(strategy.weights[-1])
    biases = list(strategy.biases)
    biases[-1] = weights.copy()
    layers = list(strategy.weights)
    layers[-1] = output_weights
    flat = np.concatenate([np.concatenate((w.ravel(), b)) for w, b in zip(layers, biases)])
    return strategy.with_parameters(flat)


class BenchmarkScenario(Scenario):
    """Constant-proportion benchmark X^phi together with its market paths"""

    def __init__(self, spec: BenchmarkMarketSpec):
        self.spec = spec

    @property
    def trains_policy(self) -> bool:
        return False

    def outcomes(self, policy: Optional[Mlp], batch_size: int, rng: np.random.Generator) -> PolicyOutcome:
        paths = simulate_benchmark_paths(self.spec, batch_size, rng)
        values = constant_proportion_wealth(paths, self.spec.benchmark_weights, self.spec.initial_wealth)
        return PolicyOutcome(values=values, paths=paths)
