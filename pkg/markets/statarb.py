"""Statistical arbitrage on a mean-reverting price with square-root price impact.

The policy maps the features (t, S_t, q_{t-1}) to the target inventory q_t;
the trade is phi_t = q_t - q_{t-1} and enters the price drift through the
impact term c sgn(phi_t) sqrt(|phi_t|). Terminal wealth is
X = sum_t q_t (S_{t+1} - S_t) = -sum_t phi_t S_t + q_{T-1} S_T.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..domain.arrays import FloatArray
from ..domain.errors import DomainError, NonFiniteError, ShapeMismatchError
from ..domain.markets import OuStatArbSpec
from ..domain.networks import Mlp
from ..domain.training import PolicyOutcome
from ..interfaces.scenarios import Scenario
from ..services.nn import backward, forward
from ..services.seeding import Seed, as_generator

# |phi| is floored here when differentiating sqrt(|phi|)
IMPACT_FLOOR = 1e-6


@dataclass(frozen=True)
class StatArbPaths:
    """Simulated prices (M, T+1), inventories and trades (M, T), and wealth (M,)"""
    prices: FloatArray
    inventory: FloatArray
    trades: FloatArray
    wealth: FloatArray
    features: FloatArray

    @property
    def telescoped_wealth(self) -> FloatArray:
        """-sum_t phi_t S_t + q_{T-1} S_T"""
        return (
            -np.sum(self.trades * self.prices[:, :-1], axis=1)
            + self.inventory[:, -1] * self.prices[:, -1]
        )


def _impact(trades: FloatArray) -> FloatArray:
    return np.sign(trades) * np.sqrt(np.abs(trades))


def _impact_slope(trades: FloatArray) -> FloatArray:
    return 0.5 / np.sqrt(np.maximum(np.abs(trades), IMPACT_FLOOR))


def simulate_statarb_paths(
    spec: OuStatArbSpec,
    policy: Mlp,
    n_paths: int,
    seed: Seed = None,
) -> StatArbPaths:
    """Euler paths of the impacted price under the policy's inventory targets"""
    if policy.input_size != 3 or policy.output_size != 1:
        raise ShapeMismatchError("The stat-arb policy maps (t, S, q_prev) to one inventory")
    if n_paths < 1:
        raise DomainError(f"Need at least one path, got {n_paths}")
    rng = as_generator(seed)
    steps = spec.steps
    prices = np.empty((n_paths, steps + 1))
    prices[:, 0] = spec.initial_price
    inventory = np.empty((n_paths, steps))
    features = np.empty((steps, n_paths, 3))
    previous = np.zeros(n_paths)
    shocks = rng.standard_normal((n_paths, steps))
    for k in range(steps):
        features[k] = np.column_stack((np.full(n_paths, k * spec.dt), prices[:, k], previous))
        target, _ = forward(policy, features[k])
        inventory[:, k] = target[:, 0]
        trade = inventory[:, k] - previous
        drift = spec.kappa * (spec.mean_level - prices[:, k]) + spec.impact * _impact(trade)
        prices[:, k + 1] = prices[:, k] + drift * spec.dt + spec.sigma * np.sqrt(spec.dt) * shocks[:, k]
        bad = ~np.isfinite(prices[:, k + 1])
        if bad.any():
            raise NonFiniteError("stat-arb price step", k, float(prices[np.flatnonzero(bad)[0], k + 1]))
        previous = inventory[:, k]
    if np.abs(inventory).max() > spec.inventory_bound:
        raise DomainError("Inventory left the admissible interval")
    trades = np.diff(inventory, axis=1, prepend=0.0)
    wealth = np.sum(inventory * np.diff(prices, axis=1), axis=1)
    return StatArbPaths(prices, inventory, trades, wealth, features)


def wealth_vjp(spec: OuStatArbSpec, policy: Mlp, paths: StatArbPaths, cotangent) -> FloatArray:
    """Back-propagation through time of sum_m v_m X_m wrt the policy parameters

    Forward passes are recomputed per step from the stored features.
    """
    v = np.asarray(cotangent, dtype=np.float64)
    grad = np.zeros(policy.parameter_count)
    price_adjoint = np.zeros_like(v)      # adjoint of S_{k+1} from later steps
    inventory_adjoint = np.zeros_like(v)  # adjoint of q_k from later steps
    for k in range(spec.steps - 1, -1, -1):
        q = paths.inventory[:, k]
        next_price_adjoint = price_adjoint + v * q
        gain = paths.prices[:, k + 1] - paths.prices[:, k]
        trade_adjoint = next_price_adjoint * spec.impact * _impact_slope(paths.trades[:, k]) * spec.dt
        q_adjoint = inventory_adjoint + v * gain + trade_adjoint
        _, tape = forward(policy, paths.features[k])
        param_grad, input_grad = backward(policy, tape, q_adjoint[:, None])
        grad += param_grad
        price_adjoint = next_price_adjoint * (1.0 - spec.kappa * spec.dt) - v * q + input_grad[:, 1]
        inventory_adjoint = -trade_adjoint + input_grad[:, 2]
    return grad


def statarb_heatmap(
    policy: Mlp,
    spec: OuStatArbSpec,
    inventories,
    prices,
    time_fraction: float = 0.75,
) -> FloatArray:
    """Trade q_t - q_{t-1} on the (q_{t-1}, S_t) grid at t = time_fraction * T

    Rows follow `inventories`, columns follow `prices`.
    """
    q_grid, s_grid = np.meshgrid(
        np.asarray(inventories, dtype=np.float64),
        np.asarray(prices, dtype=np.float64),
        indexing="ij",
    )
    t = np.full(q_grid.size, time_fraction * spec.horizon)
    targets, _ = forward(policy, np.column_stack((t, s_grid.ravel(), q_grid.ravel())))
    return (targets[:, 0] - q_grid.ravel()).reshape(q_grid.shape)


class StatArbScenario(Scenario):
    """Terminal wealth of the stat-arb policy with its BPTT VJP"""

    def __init__(self, spec: OuStatArbSpec):
        self.spec = spec

    def outcomes(self, policy: Optional[Mlp], batch_size: int, rng: np.random.Generator) -> PolicyOutcome:
        paths = simulate_statarb_paths(self.spec, policy, batch_size, rng)

        def vjp(cotangent: FloatArray) -> FloatArray:
            return wealth_vjp(self.spec, policy, paths, cotangent)

        return PolicyOutcome(values=paths.wealth, vjp=vjp, paths=paths)
