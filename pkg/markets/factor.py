"""One-period factor-model portfolio allocation"""
from typing import Optional

import numpy as np

from ..domain.arrays import FloatArray
from ..domain.errors import DomainError
from ..domain.markets import FactorMarketSpec
from ..domain.networks import Mlp
from ..domain.training import PolicyOutcome
from ..interfaces.scenarios import Scenario
from ..services.nn import backward, forward
from ..services.seeding import Seed, as_generator


def simulate_factor_returns(spec: FactorMarketSpec, n: int, seed: Seed = None) -> FloatArray:
    """n iid rows of R_i = zeta + Z_i"""
    if n < 1:
        raise DomainError(f"Need at least one scenario, got {n}")
    rng = as_generator(seed)
    systematic = rng.normal(0.0, spec.systematic_sd, size=(n, 1))
    idiosyncratic = rng.normal(spec.means(), spec.idiosyncratic_sds(), size=(n, spec.d))
    return systematic + idiosyncratic


def portfolio_weights(policy: Mlp) -> FloatArray:
    """Weights of the bias-driven softmax policy (evaluated on a zero input)"""
    weights, _ = forward(policy, np.zeros(policy.input_size))
    return weights


class FactorPortfolioScenario(Scenario):
    """Terminal wealth phi^T R of a static long-only allocation"""

    def __init__(self, spec: FactorMarketSpec):
        self.spec = spec

    def outcomes(self, policy: Optional[Mlp], batch_size: int, rng: np.random.Generator) -> PolicyOutcome:
        returns = simulate_factor_returns(self.spec, batch_size, rng)
        weights, tape = forward(policy, np.zeros(policy.input_size))

        def vjp(cotangent: FloatArray) -> FloatArray:
            grad, _ = backward(policy, tape, returns.T @ cotangent)
            return grad

        return PolicyOutcome(values=returns @ weights, vjp=vjp)
