"""Adversaries that push policy outcomes around inside the Wasserstein ball"""
from typing import Optional

import numpy as np

from ..domain.arrays import FloatArray
from ..domain.errors import DomainError, ShapeMismatchError
from ..domain.markets import BenchmarkMarketSpec
from ..domain.networks import Mlp
from ..domain.training import PolicyOutcome, SampleBatch
from ..interfaces.scenarios import Adversary
from ..services.nn import backward, forward
from .benchmark import BenchmarkPaths, strategy_wealth, strategy_wealth_vjp


class ResidualAdversary(Adversary):
    """X^theta = X^phi + N_theta(X^phi, Y)

    With the output layer initialised at zero the adversary starts as the
    identity map, inside every ball.
    """

    def __init__(self, net: Mlp):
        if net.output_size != 1:
            raise ShapeMismatchError("The residual network must produce one value per sample")
        self._net = net

    @property
    def network(self) -> Mlp:
        return self._net

    def parameters(self) -> FloatArray:
        return self._net.parameters()

    def with_parameters(self, flat: FloatArray) -> "ResidualAdversary":
        return ResidualAdversary(self._net.with_parameters(flat))

    def _inputs(self, outcome: PolicyOutcome) -> FloatArray:
        columns = [outcome.values[:, None]]
        if outcome.features is not None:
            columns.append(outcome.features.reshape(outcome.values.size, -1))
        inputs = np.hstack(columns)
        if inputs.shape[1] != self._net.input_size:
            raise ShapeMismatchError(
                f"Adversary expects {self._net.input_size} inputs, got {inputs.shape[1]}"
            )
        return inputs

    def batch(self, outcome: PolicyOutcome) -> SampleBatch:
        net = self._net
        shift, tape = forward(net, self._inputs(outcome))
        x_phi = outcome.values
        x_theta = x_phi + shift[:, 0]

        def theta_vjp(cotangent: FloatArray) -> FloatArray:
            grad, _ = backward(net, tape, np.asarray(cotangent)[:, None])
            return grad

        phi_vjp = None
        if outcome.vjp is not None:
            policy_vjp = outcome.vjp

            def phi_vjp(theta_cotangent: FloatArray, phi_cotangent: FloatArray) -> FloatArray:
                _, input_grad = backward(net, tape, np.asarray(theta_cotangent)[:, None])
                return policy_vjp(theta_cotangent + input_grad[:, 0] + phi_cotangent)

        return SampleBatch(
            x_phi=x_phi,
            x_theta=x_theta,
            theta_vjp=theta_vjp,
            phi_vjp=phi_vjp,
            y=outcome.features,
        )


class StrategyAdversary(Adversary):
    """A dynamic self-financing strategy traded on the benchmark's market paths"""

    def __init__(self, net: Mlp, spec: BenchmarkMarketSpec):
        self._net = net
        self.spec = spec

    @property
    def network(self) -> Mlp:
        return self._net

    def parameters(self) -> FloatArray:
        return self._net.parameters()

    def with_parameters(self, flat: FloatArray) -> "StrategyAdversary":
        return StrategyAdversary(self._net.with_parameters(flat), self.spec)

    def batch(self, outcome: PolicyOutcome) -> SampleBatch:
        paths: Optional[BenchmarkPaths] = outcome.paths
        if not isinstance(paths, BenchmarkPaths):
            raise DomainError("A strategy adversary needs the benchmark market paths")
        net = self._net
        x_theta = strategy_wealth(paths, net, self.spec.initial_wealth)

        def theta_vjp(cotangent: FloatArray) -> FloatArray:
            return strategy_wealth_vjp(paths, net, cotangent, self.spec.initial_wealth)

        return SampleBatch(x_phi=outcome.values, x_theta=x_theta, theta_vjp=theta_vjp)
