"""
Interfaces for scenario simulators and adversaries.

A Scenario turns a policy into a batch of outcomes X^phi; an Adversary turns
those outcomes into the perturbed outcomes X^theta together with the VJPs the
gradient estimators need.
"""

from abc import ABC, abstractmethod
from typing import Optional

import numpy as np

from ..domain.arrays import FloatArray
from ..domain.networks import Mlp
from ..domain.training import PolicyOutcome, SampleBatch


class Scenario(ABC):
    """Simulator of policy outcomes"""

    @abstractmethod
    def outcomes(
        self,
        policy: Optional[Mlp],
        batch_size: int,
        rng: np.random.Generator,
    ) -> PolicyOutcome:
        """Simulate a fresh batch of outcomes of the policy"""
        pass

    @property
    def trains_policy(self) -> bool:
        """Whether outcomes depend on a trainable policy"""
        return True


class Adversary(ABC):
    """Parameterised push-forward of policy outcomes"""

    @abstractmethod
    def parameters(self) -> FloatArray:
        """Flat parameter vector"""
        pass

    @abstractmethod
    def with_parameters(self, flat: FloatArray) -> "Adversary":
        """Copy carrying the given parameters"""
        pass

    @abstractmethod
    def batch(self, outcome: PolicyOutcome) -> SampleBatch:
        """Perturb a batch of outcomes, recording the VJPs of x_theta"""
        pass

    @property
    @abstractmethod
    def network(self) -> Mlp:
        """The network holding the parameters"""
        pass
