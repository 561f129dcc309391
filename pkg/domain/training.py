"""State and results of the optimisation drivers"""
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Tuple

import numpy as np

from .arrays import FloatArray, VectorJacobianProduct
from .enums.experiments import StoppingKind, StoppingKindType
from .errors import DomainError, LengthMismatchError, ShapeMismatchError
from .networks import Mlp
from .risk import DistortionSpec, UtilitySpec
from .wasserstein import WassersteinSpec

# (cotangent on x_theta, cotangent on x_phi) -> gradient wrt the policy parameters
PolicyVectorJacobianProduct = Callable[[FloatArray, FloatArray], FloatArray]


@dataclass(frozen=True)
class AdamState:
    """First and second moments of ADAM with its hyperparameters"""
    first_moment: FloatArray
    second_moment: FloatArray
    step: int = 0
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    stability: float = 1e-8

    def __post_init__(self):
        if self.first_moment.shape != self.second_moment.shape:
            raise ShapeMismatchError("ADAM moment vectors must share one shape")
        if not self.learning_rate > 0.0:
            raise DomainError(f"learning_rate must be positive, got {self.learning_rate}")
        if not (0.0 <= self.beta1 < 1.0 and 0.0 <= self.beta2 < 1.0):
            raise DomainError("ADAM decay rates must lie in [0, 1)")

    @classmethod
    def create(
        cls,
        size: int,
        learning_rate: float = 1e-3,
        beta1: float = 0.9,
        beta2: float = 0.999,
        stability: float = 1e-8,
    ) -> "AdamState":
        return cls(
            first_moment=np.zeros(size),
            second_moment=np.zeros(size),
            learning_rate=learning_rate,
            beta1=beta1,
            beta2=beta2,
            stability=stability,
        )


@dataclass(frozen=True)
class LagrangeState:
    """Multiplier lam, penalty mu and their update schedule"""
    lam: float = 1.0
    mu: float = 10.0
    growth: float = 1.5
    update_period: int = 50
    max_mu: float = 1e8

    def __post_init__(self):
        if not self.lam >= 0.0:
            raise DomainError(f"lambda must be nonnegative, got {self.lam}")
        if not self.mu > 0.0:
            raise DomainError(f"mu must be positive, got {self.mu}")
        if not self.growth > 1.0:
            raise DomainError(f"growth must exceed 1, got {self.growth}")
        if self.update_period < 1:
            raise DomainError(f"update_period must be positive, got {self.update_period}")
        if not self.max_mu >= self.mu:
            raise DomainError(f"max_mu must be at least mu, got {self.max_mu} < {self.mu}")


@dataclass(frozen=True)
class LambdaWeight:
    """Penalty weight (lam + mu c) gated on the batch distance leaving the ball"""
    value: float

    def __post_init__(self):
        if not self.value >= 0.0:
            raise DomainError(f"penalty weight must be nonnegative, got {self.value}")


@dataclass(frozen=True)
class StoppingRule:
    """When a training loop stops

    relative_change compares the means of the last two windows of the tracked
    risk and stops once they differ by less than `tolerance` (relative).
    no_improvement stops once the best value has not improved for `window`
    iterations. Inner loops additionally require the batch to be feasible.
    """
    kind: StoppingKindType = StoppingKind.RELATIVE_CHANGE
    tolerance: float = 0.01
    window: int = 100
    max_iterations: int = 5000
    require_feasible: bool = False

    def __post_init__(self):
        if not StoppingKind.is_valid(self.kind):
            raise DomainError(f"Unknown stopping rule: {self.kind}")
        if not self.tolerance > 0.0:
            raise DomainError(f"tolerance must be positive, got {self.tolerance}")
        if self.window < 1 or self.max_iterations < 1:
            raise DomainError("window and max_iterations must be positive")


@dataclass(frozen=True)
class SampleBatch:
    """A mini-batch of policy outcomes X^phi and perturbed outcomes X^theta

    theta_vjp maps a cotangent on x_theta to the gradient wrt the adversary
    parameters. phi_vjp maps cotangents on (x_theta, x_phi) to the gradient
    wrt the policy parameters, following x_theta's dependence on x_phi.
    """
    x_phi: FloatArray
    x_theta: FloatArray
    theta_vjp: Optional[VectorJacobianProduct] = None
    phi_vjp: Optional[PolicyVectorJacobianProduct] = None
    y: Optional[FloatArray] = None

    def __post_init__(self):
        if self.x_phi.ndim != 1 or self.x_theta.ndim != 1:
            raise ShapeMismatchError("x_phi and x_theta must be one-dimensional")
        if self.x_phi.shape != self.x_theta.shape:
            raise LengthMismatchError(
                f"x_phi has {self.x_phi.size} samples but x_theta has {self.x_theta.size}"
            )
        if self.y is not None and self.y.shape[0] != self.x_phi.size:
            raise LengthMismatchError("y must carry one row per sample")

    @property
    def size(self) -> int:
        return int(self.x_phi.size)


@dataclass(frozen=True)
class PolicyOutcome:
    """Outcomes X^phi of a policy on a batch

    vjp maps a cotangent on the outcomes to the policy gradient and is None
    for a fixed benchmark. features are extra adversary inputs per sample;
    paths carries the simulated market when an adversary trades on it.
    """
    values: FloatArray
    vjp: Optional[VectorJacobianProduct] = None
    features: Optional[FloatArray] = None
    paths: Optional[Any] = None


@dataclass(frozen=True)
class PathBatch:
    """Terminal outcomes of randomised-policy paths with their summed scores

    scores[m] is the sum over time of grad log pi(a_t | x_t) along path m.
    weights, when given, replace the uniform 1/M path weights.
    """
    terminal: FloatArray
    scores: FloatArray
    weights: Optional[FloatArray] = None

    def __post_init__(self):
        if self.terminal.ndim != 1 or self.scores.ndim != 2:
            raise ShapeMismatchError("terminal must be 1-D and scores 2-D")
        if self.scores.shape[0] != self.terminal.size:
            raise LengthMismatchError("One score row per path expected")
        if self.weights is not None and self.weights.shape != self.terminal.shape:
            raise LengthMismatchError("One weight per path expected")

    @property
    def size(self) -> int:
        return int(self.terminal.size)

    def path_weights(self) -> FloatArray:
        if self.weights is None:
            return np.full(self.size, 1.0 / self.size)
        return self.weights


@dataclass(frozen=True)
class TraceRow:
    """One row of an inner training trace"""
    iteration: int
    rdeu: float
    wasserstein: float
    lam: float
    mu: float
    constraint_error: float
    outer_iteration: int = 0


@dataclass(frozen=True)
class InnerSolution:
    """Outcome of an inner solve; converged is False when a cap was hit"""
    parameters: FloatArray
    rdeu: float
    reference_rdeu: float
    distance: float
    constraint_satisfied: bool
    converged: bool
    iterations: int
    lagrange: LagrangeState
    trace: Tuple[TraceRow, ...] = ()


@dataclass(frozen=True)
class OuterTraceRow:
    """One outer iteration: worst-case risk and the inner solve behind it"""
    iteration: int
    rdeu: float
    worst_case_rdeu: float
    wasserstein: float
    inner_iterations: int
    inner_converged: bool
    step_taken: bool


@dataclass(frozen=True)
class OuterSolution:
    """Trained policy with its risk trace"""
    policy: Mlp
    adversary_parameters: FloatArray
    converged: bool
    iterations: int
    skipped_steps: int
    trace: Tuple[OuterTraceRow, ...] = ()
    inner_trace: Tuple[TraceRow, ...] = field(default=(), repr=False)

    @property
    def final_worst_case_rdeu(self) -> float:
        return self.trace[-1].worst_case_rdeu if self.trace else math.nan


@dataclass(frozen=True)
class RobustProblem:
    """Risk functional and ambiguity ball of one optimisation problem"""
    distortion: DistortionSpec
    utility: UtilitySpec
    wasserstein: WassersteinSpec
