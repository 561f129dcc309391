"""Wasserstein ball domain types"""
import math
from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class WassersteinSpec:
    """Order p of the distance and radius epsilon of the ball (monetary units)"""
    order_p: float = 2.0
    epsilon: float = 0.0

    def __post_init__(self):
        if not self.order_p >= 1.0 or math.isinf(self.order_p):
            raise DomainError(f"Wasserstein order must be a finite p >= 1, got {self.order_p}")
        if not self.epsilon >= 0.0:
            raise DomainError(f"epsilon must be nonnegative, got {self.epsilon}")

    @property
    def radius_power(self) -> float:
        """epsilon ** p, infinite for an unconstrained ball"""
        return math.inf if math.isinf(self.epsilon) else self.epsilon ** self.order_p
