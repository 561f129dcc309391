"""Scenario specifications of the factor, stat-arb and benchmark markets"""
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from .enums.experiments import ShortRate, ShortRateType
from .errors import DomainError


@dataclass(frozen=True)
class FactorMarketSpec:
    """One-period returns R_i = zeta + Z_i, zeta ~ N(0, sd^2), Z_i ~ N(a i, (b i)^2)"""
    d: int = 5
    systematic_sd: float = 0.02
    drift_step: float = 0.03
    volatility_step: float = 0.025

    def __post_init__(self):
        if self.d < 1:
            raise DomainError(f"The factor market needs at least one asset, got d={self.d}")
        if not (self.systematic_sd > 0.0 and self.volatility_step > 0.0):
            raise DomainError("Factor market standard deviations must be positive")

    def means(self) -> np.ndarray:
        return self.drift_step * np.arange(1, self.d + 1)

    def idiosyncratic_sds(self) -> np.ndarray:
        return self.volatility_step * np.arange(1, self.d + 1)


@dataclass(frozen=True)
class OuStatArbSpec:
    """Mean-reverting price with square-root price impact of the agent's trades"""
    kappa: float = 5.0
    mean_level: float = 1.0
    sigma: float = 0.8
    impact: float = 0.1
    steps: int = 252
    dt: float = 1.0 / 252.0
    initial_price: float = 1.0
    inventory_bound: float = 5.0

    def __post_init__(self):
        if not (self.kappa > 0.0 and self.sigma > 0.0 and self.dt > 0.0):
            raise DomainError("kappa, sigma and dt must be positive")
        if self.impact < 0.0:
            raise DomainError(f"impact must be nonnegative, got {self.impact}")
        if self.steps < 1:
            raise DomainError(f"steps must be positive, got {self.steps}")
        if not self.inventory_bound > 0.0:
            raise DomainError("inventory_bound must be positive")

    @property
    def horizon(self) -> float:
        return self.steps * self.dt


@dataclass(frozen=True)
class ShortRateSpec:
    """Constant rate, or Vasicek r' = r + k (m - r) dt + s sqrt(dt) xi"""
    kind: ShortRateType = ShortRate.CONSTANT
    initial: float = 0.02
    kappa: float = 0.5
    mean: float = 0.02
    sigma: float = 0.01

    def __post_init__(self):
        if not ShortRate.is_valid(self.kind):
            raise DomainError(f"Unknown short-rate model: {self.kind}")
        if self.kind == ShortRate.VASICEK and not (self.kappa > 0.0 and self.sigma >= 0.0):
            raise DomainError("Vasicek needs kappa > 0 and sigma >= 0")


@dataclass(frozen=True)
class BenchmarkMarketSpec:
    """Correlated geometric Brownian assets with a short rate and a benchmark mix"""
    drifts: Tuple[float, ...] = (0.05, 0.07, 0.09)
    volatilities: Tuple[float, ...] = (0.10, 0.15, 0.20)
    correlation: Tuple[Tuple[float, ...], ...] = (
        (1.0, 0.3, 0.3),
        (0.3, 1.0, 0.3),
        (0.3, 0.3, 1.0),
    )
    short_rate: ShortRateSpec = field(default_factory=ShortRateSpec)
    steps: int = 60
    dt: float = 1.0 / 12.0
    initial_wealth: float = 1.0
    benchmark_weights: Tuple[float, ...] = (0.3, 0.3, 0.4)

    def __post_init__(self):
        d = len(self.drifts)
        if d < 1 or len(self.volatilities) != d or len(self.benchmark_weights) != d:
            raise DomainError("drifts, volatilities and benchmark_weights need one entry per asset")
        corr = np.asarray(self.correlation, dtype=np.float64)
        if corr.shape != (d, d) or not np.allclose(corr, corr.T) or not np.allclose(np.diag(corr), 1.0):
            raise DomainError("correlation must be a symmetric unit-diagonal d x d matrix")
        if np.linalg.eigvalsh(corr).min() < -1e-12:
            raise DomainError("correlation matrix is not positive semidefinite")
        if any(v <= 0.0 for v in self.volatilities):
            raise DomainError("volatilities must be positive")
        if abs(sum(self.benchmark_weights) - 1.0) > 1e-9:
            raise DomainError(f"benchmark weights must sum to 1, got {sum(self.benchmark_weights)}")
        if self.steps < 1 or not self.dt > 0.0 or not self.initial_wealth > 0.0:
            raise DomainError("steps, dt and initial_wealth must be positive")

    @property
    def d(self) -> int:
        return len(self.drifts)

    @property
    def horizon(self) -> float:
        return self.steps * self.dt
