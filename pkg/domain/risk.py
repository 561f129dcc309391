"""Risk-functional domain types: distortions, utilities and empirical samples.

Distortions are described through their weight function gamma(u), the left
derivative of g at 1 - u. Every variant here has a piecewise-constant gamma, so
the mass of gamma over any interval is available in closed form.
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass, field

import numpy as np

from .arrays import FloatArray, IndexArray, as_sample
from .errors import DomainError, EmptySampleError

_QUADRATURE_CELLS = 4096
_NORMALISATION_TOLERANCE = 1e-10


class DistortionSpec(ABC):
    """A distortion g described by its density weight gamma on (0, 1)"""

    @abstractmethod
    def gamma(self, u) -> FloatArray:
        """gamma(u) for u in (0, 1)"""

    @abstractmethod
    def interval_mass(self, lower, upper) -> FloatArray:
        """Integral of gamma over (lower, upper], elementwise"""

    def distortion(self, x) -> FloatArray:
        """g(x) = integral of gamma over (1 - x, 1]"""
        x = np.asarray(x, dtype=np.float64)
        return self.interval_mass(1.0 - x, np.ones_like(x))

    def total_mass(self) -> float:
        """Quadrature of gamma over a uniform partition of (0, 1]"""
        edges = np.linspace(0.0, 1.0, _QUADRATURE_CELLS + 1)
        return float(np.sum(self.interval_mass(edges[:-1], edges[1:])))

    def _check_normalised(self) -> None:
        mass = self.total_mass()
        if abs(mass - 1.0) > _NORMALISATION_TOLERANCE:
            raise DomainError(f"gamma integrates to {mass!r}, expected 1")


@dataclass(frozen=True)
class AlphaBeta(DistortionSpec):
    """Two-sided distortion mixing the lower alpha-tail and the upper beta-tail"""
    alpha: float
    beta: float
    p_weight: float

    def __post_init__(self):
        if not 0.0 < self.alpha <= self.beta < 1.0:
            raise DomainError(
                f"AlphaBeta needs 0 < alpha <= beta < 1, got alpha={self.alpha}, beta={self.beta}"
            )
        if not 0.0 <= self.p_weight <= 1.0:
            raise DomainError(f"p_weight must lie in [0, 1], got {self.p_weight}")
        if self.eta <= 0.0:
            raise DomainError("AlphaBeta normaliser eta must be positive")
        self._check_normalised()

    @property
    def eta(self) -> float:
        return self.p_weight * self.alpha + (1.0 - self.p_weight) * (1.0 - self.beta)

    def gamma(self, u) -> FloatArray:
        u = np.asarray(u, dtype=np.float64)
        # u == alpha belongs to the lower tail, u == beta does not belong to the upper one
        lower = (u <= self.alpha).astype(np.float64)
        upper = (u > self.beta).astype(np.float64)
        return (self.p_weight * lower + (1.0 - self.p_weight) * upper) / self.eta

    def interval_mass(self, lower, upper) -> FloatArray:
        lower = np.asarray(lower, dtype=np.float64)
        upper = np.asarray(upper, dtype=np.float64)
        lower_tail = np.clip(np.minimum(upper, self.alpha) - lower, 0.0, None)
        upper_tail = np.clip(upper - np.maximum(lower, self.beta), 0.0, None)
        return (self.p_weight * lower_tail + (1.0 - self.p_weight) * upper_tail) / self.eta


@dataclass(frozen=True)
class CVaR(DistortionSpec):
    """Mean of the worst alpha-fraction of outcomes"""
    alpha: float
    _equivalent: AlphaBeta = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_equivalent", AlphaBeta(self.alpha, self.alpha, 1.0))

    def as_alpha_beta(self) -> AlphaBeta:
        return self._equivalent

    def gamma(self, u) -> FloatArray:
        return self._equivalent.gamma(u)

    def interval_mass(self, lower, upper) -> FloatArray:
        return self._equivalent.interval_mass(lower, upper)


@dataclass(frozen=True)
class UTE(DistortionSpec):
    """Mean of the best (1 - beta)-fraction of outcomes"""
    beta: float
    _equivalent: AlphaBeta = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_equivalent", AlphaBeta(self.beta, self.beta, 0.0))

    def as_alpha_beta(self) -> AlphaBeta:
        return self._equivalent

    def gamma(self, u) -> FloatArray:
        return self._equivalent.gamma(u)

    def interval_mass(self, lower, upper) -> FloatArray:
        return self._equivalent.interval_mass(lower, upper)


@dataclass(frozen=True)
class Expectation(DistortionSpec):
    """No distortion, gamma == 1"""

    def gamma(self, u) -> FloatArray:
        return np.ones_like(np.asarray(u, dtype=np.float64))

    def interval_mass(self, lower, upper) -> FloatArray:
        lower = np.asarray(lower, dtype=np.float64)
        upper = np.asarray(upper, dtype=np.float64)
        return np.clip(upper - lower, 0.0, None)


class UtilitySpec(ABC):
    """A non-decreasing utility U together with its derivative"""

    @abstractmethod
    def u(self, x) -> FloatArray:
        pass

    @abstractmethod
    def u_prime(self, x) -> FloatArray:
        pass


@dataclass(frozen=True)
class Linear(UtilitySpec):
    """U(x) = x"""

    def u(self, x) -> FloatArray:
        return np.asarray(x, dtype=np.float64)

    def u_prime(self, x) -> FloatArray:
        return np.ones_like(np.asarray(x, dtype=np.float64))


@dataclass(frozen=True)
class Exponential(UtilitySpec):
    """U(x) = (1 - exp(-a x)) / a"""
    risk_aversion: float

    def __post_init__(self):
        if not self.risk_aversion > 0.0:
            raise DomainError(f"risk_aversion must be positive, got {self.risk_aversion}")

    def u(self, x) -> FloatArray:
        x = np.asarray(x, dtype=np.float64)
        return -np.expm1(-self.risk_aversion * x) / self.risk_aversion

    def u_prime(self, x) -> FloatArray:
        return np.exp(-self.risk_aversion * np.asarray(x, dtype=np.float64))


@dataclass(frozen=True)
class Power(UtilitySpec):
    """U(x) = x**k on x > 0"""
    exponent: float

    def __post_init__(self):
        if not 0.0 < self.exponent < 1.0:
            raise DomainError(f"Power exponent must lie in (0, 1), got {self.exponent}")

    def _positive(self, x) -> FloatArray:
        x = np.asarray(x, dtype=np.float64)
        if np.any(x <= 0.0):
            raise DomainError("Power utility is only defined for positive outcomes")
        return x

    def u(self, x) -> FloatArray:
        return self._positive(x) ** self.exponent

    def u_prime(self, x) -> FloatArray:
        return self.exponent * self._positive(x) ** (self.exponent - 1.0)


@dataclass(frozen=True)
class EmpiricalDistribution:
    """Outcomes of a sample with their ascending (stable) ordering"""
    values: FloatArray
    sorted_ascending: IndexArray

    def __post_init__(self):
        if self.values.size == 0:
            raise EmptySampleError("An empirical distribution needs at least one sample")
        self.values.setflags(write=False)
        self.sorted_ascending.setflags(write=False)

    @classmethod
    def from_values(cls, values) -> "EmpiricalDistribution":
        array = np.array(as_sample(values), copy=True)
        if array.size == 0:
            raise EmptySampleError("An empirical distribution needs at least one sample")
        return cls(values=array, sorted_ascending=np.argsort(array, kind="stable"))

    @property
    def size(self) -> int:
        return int(self.values.size)

    @property
    def sorted_values(self) -> FloatArray:
        return self.values[self.sorted_ascending]


@dataclass(frozen=True)
class RdeuSummary:
    """The three statistics reported for every wealth distribution"""
    cvar_alpha: float
    ute_beta: float
    mean: float
