"""Rank-dependent expected utility of empirical samples"""
from typing import Union

import numpy as np

from ..domain.arrays import FloatArray
from ..domain.errors import DomainError, check_finite
from ..domain.risk import (
    CVaR,
    DistortionSpec,
    EmpiricalDistribution,
    Linear,
    RdeuSummary,
    UTE,
    UtilitySpec,
)

Samples = Union[EmpiricalDistribution, FloatArray]


def as_distribution(samples: Samples) -> EmpiricalDistribution:
    if isinstance(samples, EmpiricalDistribution):
        return samples
    return EmpiricalDistribution.from_values(samples)


def gamma_eval(spec: DistortionSpec, u):
    """gamma(u) of the distortion; u must lie strictly inside (0, 1)"""
    levels = np.asarray(u, dtype=np.float64)
    if np.any(~((levels > 0.0) & (levels < 1.0))):
        raise DomainError(f"gamma is defined on (0, 1) only, got {u!r}")
    weights = spec.gamma(levels)
    return float(weights) if weights.ndim == 0 else weights


def cell_masses(dist: DistortionSpec, n: int) -> FloatArray:
    """Mass of gamma on each cell ((i-1)/n, i/n] of the empirical quantile"""
    edges = np.arange(n + 1, dtype=np.float64) / n
    return dist.interval_mass(edges[:-1], edges[1:])


def rdeu(samples: Samples, dist: DistortionSpec, util: UtilitySpec) -> float:
    """-integral of U(F^-1(s)) gamma(s) ds against the empirical quantile

    The left-continuous step quantile makes the cell integrals of a
    piecewise-constant gamma exact.
    """
    distribution = as_distribution(samples)
    check_finite(distribution.values, "rdeu samples")
    utilities = util.u(distribution.sorted_values)
    return -float(np.dot(utilities, cell_masses(dist, distribution.size)))


def choquet_rdeu(samples: Samples, dist: DistortionSpec, util: UtilitySpec) -> float:
    """Same functional through the Choquet integral of U(Y) against g

    Integrates g(P(U(Y) > z)) layer by layer over the sorted utilities of the
    sample; the survival function is constant between consecutive values.
    """
    distribution = as_distribution(samples)
    utilities = util.u(distribution.sorted_values)
    n = distribution.size
    survival = (n - np.arange(1, n, dtype=np.float64)) / n
    layers = np.diff(utilities)
    return -float(utilities[0] + np.dot(layers, dist.distortion(survival)))


def rdeu_summary(samples: Samples, alpha: float, beta: float) -> RdeuSummary:
    """CVaR, UTE and mean of a wealth sample, all quoted in wealth units"""
    distribution = as_distribution(samples)
    linear = Linear()
    return RdeuSummary(
        cvar_alpha=-rdeu(distribution, CVaR(alpha), linear),
        ute_beta=-rdeu(distribution, UTE(beta), linear),
        mean=float(np.mean(distribution.values)),
    )
