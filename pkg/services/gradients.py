"""Mini-batch policy-gradient estimators for the inner and outer problems.

Both estimators differentiate a frozen-rank surrogate of the augmented
Lagrangian

    L = sign * R[X^theta] + lam c + (mu / 2) c^2

on the batch: the KDE ranks F_hat(x_i), the bandwidths and the comonotone
pairing of X^theta with X^phi are held fixed, so each sample moves like the
KDE quantile of its frozen rank and its sensitivity is the kernel-weighted
average sum_j w_ij grad x_j.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..domain.arrays import FloatArray, IndexArray, as_sample
from ..domain.density import KdeDiagnostics, KdeSpec
from ..domain.errors import DegenerateBandwidthError, DomainError, MissingTapeError, check_finite
from ..domain.risk import DistortionSpec, UtilitySpec
from ..domain.training import LagrangeState, LambdaWeight, SampleBatch
from ..domain.wasserstein import WassersteinSpec
from .density import cdf_hat, quantile_hat, resolve_bandwidth, smoothed_vjp
from .wasserstein import comonotonic_permutation, transport_cost


def penalty_weight(x_theta, x_phi, wspec: WassersteinSpec, lstate: LagrangeState) -> LambdaWeight:
    """(lam + mu c) when the batch distance exceeds epsilon, else 0"""
    cost = transport_cost(x_theta, x_phi, wspec.order_p)
    if not cost > wspec.radius_power:
        return LambdaWeight(0.0)
    return LambdaWeight(lstate.lam + lstate.mu * (cost - wspec.radius_power))


@dataclass(frozen=True)
class _BatchTerms:
    rdeu_coef: FloatArray
    penalty_coef: FloatArray
    pairing: IndexArray
    h_theta: float


def _batch_terms(
    batch: SampleBatch,
    dist: DistortionSpec,
    util: UtilitySpec,
    wspec: WassersteinSpec,
    lstate: LagrangeState,
    kde: KdeSpec,
    objective_sign: float,
    weight: Optional[float],
) -> _BatchTerms:
    if batch.size < 2:
        raise DomainError(f"Gradient estimators need at least two samples, got {batch.size}")
    x = batch.x_theta
    check_finite(x, "x_theta")
    h_theta = resolve_bandwidth(x, kde)
    ranks = cdf_hat(x, x, kde, h_theta)
    rdeu_coef = objective_sign * util.u_prime(x) * dist.gamma(ranks)
    pairing = comonotonic_permutation(x, batch.x_phi)
    if weight is None:
        weight = penalty_weight(x, batch.x_phi, wspec, lstate).value
    if weight > 0.0:
        gaps = x - batch.x_phi[pairing]
        penalty_coef = wspec.order_p * weight * np.abs(gaps) ** (wspec.order_p - 1.0) * np.sign(gaps)
    else:
        penalty_coef = np.zeros(batch.size)
    check_finite(rdeu_coef, "RDEU gradient weights")
    check_finite(penalty_coef, "penalty gradient weights")
    return _BatchTerms(rdeu_coef, penalty_coef, pairing, h_theta)


def inner_gradient(
    batch: SampleBatch,
    dist: DistortionSpec,
    util: UtilitySpec,
    wspec: WassersteinSpec,
    lstate: LagrangeState,
    kde: KdeSpec,
    objective_sign: float = 1.0,
    diagnostics: Optional[KdeDiagnostics] = None,
) -> FloatArray:
    """Gradient of the batch Lagrangian wrt the adversary parameters

    -(1/N) sum_i [sign U'(x_i) gamma(F_hat(x_i)) - p Lam |x_i - x_phi_c,i|^(p-1) sgn(.)]
           sum_j w_ij grad x_j
    """
    if batch.theta_vjp is None:
        raise MissingTapeError("inner_gradient needs the adversary VJP of x_theta")
    terms = _batch_terms(batch, dist, util, wspec, lstate, kde, objective_sign, None)
    cotangent = -smoothed_vjp(
        batch.x_theta, terms.rdeu_coef - terms.penalty_coef, kde, terms.h_theta, diagnostics
    ) / batch.size
    return batch.theta_vjp(cotangent)


def outer_gradient(
    batch: SampleBatch,
    dist: DistortionSpec,
    util: UtilitySpec,
    wspec: WassersteinSpec,
    lstate: LagrangeState,
    kde: KdeSpec,
    objective_sign: float = 1.0,
    penalty_weight: Optional[float] = None,
    diagnostics: Optional[KdeDiagnostics] = None,
) -> FloatArray:
    """Gradient of the batch Lagrangian wrt the policy parameters at frozen theta

    The RDEU term uses kernel rows of X^theta; the penalty term uses the
    difference of the kernel rows of X^theta and of the paired X^phi.
    penalty_weight overrides the gated Lam (0.0 drops the penalty).
    """
    if batch.phi_vjp is None:
        raise MissingTapeError("outer_gradient needs the policy VJP of (x_theta, x_phi)")
    terms = _batch_terms(batch, dist, util, wspec, lstate, kde, objective_sign, penalty_weight)
    n = batch.size
    theta_cotangent = -smoothed_vjp(
        batch.x_theta, terms.rdeu_coef - terms.penalty_coef, kde, terms.h_theta, diagnostics
    ) / n
    phi_cotangent = np.zeros(n)
    if np.any(terms.penalty_coef != 0.0):
        by_phi_index = np.zeros(n)
        by_phi_index[terms.pairing] = terms.penalty_coef
        phi_cotangent = -smoothed_vjp(batch.x_phi, by_phi_index, kde, None, diagnostics) / n
    return batch.phi_vjp(theta_cotangent, phi_cotangent)


@dataclass(frozen=True)
class FrozenRanks:
    """Ranks, bandwidths and pairing of a reference batch"""
    theta_levels: FloatArray
    h_theta: float
    phi_levels: Optional[FloatArray]
    h_phi: Optional[float]
    pairing: IndexArray


def freeze_ranks(x_theta, x_phi, kde: KdeSpec) -> FrozenRanks:
    """Freeze the KDE ranks of both samples and their comonotone pairing

    A degenerate X^phi sample (no Silverman bandwidth) is frozen by value.
    """
    x_theta = as_sample(x_theta, "x_theta")
    x_phi = as_sample(x_phi, "x_phi")
    h_theta = resolve_bandwidth(x_theta, kde)
    try:
        h_phi = resolve_bandwidth(x_phi, kde)
        phi_levels = cdf_hat(x_phi, x_phi, kde, h_phi)
    except DegenerateBandwidthError:
        h_phi, phi_levels = None, None
    return FrozenRanks(
        theta_levels=cdf_hat(x_theta, x_theta, kde, h_theta),
        h_theta=h_theta,
        phi_levels=phi_levels,
        h_phi=h_phi,
        pairing=comonotonic_permutation(x_theta, x_phi),
    )


def surrogate_lagrangian(
    frozen: FrozenRanks,
    x_theta,
    x_phi,
    dist: DistortionSpec,
    util: UtilitySpec,
    wspec: WassersteinSpec,
    lstate: LagrangeState,
    kde: KdeSpec,
    objective_sign: float = 1.0,
    penalty_weight: Optional[float] = None,
) -> float:
    """The batch functional whose exact gradient the estimators return

    Each sample is replaced by the KDE quantile of the current sample at its
    frozen rank, so at the reference batch the values are unchanged.
    """
    x_theta = as_sample(x_theta, "x_theta")
    x_phi = as_sample(x_phi, "x_phi")
    smoothed = quantile_hat(x_theta, frozen.theta_levels, kde, frozen.h_theta, initial=x_theta)
    if frozen.phi_levels is None:
        smoothed_phi = x_phi
    else:
        smoothed_phi = quantile_hat(x_phi, frozen.phi_levels, kde, frozen.h_phi, initial=x_phi)
    risk = -float(np.mean(util.u(smoothed) * dist.gamma(frozen.theta_levels)))
    cost = float(np.mean(np.abs(smoothed - smoothed_phi[frozen.pairing]) ** wspec.order_p))
    if penalty_weight is not None:
        return objective_sign * risk + penalty_weight * cost
    excess = max(cost - wspec.radius_power, 0.0)
    return objective_sign * risk + lstate.lam * excess + 0.5 * lstate.mu * excess ** 2
