"""Score-function gradients of the smoothed outcome CDF under randomised policies"""
from typing import Optional

import numpy as np

from ..domain.arrays import FloatArray, VectorJacobianProduct, as_sample
from ..domain.density import KdeSpec
from ..domain.errors import EmptySampleError, LengthMismatchError, ShapeMismatchError, check_finite
from ..domain.networks import Mlp
from ..domain.training import PathBatch
from .density import kernel_cdf, kernel_pdf, resolve_bandwidth, row_blocks
from .nn import backward, forward


def _checked(paths: PathBatch) -> PathBatch:
    if paths.size == 0:
        raise EmptySampleError("Randomised-policy gradients need at least one path")
    check_finite(paths.scores, "path scores")
    return paths


def randomized_cdf_gradient(
    paths: PathBatch,
    x_grid,
    kde: KdeSpec,
    h: Optional[float] = None,
) -> FloatArray:
    """grad G_hat(x) = sum_m w_m score_m Phi((x - x_m) / h), one row per grid point

    With uniform weights 1/M this is the Monte Carlo estimator; exact path
    probabilities as weights give the enumerated gradient.
    """
    paths = _checked(paths)
    h = resolve_bandwidth(paths.terminal, kde, h)
    grid = np.atleast_1d(as_sample(x_grid, "x_grid"))
    weighted_scores = paths.path_weights()[:, None] * paths.scores
    result = np.empty((grid.size, paths.scores.shape[1]))
    for rows in row_blocks(grid.size, paths.size):
        smoothing = kernel_cdf(kde.kernel, (grid[rows, None] - paths.terminal[None, :]) / h)
        result[rows] = smoothing @ weighted_scores
    return result


def randomized_phi_vjp(
    paths: PathBatch,
    kde: KdeSpec,
    h: Optional[float] = None,
) -> VectorJacobianProduct:
    """VJP of the quantile sensitivities -grad G_hat(x_m) / g_hat(x_m) at the path outcomes

    Lets outer_gradient treat a randomised policy like a deterministic one:
    the sensitivity of the outcome at a fixed rank replaces grad x_m.
    """
    paths = _checked(paths)
    h = resolve_bandwidth(paths.terminal, kde, h)
    weights = paths.path_weights()
    weighted_scores = weights[:, None] * paths.scores
    terminal = paths.terminal
    densities = np.empty(paths.size)
    for rows in row_blocks(paths.size, paths.size):
        u = (terminal[rows, None] - terminal[None, :]) / h
        densities[rows] = kernel_pdf(kde.kernel, u) @ weights / h

    def vjp(cotangent) -> FloatArray:
        cotangent = as_sample(cotangent, "cotangent")
        if cotangent.size != paths.size:
            raise LengthMismatchError("One cotangent entry per path expected")
        scaled = -cotangent / densities
        gradient = np.zeros(paths.scores.shape[1])
        for rows in row_blocks(paths.size, paths.size):
            smoothing = kernel_cdf(kde.kernel, (terminal[rows, None] - terminal[None, :]) / h)
            gradient += scaled[rows] @ (smoothing @ weighted_scores)
        return gradient

    return vjp


def softmax_path_scores(policy: Mlp, inputs, actions) -> FloatArray:
    """Sum over time of grad log pi(a_t | x_t) for a softmax policy, one row per path

    inputs has shape (M, T, n_in) and actions (M, T) with integer actions.
    """
    inputs = np.asarray(inputs, dtype=np.float64)
    actions = np.asarray(actions)
    if inputs.ndim != 3 or actions.shape != inputs.shape[:2]:
        raise ShapeMismatchError("inputs must be (M, T, n_in) and actions (M, T)")
    scores = np.empty((inputs.shape[0], policy.parameter_count))
    steps = np.arange(inputs.shape[1])
    for m in range(inputs.shape[0]):
        probabilities, tape = forward(policy, inputs[m])
        cotangent = np.zeros_like(probabilities)
        cotangent[steps, actions[m]] = 1.0 / probabilities[steps, actions[m]]
        scores[m], _ = backward(policy, tape, cotangent)
    return scores
