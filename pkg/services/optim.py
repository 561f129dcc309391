"""ADAM steps and the augmented-Lagrangian multiplier controller"""
from dataclasses import replace
from typing import Sequence, Tuple

import numpy as np

from ..domain.arrays import FloatArray
from ..domain.errors import DomainError, ShapeMismatchError, check_finite
from ..domain.enums.experiments import StoppingKind
from ..domain.training import AdamState, LagrangeState, StoppingRule


def adam_step(state: AdamState, params, grad) -> Tuple[FloatArray, AdamState]:
    """One bias-corrected ADAM descent step; returns new parameters and state"""
    params = np.asarray(params, dtype=np.float64)
    grad = np.asarray(grad, dtype=np.float64)
    if params.shape != grad.shape or grad.shape != state.first_moment.shape:
        raise ShapeMismatchError(
            f"ADAM shapes differ: params {params.shape}, grad {grad.shape}, "
            f"state {state.first_moment.shape}"
        )
    check_finite(grad, "ADAM gradient")

    step = state.step + 1
    first = state.beta1 * state.first_moment + (1.0 - state.beta1) * grad
    second = state.beta2 * state.second_moment + (1.0 - state.beta2) * (grad * grad)
    first_hat = first / (1.0 - state.beta1 ** step)
    second_hat = second / (1.0 - state.beta2 ** step)
    updated = params - state.learning_rate * first_hat / (np.sqrt(second_hat) + state.stability)
    return updated, replace(state, first_moment=first, second_moment=second, step=step)


def lagrange_update(state: LagrangeState, constraint_err: float) -> LagrangeState:
    """lam <- lam + mu c, then mu <- growth mu capped at max_mu"""
    if not constraint_err >= 0.0:
        raise DomainError(f"constraint error must be nonnegative, got {constraint_err}")
    return replace(
        state,
        lam=state.lam + state.mu * constraint_err,
        mu=min(state.growth * state.mu, state.max_mu),
    )


def lagrangian_value(rdeu_val: float, constraint_err: float, state: LagrangeState) -> float:
    """rdeu + lam c + (mu / 2) c^2"""
    return rdeu_val + state.lam * constraint_err + 0.5 * state.mu * constraint_err ** 2


def stopping_satisfied(rule: StoppingRule, history: Sequence[float]) -> bool:
    """Whether a minimised objective has settled according to the rule"""
    window = rule.window
    if rule.kind == StoppingKind.NO_IMPROVEMENT:
        if len(history) <= window:
            return False
        return min(history[-window:]) >= min(history[:-window])
    if len(history) < 2 * window:
        return False
    previous = float(np.mean(history[-2 * window:-window]))
    latest = float(np.mean(history[-window:]))
    scale = max(abs(previous), abs(latest), 1e-12)
    return abs(latest - previous) <= rule.tolerance * scale
