"""Tests for score-function gradients of the smoothed outcome CDF"""
import itertools

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.stats import norm

from ..domain import EmptySampleError, KdeSpec, LengthMismatchError, PathBatch, ShapeMismatchError
from ..services.nn import forward, init_mlp
from ..services.randomized import randomized_cdf_gradient, randomized_phi_vjp, softmax_path_scores
from ..testing.gradcheck import central_difference, relative_error

# reward[state, action]; the next state is the action taken
CHAIN_REWARDS = np.array([[0.0, 1.0], [0.5, -0.3]])
CHAIN_STEPS = 3
CHAIN_BANDWIDTH = 0.4


def _chain_paths(policy):
    """Every action sequence of the two-state chain with its features, terminal value and probability"""
    sequences = np.array(list(itertools.product((0, 1), repeat=CHAIN_STEPS)))
    inputs = np.zeros((sequences.shape[0], CHAIN_STEPS, 2))
    terminal = np.zeros(sequences.shape[0])
    probabilities = np.ones(sequences.shape[0])
    for m, actions in enumerate(sequences):
        state = 0
        for t, action in enumerate(actions):
            inputs[m, t, state] = 1.0
            terminal[m] += CHAIN_REWARDS[state, action]
            state = action
        pi, _ = forward(policy, inputs[m])
        probabilities[m] = np.prod(pi[np.arange(CHAIN_STEPS), actions])
    return sequences, inputs, terminal, probabilities


def _smoothed_chain_cdf(policy, x):
    _, _, terminal, probabilities = _chain_paths(policy)
    return float(np.sum(probabilities * norm.cdf((x - terminal) / CHAIN_BANDWIDTH)))


class TestRandomizedCdfGradient:
    def test_zero_score_gives_zero_gradient(self, rng):
        paths = PathBatch(terminal=rng.normal(size=50), scores=np.zeros((50, 3)))
        gradient = randomized_cdf_gradient(paths, [-1.0, 0.0, 2.0], KdeSpec())
        assert gradient.shape == (3, 3)
        assert not gradient.any()

    def test_gaussian_policy_matches_quadrature(self):
        """a ~ N(phi, 1) and X = a; the score of phi is a - phi"""
        phi, h = 0.3, 0.2
        actions = np.random.default_rng(5).normal(phi, 1.0, size=100_000)
        paths = PathBatch(terminal=actions, scores=(actions - phi)[:, None])
        grid = np.array([-1.0, 0.3, 1.5])
        estimate = randomized_cdf_gradient(paths, grid, KdeSpec(), h=h)[:, 0]
        for x, value in zip(grid, estimate):
            exact, _ = quad(lambda a: norm.cdf((x - a) / h) * (a - phi) * norm.pdf(a - phi), -12.0, 12.0)
            assert value == pytest.approx(exact, rel=0.05)

    def test_enumerated_chain_matches_exact_gradient(self):
        policy = init_mlp((2, 4, 2), seed=11, output_activation="softmax")
        policy = policy.with_parameters(policy.parameters() + np.random.default_rng(11).normal(size=policy.parameter_count))
        sequences, inputs, terminal, probabilities = _chain_paths(policy)
        paths = PathBatch(
            terminal=terminal,
            scores=softmax_path_scores(policy, inputs, sequences),
            weights=probabilities,
        )
        for x in (-0.2, 0.6, 1.4):
            estimate = randomized_cdf_gradient(paths, x, KdeSpec(), h=CHAIN_BANDWIDTH)[0]
            exact = central_difference(
                lambda flat: _smoothed_chain_cdf(policy.with_parameters(flat), x), policy.parameters()
            )
            assert relative_error(estimate, exact) < 1e-3

    def test_enumeration_weights_sum_to_one(self):
        policy = init_mlp((2, 4, 2), seed=12, output_activation="softmax")
        *_, probabilities = _chain_paths(policy)
        assert probabilities.sum() == pytest.approx(1.0)

    def test_empty_paths(self):
        with pytest.raises(EmptySampleError):
            randomized_cdf_gradient(PathBatch(np.zeros(0), np.zeros((0, 2))), 0.0, KdeSpec(), h=1.0)

    def test_path_batch_shapes(self):
        with pytest.raises(LengthMismatchError):
            PathBatch(terminal=np.zeros(3), scores=np.zeros((2, 1)))
        with pytest.raises(LengthMismatchError):
            PathBatch(terminal=np.zeros(3), scores=np.zeros((3, 1)), weights=np.ones(2))


class TestRandomizedPhiVjp:
    def test_quantile_sensitivity_of_a_location_shift(self):
        """Shifting a ~ N(phi, 1) by phi moves every quantile by the same amount"""
        phi = -0.2
        actions = np.random.default_rng(9).normal(phi, 1.0, size=8000)
        paths = PathBatch(terminal=actions, scores=(actions - phi)[:, None])
        central = (np.abs(actions - phi) < 1.0).astype(float)
        vjp = randomized_phi_vjp(paths, KdeSpec())
        assert vjp(central / central.sum())[0] == pytest.approx(1.0, abs=0.1)

    def test_cotangent_length(self, rng):
        paths = PathBatch(terminal=rng.normal(size=20), scores=rng.normal(size=(20, 2)))
        vjp = randomized_phi_vjp(paths, KdeSpec())
        with pytest.raises(LengthMismatchError):
            vjp(np.ones(19))


class TestSoftmaxPathScores:
    def test_scores_are_summed_log_policy_gradients(self, rng):
        policy = init_mlp((2, 3, 2), seed=4, output_activation="softmax")
        inputs = rng.normal(size=(2, 4, 2))
        actions = rng.integers(0, 2, size=(2, 4))
        scores = softmax_path_scores(policy, inputs, actions)

        def log_likelihood(flat, m):
            pi, _ = forward(policy.with_parameters(flat), inputs[m])
            return float(np.sum(np.log(pi[np.arange(4), actions[m]])))

        for m in range(2):
            numeric = central_difference(lambda flat: log_likelihood(flat, m), policy.parameters())
            assert relative_error(scores[m], numeric) < 1e-6

    def test_shape_check(self):
        policy = init_mlp((2, 3, 2), seed=4, output_activation="softmax")
        with pytest.raises(ShapeMismatchError):
            softmax_path_scores(policy, np.zeros((2, 4, 2)), np.zeros((2, 3), dtype=int))
