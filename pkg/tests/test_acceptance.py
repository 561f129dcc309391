"""
End-to-end behaviour of whole runs. Tests marked slow train at desk scale and
are deselected by default; run them with `pytest -m slow`.
"""
import math
from pathlib import Path

import numpy as np
import pytest

from ..base_settings import create_reposet
from ..domain import (
    AlphaBeta,
    FactorMarketSpec,
    KdeSpec,
    LagrangeState,
    Linear,
    RobustProblem,
    StoppingRule,
    WassersteinSpec,
)
from ..interfaces.requests import load_config, validate_config
from ..markets.adversaries import ResidualAdversary
from ..markets.factor import FactorPortfolioScenario
from ..repositories.csv import METADATA_FILE, CsvArtifactRepository
from ..repositories.parameters import FileParameterRepository
from ..services.nn import init_mlp
from ..usecases.experiment import RunExperiment
from ..usecases.inner import WORSEN, SolveInnerProblem

CONFIGS = Path(__file__).resolve().parents[1] / "configs"
RUN_DIR = "runs/acceptance"


def _small_portfolio():
    return validate_config({
        "experiment": {"name": "portfolio", "seed": 11},
        "training": {
            "batch_size": "128",
            "inner_max_iterations": "8",
            "inner_steps_per_outer": "4",
            "outer_max_iterations": "3",
            "window": "2",
            "outer_window": "1",
            "lagrange_period": "3",
        },
        "adversary": {"hidden_layers": "4"},
        "market": {"portfolio": {"d": "3"}},
        "sweep": {"epsilon": "0.01, 0.1"},
    })


class TestUnconstrainedAdversary:
    def test_window_means_keep_rising(self):
        """Without a ball the adversary can only make things worse"""
        inner = SolveInnerProblem(
            FactorPortfolioScenario(FactorMarketSpec(d=3)),
            RobustProblem(AlphaBeta(0.1, 0.9, 0.75), Linear(), WassersteinSpec(2.0, math.inf)),
            KdeSpec(),
            stopping=StoppingRule(tolerance=1e-12, window=50, max_iterations=200, require_feasible=True),
            lagrange=LagrangeState(),
            learning_rate=1e-2,
            batch_size=256,
            objective_sign=WORSEN,
        )
        policy = init_mlp((1, 3), seed=1, output_activation="softmax", zero_output_layer=True)
        adversary = ResidualAdversary(init_mlp((1, 8, 1), seed=2, zero_output_layer=True))
        solution, _ = inner.execute(adversary, policy, seed=5)

        assert solution.iterations == 200
        assert solution.constraint_satisfied
        risks = np.array([row.rdeu for row in solution.trace])
        means = risks.reshape(4, 50).mean(axis=1)
        assert np.all(np.diff(means) > 0.0)


class TestPortfolioPolicy:
    def test_weights_leave_equal_weighting(self, memory_reposet):
        config = _small_portfolio().with_overrides(**{"sweep.epsilon": (math.inf,)})
        RunExperiment(memory_reposet).execute(config, RUN_DIR, run_id="portfolio-11")
        weights = memory_reposet["artifact_repository"].read_table(RUN_DIR, "weights")["weight"].to_numpy()
        assert weights.sum() == pytest.approx(1.0)
        assert np.max(np.abs(weights - 1.0 / 3.0)) > 0.005


class TestReproducibility:
    def test_same_seed_same_files(self, tmp_path):
        config = _small_portfolio()
        runs = []
        for name in ("first", "second"):
            reposet = create_reposet(
                artifact_repository=CsvArtifactRepository(),
                parameter_repository=FileParameterRepository(),
            )
            run_dir = tmp_path / name
            RunExperiment(reposet).execute(config, str(run_dir), run_id=f"portfolio-{name}")
            runs.append(run_dir)

        first, second = runs
        files = sorted(
            path.relative_to(first) for path in first.rglob("*") if path.is_file() and path.name != METADATA_FILE
        )
        assert any(path.suffix == ".csv" for path in files)
        assert any(path.name == "policy_parameters.txt" for path in files)
        for path in files:
            assert (first / path).read_bytes() == (second / path).read_bytes(), str(path)
        assert sorted(
            path.relative_to(second) for path in second.rglob("*") if path.is_file() and path.name != METADATA_FILE
        ) == files


@pytest.mark.slow
class TestDeskScale:
    def test_portfolio_spreads_out_as_the_ball_grows(self, memory_reposet):
        config = load_config(CONFIGS / "portfolio.ini")
        result = RunExperiment(memory_reposet).execute(config, RUN_DIR, run_id="portfolio-desk")
        artifacts = memory_reposet["artifact_repository"]
        small, large = result.cases[0], result.cases[-1]
        assert small.summary.epsilon < large.summary.epsilon

        def weight_spread(case):
            prefix = case.case_dir[len(RUN_DIR) + 1:]
            return float(np.std(artifacts.read_table(RUN_DIR, f"{prefix}/weights")["weight"]))

        assert weight_spread(large) < weight_spread(small)
        assert large.summary.ute_beta < small.summary.ute_beta

    def test_lower_tail_weight_trades_mean_for_tail(self, memory_reposet):
        """Majority over five seeds: all weight on the lower tail buys CVaR and costs mean"""
        base = load_config(CONFIGS / "statarb.ini")
        votes = 0
        for seed in range(5):
            config = base.with_overrides(**{"experiment.seed": seed, "sweep.p_weight": (1.0, 0.75)})
            run_dir = f"{RUN_DIR}/statarb-{seed}"
            result = RunExperiment(memory_reposet).execute(config, run_dir, run_id=f"statarb-{seed}")
            tail_only, mixed = result.cases[0].summary, result.cases[1].summary
            assert (tail_only.p_weight, mixed.p_weight) == (1.0, 0.75)
            if tail_only.cvar_alpha >= mixed.cvar_alpha and mixed.mean >= tail_only.mean:
                votes += 1
        assert votes >= 3
