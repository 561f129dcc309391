"""Experiment runner: builds the drivers for each sweep case and writes the artifacts"""
from dataclasses import asdict, dataclass, fields
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from ..base_settings import RepoSet
from ..domain.enums.experiments import Experiment
from ..domain.enums.networks import OutputActivation
from ..domain.networks import Mlp
from ..domain.training import OuterTraceRow, RobustProblem, TraceRow
from ..interfaces.requests import ExperimentConfig
from ..interfaces.responses import CaseResult, RunResult, SummaryRow
from ..interfaces.scenarios import Adversary, Scenario
from ..log_utils import RobustRdeuLogger, log_execution_time
from ..markets.adversaries import ResidualAdversary, StrategyAdversary
from ..markets.benchmark import BenchmarkScenario, benchmark_strategy_init
from ..markets.factor import FactorPortfolioScenario, portfolio_weights
from ..markets.statarb import StatArbScenario, statarb_heatmap
from ..services.nn import init_mlp
from ..services.risk import rdeu_summary
from ..services.seeding import as_generator, spawn
from ..services.wasserstein import distance
from .inner import IMPROVE, WORSEN, SolveInnerProblem
from .outer import SolveOuterProblem

logger = RobustRdeuLogger()

HEATMAP_POINTS = 41


@dataclass
class _Setup:
    scenario: Scenario
    policy: Optional[Mlp]
    adversary: Adversary
    objective_sign: float


def case_name(epsilon: float, p_weight: float) -> str:
    return f"eps={epsilon:g}_p={p_weight:g}"


def _frame(rows, row_type) -> pd.DataFrame:
    return pd.DataFrame([asdict(row) for row in rows], columns=[f.name for f in fields(row_type)])


class RunExperiment:
    """Run every (epsilon, p_weight) case of a configuration"""

    def __init__(self, reposet: RepoSet):
        self.artifacts = reposet["artifact_repository"]
        self.parameters = reposet["parameter_repository"]

    def _setup(self, config: ExperimentConfig, seeds: List[np.random.SeedSequence]) -> _Setup:
        name = config.experiment.name
        policy_seed, adversary_seed = seeds
        adversary_hidden = config.adversary.hidden_layers
        policy_hidden = config.policy.hidden_layers

        if name == Experiment.BENCHMARK:
            spec = config.market.benchmark.to_spec()
            strategy = init_mlp((spec.d + 2, *adversary_hidden, spec.d), adversary_seed)
            return _Setup(
                scenario=BenchmarkScenario(spec),
                policy=None,
                adversary=StrategyAdversary(benchmark_strategy_init(strategy, spec.benchmark_weights), spec),
                objective_sign=IMPROVE,
            )

        residual = ResidualAdversary(init_mlp((1, *adversary_hidden, 1), adversary_seed, zero_output_layer=True))
        if name == Experiment.STATARB:
            spec = config.market.statarb.to_spec()
            policy = init_mlp(
                (3, *policy_hidden, 1),
                policy_seed,
                output_activation=OutputActivation.SCALED_TANH,
                output_scale=spec.inventory_bound,
            )
            return _Setup(StatArbScenario(spec), policy, residual, WORSEN)

        # portfolio and inner-only: the static allocation starts equally weighted
        spec = config.market.portfolio.to_spec()
        policy = init_mlp(
            (1, spec.d),
            policy_seed,
            output_activation=OutputActivation.SOFTMAX,
            zero_output_layer=True,
        )
        return _Setup(FactorPortfolioScenario(spec), policy, residual, WORSEN)

    def _summary_row(
        self,
        config: ExperimentConfig,
        values: np.ndarray,
        epsilon: float,
        p_weight: float,
        wasserstein_p: float,
        iterations: int,
        converged: bool,
    ) -> SummaryRow:
        stats = rdeu_summary(values, config.risk.alpha, config.risk.beta)
        return SummaryRow(
            experiment=config.experiment.name,
            epsilon=epsilon,
            p_weight=p_weight,
            cvar_alpha=stats.cvar_alpha,
            ute_beta=stats.ute_beta,
            mean=stats.mean,
            wasserstein_p=wasserstein_p,
            iterations=iterations,
            converged=converged,
        )

    def _run_case(
        self,
        config: ExperimentConfig,
        run_dir: str,
        prefix: str,
        epsilon: float,
        p_weight: float,
        seed: np.random.SeedSequence,
        run_id: Optional[str],
    ) -> CaseResult:
        policy_seed, adversary_seed, train_seed, eval_seed = spawn(seed, 4)
        setup = self._setup(config, [policy_seed, adversary_seed])
        training = config.training
        problem = RobustProblem(
            distortion=config.risk.to_distortion(p_weight),
            utility=config.risk.to_utility(),
            wasserstein=config.wasserstein.to_spec(epsilon),
        )
        kde = config.kde.to_spec()
        inner = SolveInnerProblem(
            setup.scenario,
            problem,
            kde,
            stopping=training.inner_stopping(),
            lagrange=training.lagrange(),
            learning_rate=training.inner_learning_rate,
            batch_size=training.batch_size,
            objective_sign=setup.objective_sign,
            validation_slack=training.validation_slack,
        )

        policy, adversary = setup.policy, setup.adversary
        name = config.experiment.name
        if name in (Experiment.PORTFOLIO, Experiment.STATARB):
            outer = SolveOuterProblem(
                setup.scenario,
                problem,
                kde,
                inner,
                stopping=training.outer_stopping(),
                warm_inner_stopping=training.warm_inner_stopping(),
                learning_rate=training.outer_learning_rate,
                batch_size=training.batch_size,
            )
            solution = outer.execute(policy, adversary, train_seed, run_id=run_id)
            policy = solution.policy
            adversary = adversary.with_parameters(solution.adversary_parameters)
            iterations, converged = solution.iterations, solution.converged
            inner_trace = solution.inner_trace
            self.artifacts.write_table(run_dir, f"{prefix}outer_trace", _frame(solution.trace, OuterTraceRow))
        else:
            inner_solution, adversary = inner.execute(adversary, policy, train_seed, run_id=run_id)
            iterations, converged = inner_solution.iterations, inner_solution.converged
            inner_trace = inner_solution.trace
        self.artifacts.write_table(run_dir, f"{prefix}trace", _frame(inner_trace, TraceRow))

        outcome = setup.scenario.outcomes(policy, training.batch_size, as_generator(eval_seed))
        batch = adversary.batch(outcome)
        x_phi, x_theta = batch.x_phi, batch.x_theta
        self.artifacts.write_table(run_dir, f"{prefix}wealth", pd.DataFrame({"x_phi": x_phi, "x_theta": x_theta}))
        gap = distance(x_theta, x_phi, problem.wasserstein)

        # benchmark and inner-only runs report the adversary side as the result
        primary, other = (x_theta, x_phi) if name in (Experiment.BENCHMARK, Experiment.INNER_ONLY) else (x_phi, x_theta)
        summary = self._summary_row(config, primary, epsilon, p_weight, gap, iterations, converged)
        adversary_summary = self._summary_row(config, other, epsilon, p_weight, gap, iterations, converged)

        if name == Experiment.PORTFOLIO:
            weights = portfolio_weights(policy)
            self.artifacts.write_table(
                run_dir,
                f"{prefix}weights",
                pd.DataFrame({"asset": np.arange(1, weights.size + 1), "weight": weights}),
            )
        if name == Experiment.STATARB:
            self.artifacts.write_table(run_dir, f"{prefix}heatmap", self._heatmap(config, policy))

        case_dir = f"{run_dir}/{prefix}".rstrip("/")
        if policy is not None:
            self.parameters.save(f"{case_dir}/policy_parameters.txt", policy)
        self.parameters.save(f"{case_dir}/adversary_parameters.txt", adversary.network)
        return CaseResult(case_dir=case_dir, summary=summary, adversary_summary=adversary_summary)

    def _heatmap(self, config: ExperimentConfig, policy: Mlp) -> pd.DataFrame:
        spec = config.market.statarb.to_spec()
        spread = 3.0 * spec.sigma / np.sqrt(2.0 * spec.kappa)
        inventories = np.linspace(-spec.inventory_bound, spec.inventory_bound, HEATMAP_POINTS)
        prices = np.linspace(spec.mean_level - spread, spec.mean_level + spread, HEATMAP_POINTS)
        trades = statarb_heatmap(policy, spec, inventories, prices)
        q_grid, s_grid = np.meshgrid(inventories, prices, indexing="ij")
        return pd.DataFrame({"inventory": q_grid.ravel(), "price": s_grid.ravel(), "trade": trades.ravel()})

    @log_execution_time(logger)
    def execute(self, config: ExperimentConfig, run_dir: str, run_id: Optional[str] = None) -> RunResult:
        """Run all cases, write the combined summaries and the run metadata"""
        started = datetime.now(timezone.utc)
        cases: List[Tuple[float, float]] = config.cases()
        seeds = spawn(config.experiment.seed, len(cases))
        logger.info(
            f"Running {config.experiment.name} with {len(cases)} case(s) into {run_dir}",
            run_id=run_id,
        )

        results: List[CaseResult] = []
        for (epsilon, p_weight), seed in zip(cases, seeds):
            prefix = "" if len(cases) == 1 else f"{case_name(epsilon, p_weight)}/"
            results.append(self._run_case(config, run_dir, prefix, epsilon, p_weight, seed, run_id))

        self.artifacts.write_table(
            run_dir, "summary", pd.DataFrame([case.summary.model_dump() for case in results])
        )
        self.artifacts.write_table(
            run_dir, "adversary_summary", pd.DataFrame([case.adversary_summary.model_dump() for case in results])
        )

        converged = all(case.summary.converged for case in results)
        metadata: Dict[str, Any] = {
            "started_at": started.isoformat(),
            "finished_at": datetime.now(timezone.utc).isoformat(),
            "run_id": run_id,
            "config": config.model_dump(mode="json"),
            "cases": [case.case_dir for case in results],
            "converged": converged,
        }
        self.artifacts.write_metadata(run_dir, metadata)
        if not converged:
            logger.warning("At least one case stopped at its iteration cap", run_id=run_id)
        return RunResult(
            run_dir=run_dir,
            cases=results,
            status="converged" if converged else "not_converged",
        )
