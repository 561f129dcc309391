"""
Inner problem: train the adversary that worsens (or, for a benchmark,
improves) the policy's RDEU inside the Wasserstein ball.
"""
import math
from dataclasses import replace
from typing import List, Optional, Tuple

from ..domain.density import KdeDiagnostics, KdeSpec
from ..domain.training import (
    AdamState,
    InnerSolution,
    LagrangeState,
    RobustProblem,
    StoppingRule,
    TraceRow,
)
from ..domain.networks import Mlp
from ..interfaces.scenarios import Adversary, Scenario
from ..log_utils import RobustRdeuLogger, log_execution_time
from ..services.gradients import inner_gradient
from ..services.optim import adam_step, lagrange_update, stopping_satisfied
from ..services.risk import rdeu
from ..services.seeding import Seed, as_generator
from ..services.wasserstein import transport_cost

logger = RobustRdeuLogger()

# objective_sign of the inner driver: it minimises sign * RDEU + penalty
WORSEN = -1.0
IMPROVE = 1.0


class SolveInnerProblem:
    """Augmented-Lagrangian ADAM loop over fresh mini-batches"""

    def __init__(
        self,
        scenario: Scenario,
        problem: RobustProblem,
        kde: KdeSpec,
        stopping: StoppingRule,
        lagrange: LagrangeState,
        learning_rate: float = 1e-3,
        batch_size: int = 512,
        objective_sign: float = WORSEN,
        validation_slack: float = 0.05,
    ):
        self.scenario = scenario
        self.problem = problem
        self.kde = kde
        self.stopping = stopping
        self.lagrange = lagrange
        self.learning_rate = learning_rate
        self.batch_size = batch_size
        self.objective_sign = objective_sign
        self.validation_slack = validation_slack

    def _within_ball(self, cost: float, slack: float = 0.0) -> bool:
        wspec = self.problem.wasserstein
        if math.isinf(wspec.epsilon):
            return True
        return cost ** (1.0 / wspec.order_p) <= wspec.epsilon * (1.0 + slack)

    @log_execution_time(logger)
    def execute(
        self,
        adversary: Adversary,
        policy: Optional[Mlp],
        seed: Seed,
        run_id: Optional[str] = None,
        lagrange: Optional[LagrangeState] = None,
        stopping: Optional[StoppingRule] = None,
        outer_iteration: int = 0,
    ) -> Tuple[InnerSolution, Adversary]:
        """Train the adversary; on hitting the cap the best feasible iterate is returned"""
        problem = self.problem
        wspec = problem.wasserstein
        stopping = stopping or self.stopping
        state = lagrange or self.lagrange
        rng = as_generator(seed)
        diagnostics = KdeDiagnostics()

        params = adversary.parameters()
        adam = AdamState.create(params.size, learning_rate=self.learning_rate)
        history: List[float] = []
        trace: List[TraceRow] = []
        best_objective, best_params = math.inf, None
        converged = False
        iteration = 0

        for iteration in range(1, stopping.max_iterations + 1):
            outcome = self.scenario.outcomes(policy, self.batch_size, rng)
            batch = adversary.batch(outcome)
            risk = rdeu(batch.x_theta, problem.distortion, problem.utility)
            cost = transport_cost(batch.x_theta, batch.x_phi, wspec.order_p)
            excess = max(cost - wspec.radius_power, 0.0)
            trace.append(TraceRow(
                iteration=iteration,
                rdeu=risk,
                wasserstein=cost ** (1.0 / wspec.order_p),
                lam=state.lam,
                mu=state.mu,
                constraint_error=excess,
                outer_iteration=outer_iteration,
            ))
            objective = self.objective_sign * risk
            history.append(objective)
            feasible = self._within_ball(cost)
            # ranked by the gain over the same batch without the adversary
            relative = objective - self.objective_sign * rdeu(batch.x_phi, problem.distortion, problem.utility)
            if feasible and relative < best_objective:
                best_objective, best_params = relative, params.copy()

            if stopping_satisfied(stopping, history) and (feasible or not stopping.require_feasible):
                converged = True
                break

            grad = inner_gradient(
                batch,
                problem.distortion,
                problem.utility,
                wspec,
                state,
                self.kde,
                objective_sign=self.objective_sign,
                diagnostics=diagnostics,
            )
            params, adam = adam_step(adam, params, grad)
            adversary = adversary.with_parameters(params)

            if iteration % state.update_period == 0:
                state = lagrange_update(state, excess)
                logger.debug(
                    f"Multiplier update at inner iteration {iteration}: "
                    f"lambda={state.lam:.6g}, mu={state.mu:.6g}, c={excess:.3g}",
                    run_id=run_id,
                )

        if diagnostics.fallback_rows:
            logger.warning(
                f"{diagnostics.fallback_rows} kernel-weight rows fell back to self-weight",
                run_id=run_id,
            )
        if converged:
            logger.info(f"Inner problem converged after {iteration} iterations", run_id=run_id)
        else:
            logger.warning(
                f"Inner problem hit the cap of {stopping.max_iterations} iterations; "
                "keeping the best feasible iterate",
                run_id=run_id,
            )
            if best_params is not None:
                adversary = adversary.with_parameters(best_params)

        outcome = self.scenario.outcomes(policy, self.batch_size, rng)
        batch = adversary.batch(outcome)
        cost = transport_cost(batch.x_theta, batch.x_phi, wspec.order_p)
        solution = InnerSolution(
            parameters=adversary.parameters(),
            rdeu=rdeu(batch.x_theta, problem.distortion, problem.utility),
            reference_rdeu=rdeu(batch.x_phi, problem.distortion, problem.utility),
            distance=cost ** (1.0 / wspec.order_p),
            constraint_satisfied=self._within_ball(cost, self.validation_slack),
            converged=converged,
            iterations=iteration,
            lagrange=state,
            trace=tuple(trace),
        )
        return solution, adversary

    def escalated(self, state: LagrangeState) -> LagrangeState:
        """Multipliers for a re-run after a constraint violation"""
        return replace(state, mu=min(state.growth * state.mu, state.max_mu))
