"""
Outer problem: train the policy against the worst case found by the inner
problem, one ADAM step per inner solve.
"""
from typing import List, Optional, Union

from numpy.random import SeedSequence

from ..domain.density import KdeDiagnostics, KdeSpec
from ..domain.networks import Mlp
from ..domain.training import (
    AdamState,
    OuterSolution,
    OuterTraceRow,
    RobustProblem,
    StoppingRule,
    TraceRow,
)
from ..interfaces.scenarios import Adversary, Scenario
from ..log_utils import RobustRdeuLogger, log_execution_time
from ..services.gradients import outer_gradient
from ..services.optim import adam_step, stopping_satisfied
from ..services.risk import rdeu
from ..services.seeding import as_generator, spawn
from .inner import SolveInnerProblem

logger = RobustRdeuLogger()


class SolveOuterProblem:
    """Alternate inner solves and outer steps taken with the penalty switched off"""

    def __init__(
        self,
        scenario: Scenario,
        problem: RobustProblem,
        kde: KdeSpec,
        inner: SolveInnerProblem,
        stopping: StoppingRule,
        warm_inner_stopping: Optional[StoppingRule] = None,
        learning_rate: float = 1e-3,
        batch_size: int = 512,
    ):
        self.scenario = scenario
        self.problem = problem
        self.kde = kde
        self.inner = inner
        self.stopping = stopping
        self.warm_inner_stopping = warm_inner_stopping
        self.learning_rate = learning_rate
        self.batch_size = batch_size

    @log_execution_time(logger)
    def execute(
        self,
        policy: Mlp,
        adversary: Adversary,
        seed: Union[int, SeedSequence],
        run_id: Optional[str] = None,
    ) -> OuterSolution:
        """Alternate until the worst-case risk settles or the outer cap is hit"""
        problem = self.problem
        cap = self.stopping.max_iterations
        # two child streams per outer iteration: the inner solve and the outer batch
        children = spawn(seed, 2 * cap)
        params = policy.parameters()
        adam = AdamState.create(params.size, learning_rate=self.learning_rate)
        diagnostics = KdeDiagnostics()
        history: List[float] = []
        trace: List[OuterTraceRow] = []
        inner_trace: List[TraceRow] = []
        # multipliers persist across inner solves
        lagrange = self.inner.lagrange
        skipped = 0
        converged = False
        iteration = 0

        for iteration in range(1, cap + 1):
            inner_seed, batch_seed = children[2 * iteration - 2], children[2 * iteration - 1]
            stopping = self.inner.stopping if iteration == 1 else (self.warm_inner_stopping or self.inner.stopping)
            solution, candidate = self.inner.execute(
                adversary, policy, inner_seed, run_id=run_id, lagrange=lagrange,
                stopping=stopping, outer_iteration=iteration,
            )
            inner_trace.extend(solution.trace)
            lagrange = solution.lagrange
            if not solution.constraint_satisfied:
                escalated = self.inner.escalated(solution.lagrange)
                logger.warning(
                    f"Inner solve left the ball (d={solution.distance:.4g}); "
                    f"re-running with mu={escalated.mu:.4g}",
                    run_id=run_id,
                )
                solution, candidate = self.inner.execute(
                    adversary, policy, inner_seed, run_id=run_id, lagrange=escalated,
                    stopping=stopping, outer_iteration=iteration,
                )
                inner_trace.extend(solution.trace)
                lagrange = solution.lagrange

            if not solution.constraint_satisfied:
                # the next solve restarts from the last adversary inside the ball
                skipped += 1
                logger.warning(
                    f"Skipping outer step {iteration}: constraint still violated",
                    run_id=run_id,
                )
                trace.append(OuterTraceRow(
                    iteration=iteration,
                    rdeu=solution.reference_rdeu,
                    worst_case_rdeu=solution.rdeu,
                    wasserstein=solution.distance,
                    inner_iterations=solution.iterations,
                    inner_converged=solution.converged,
                    step_taken=False,
                ))
                continue

            adversary = candidate
            outcome = self.scenario.outcomes(policy, self.batch_size, as_generator(batch_seed))
            batch = adversary.batch(outcome)
            grad = outer_gradient(
                batch,
                problem.distortion,
                problem.utility,
                problem.wasserstein,
                lagrange,
                self.kde,
                objective_sign=1.0,
                penalty_weight=0.0,
                diagnostics=diagnostics,
            )
            params, adam = adam_step(adam, params, grad)
            policy = policy.with_parameters(params)

            history.append(solution.rdeu)
            trace.append(OuterTraceRow(
                iteration=iteration,
                rdeu=rdeu(batch.x_phi, problem.distortion, problem.utility),
                worst_case_rdeu=solution.rdeu,
                wasserstein=solution.distance,
                inner_iterations=solution.iterations,
                inner_converged=solution.converged,
                step_taken=True,
            ))
            if stopping_satisfied(self.stopping, history):
                converged = True
                break

        if diagnostics.fallback_rows:
            logger.warning(
                f"{diagnostics.fallback_rows} kernel-weight rows fell back to self-weight",
                run_id=run_id,
            )
        if converged:
            logger.info(f"Outer problem converged after {iteration} iterations", run_id=run_id)
        else:
            logger.warning(f"Outer problem hit the cap of {cap} iterations", run_id=run_id)
        return OuterSolution(
            policy=policy,
            adversary_parameters=adversary.parameters(),
            converged=converged,
            iterations=iteration,
            skipped_steps=skipped,
            trace=tuple(trace),
            inner_trace=tuple(inner_trace),
        )
