"""
Result models returned by the experiment and report use cases.
"""

from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from ..domain.enums.experiments import ExperimentType

SUMMARY_COLUMNS = [
    "experiment",
    "epsilon",
    "p_weight",
    "cvar_alpha",
    "ute_beta",
    "mean",
    "wasserstein_p",
    "iterations",
    "converged",
]


class SummaryRow(BaseModel):
    """One row of summary.csv"""
    model_config = ConfigDict(extra="forbid", frozen=True)

    experiment: ExperimentType = Field(..., description="Experiment name")
    epsilon: float = Field(..., description="Radius of the Wasserstein ball")
    p_weight: float = Field(..., description="Lower-tail weight of the distortion")
    cvar_alpha: float = Field(..., description="CVaR at level alpha of the terminal wealth")
    ute_beta: float = Field(..., description="Upper tail expectation at level beta")
    mean: float = Field(..., description="Sample mean of the terminal wealth")
    wasserstein_p: float = Field(..., description="Distance of the worst case to the reference")
    iterations: int = Field(..., description="Iterations of the driving loop")
    converged: bool = Field(..., description="Whether the stopping rule fired before the cap")


class CaseResult(BaseModel):
    """Summary rows and artifact directory of one sweep case"""
    model_config = ConfigDict(extra="forbid", frozen=True)

    case_dir: str = Field(..., description="Directory holding the case artifacts")
    summary: SummaryRow = Field(..., description="Statistics of the optimised distribution")
    adversary_summary: SummaryRow = Field(..., description="Statistics of the distribution on the other side of the ball")


class RunResult(BaseModel):
    """Outcome of a complete experiment run"""
    model_config = ConfigDict(extra="forbid", frozen=True)

    run_dir: str = Field(..., description="Root directory of the run")
    cases: List[CaseResult] = Field(default_factory=list)
    status: Literal["converged", "not_converged"] = Field(..., description="Overall status")

    @property
    def converged(self) -> bool:
        return self.status == "converged"

    @property
    def exit_code(self) -> int:
        return 0 if self.converged else 3


class ReportResult(BaseModel):
    """Rendered summary table of a finished run and the histogram files written"""
    model_config = ConfigDict(extra="forbid", frozen=True)

    run_dir: str = Field(..., description="Run directory that was summarised")
    table: str = Field(..., description="Plain-text summary table")
    histogram_files: List[str] = Field(default_factory=list)
    bins: Optional[int] = Field(None, description="Number of histogram bins")
