"""Human-readable summary of a finished run and density histograms of its wealth samples"""
from typing import List, Optional

import numpy as np
import pandas as pd

from ..base_settings import RepoSet
from ..interfaces.responses import SUMMARY_COLUMNS, ReportResult
from ..log_utils import RobustRdeuLogger, log_execution_time

logger = RobustRdeuLogger()

WEALTH_TABLE = "wealth"
HISTOGRAM_TABLE = "histogram"


def histogram_frame(x_phi: np.ndarray, x_theta: np.ndarray, bins: int) -> pd.DataFrame:
    """Counts and densities of both samples on shared bin edges"""
    edges = np.histogram_bin_edges(np.concatenate((x_phi, x_theta)), bins=bins)
    phi_counts, _ = np.histogram(x_phi, bins=edges)
    theta_counts, _ = np.histogram(x_theta, bins=edges)
    widths = np.diff(edges)
    return pd.DataFrame({
        "bin_left": edges[:-1],
        "bin_right": edges[1:],
        "x_phi_count": phi_counts,
        "x_theta_count": theta_counts,
        "x_phi_density": phi_counts / (x_phi.size * widths),
        "x_theta_density": theta_counts / (x_theta.size * widths),
    })


class ReportRun:
    """Render summary.csv and write gnuplot-ready histograms next to every wealth sample"""

    def __init__(self, reposet: RepoSet):
        self.artifacts = reposet["artifact_repository"]

    @log_execution_time(logger)
    def execute(self, run_dir: str, bins: int = 50, run_id: Optional[str] = None) -> ReportResult:
        if bins < 1:
            raise ValueError(f"bins must be positive, got {bins}")
        summary = self.artifacts.read_table(run_dir, "summary")
        table = summary[SUMMARY_COLUMNS].to_string(index=False, float_format=lambda v: f"{v:.4f}")

        written: List[str] = []
        for name in self.artifacts.list_tables(run_dir):
            if name.rsplit("/", 1)[-1] != WEALTH_TABLE:
                continue
            wealth = self.artifacts.read_table(run_dir, name)
            frame = histogram_frame(wealth["x_phi"].to_numpy(), wealth["x_theta"].to_numpy(), bins)
            target = name[: -len(WEALTH_TABLE)] + HISTOGRAM_TABLE
            written.append(self.artifacts.write_table(run_dir, target, frame))
        if not written:
            logger.warning(f"No wealth samples found under {run_dir}", run_id=run_id)
        return ReportResult(run_dir=run_dir, table=table, histogram_files=written, bins=bins)
