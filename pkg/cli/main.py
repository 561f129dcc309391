"""
`run CONFIG` trains and writes the artifacts of an experiment;
`report RUN_DIR` summarises a finished run.

Exit codes: 0 success, 1 runtime failure, 2 configuration error,
3 a case stopped at its iteration cap (artifacts are still written).
"""
import argparse
import sys
from typing import Any, Dict, Optional, Sequence

from ..base_settings import get_reposet, get_settings
from ..domain.errors import ConfigError, RobustRdeuError
from ..interfaces.requests import ExperimentConfig, load_config
from ..log_utils import RobustRdeuLogger
from ..usecases.experiment import RunExperiment
from ..usecases.report import ReportRun

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="robust_rdeu",
        description="Robust rank-dependent expected utility experiments",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="Run the experiment described by an INI file")
    run.add_argument("config", help="Path to the experiment INI file")
    run.add_argument("--seed", type=int, default=None, help="Master seed (overrides [experiment] seed)")
    run.add_argument("--out", default=None, help="Run directory (overrides [experiment] output_dir)")
    run.add_argument(
        "--paper-scale",
        action="store_true",
        help="Full-size markets, networks and iteration caps",
    )
    run.add_argument(
        "--experiment",
        choices=["portfolio", "benchmark", "statarb", "inner-only"],
        default=None,
        help="Experiment to run (overrides [experiment] name)",
    )
    run.add_argument("--epsilon", type=float, default=None, help="Single Wasserstein radius; disables the radius sweep")
    run.add_argument("--p-weight", type=float, default=None, help="Single lower-tail weight; disables the weight sweep")

    report = commands.add_parser("report", help="Summarise a finished run")
    report.add_argument("run_dir", help="Run directory written by `run`")
    report.add_argument("--bins", type=int, default=50, help="Histogram bins")
    return parser


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    """Load the INI file and apply --paper-scale, then the explicit flags"""
    config = load_config(args.config)
    if args.paper_scale:
        config = config.paper_scale()
    overrides: Dict[str, Any] = {}
    if args.experiment is not None:
        overrides["experiment.name"] = args.experiment
    if args.seed is not None:
        overrides["experiment.seed"] = args.seed
    if args.out is not None:
        overrides["experiment.output_dir"] = args.out
    if args.epsilon is not None:
        overrides["wasserstein.epsilon"] = args.epsilon
        overrides["sweep.epsilon"] = ()
    if args.p_weight is not None:
        overrides["risk.p_weight"] = args.p_weight
        overrides["sweep.p_weight"] = ()
    return config.with_overrides(**overrides) if overrides else config


def _run(args: argparse.Namespace, logger: RobustRdeuLogger) -> int:
    try:
        config = resolve_config(args)
    except ConfigError as e:
        for error in e.errors:
            print(f"config error: {error}", file=sys.stderr)
        return EXIT_CONFIG

    settings = get_settings()
    run_dir = config.experiment.output_dir or f"{settings.output_dir}/{config.experiment.name}"
    run_id = f"{config.experiment.name}-{config.experiment.seed}"
    try:
        result = RunExperiment(get_reposet()).execute(config, run_dir, run_id=run_id)
    except RobustRdeuError as e:
        logger.error(f"Experiment failed: {e}", run_id=run_id)
        return EXIT_FAILURE

    for case in result.cases:
        row = case.summary
        print(
            f"{case.case_dir}: CVaR={row.cvar_alpha:.4f} UTE={row.ute_beta:.4f} "
            f"mean={row.mean:.4f} W={row.wasserstein_p:.4g} "
            f"iterations={row.iterations} converged={row.converged}"
        )
    return result.exit_code


def _report(args: argparse.Namespace, logger: RobustRdeuLogger) -> int:
    try:
        result = ReportRun(get_reposet()).execute(args.run_dir, bins=args.bins)
    except (FileNotFoundError, ValueError) as e:
        logger.error(f"Report failed: {e}")
        return EXIT_FAILURE
    print(result.table)
    for path in result.histogram_files:
        print(f"histogram: {path}")
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logger = RobustRdeuLogger(level=get_settings().effective_level)
    if args.command == "run":
        return _run(args, logger)
    return _report(args, logger)
