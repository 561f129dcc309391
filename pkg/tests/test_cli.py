"""Tests for the command-line entry point"""
import json

import pytest

from ..base_settings import get_settings
from ..cli import build_parser, main
from ..cli.main import resolve_config
from ..domain import DomainError
from ..interfaces.responses import RunResult
from ..usecases.experiment import RunExperiment

TINY_INI = """
[experiment]
name = portfolio
seed = 3

[training]
batch_size = 64
inner_max_iterations = 4
inner_steps_per_outer = 2
outer_max_iterations = 2
window = 2
outer_window = 1
lagrange_period = 2

[adversary]
hidden_layers = 4

[market.portfolio]
d = 3
"""


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "tiny.ini"
    path.write_text(TINY_INI, encoding="utf-8")
    return path


@pytest.fixture
def output_dir(tmp_path, monkeypatch):
    """Runs without --out land under RRDEU_OUTPUT_DIR"""
    monkeypatch.setenv("RRDEU_OUTPUT_DIR", str(tmp_path / "runs"))
    get_settings.cache_clear()
    yield tmp_path / "runs"
    get_settings.cache_clear()


class TestResolveConfig:
    def test_flags_override_the_file(self, config_file):
        args = build_parser().parse_args(
            ["run", str(config_file), "--seed", "9", "--experiment", "statarb", "--epsilon", "0.05", "--p-weight", "0.4"]
        )
        config = resolve_config(args)
        assert config.experiment.seed == 9
        assert config.experiment.name == "statarb"
        assert config.cases() == [(0.05, 0.4)]

    def test_flags_apply_after_paper_scale(self, config_file):
        args = build_parser().parse_args(["run", str(config_file), "--paper-scale", "--seed", "1"])
        config = resolve_config(args)
        assert config.training.batch_size == 4096
        assert config.experiment.seed == 1

    def test_unknown_experiment_is_rejected_by_the_parser(self, config_file):
        with pytest.raises(SystemExit) as exc:
            build_parser().parse_args(["run", str(config_file), "--experiment", "options"])
        assert exc.value.code == 2


class TestRunCommand:
    def test_writes_artifacts(self, config_file, tmp_path, output_dir, capsys):
        run_dir = tmp_path / "run"
        code = main(["run", str(config_file), "--out", str(run_dir)])
        assert code in (0, 3)
        for name in ("summary.csv", "trace.csv", "outer_trace.csv", "wealth.csv", "weights.csv", "metadata.json"):
            assert (run_dir / name).is_file()
        metadata = json.loads((run_dir / "metadata.json").read_text(encoding="utf-8"))
        assert metadata["run_id"] == "portfolio-3"
        assert capsys.readouterr().out.startswith(f"{run_dir}: CVaR=")

    def test_default_run_directory(self, config_file, output_dir):
        main(["run", str(config_file), "--epsilon", "0.02"])
        assert (output_dir / "portfolio" / "summary.csv").is_file()

    def test_config_error(self, tmp_path, output_dir, capsys):
        path = tmp_path / "bad.ini"
        path.write_text("[risk]\ngamma = 1\n", encoding="utf-8")
        assert main(["run", str(path)]) == 2
        assert "config error: risk.gamma" in capsys.readouterr().err

    def test_missing_config_file(self, tmp_path, output_dir, capsys):
        assert main(["run", str(tmp_path / "absent.ini")]) == 2
        assert "config error:" in capsys.readouterr().err

    def test_runtime_failure(self, config_file, tmp_path, output_dir, mocker):
        mocker.patch.object(RunExperiment, "execute", side_effect=DomainError("diverged"))
        assert main(["run", str(config_file), "--out", str(tmp_path / "run")]) == 1

    def test_iteration_cap_exit_code(self, config_file, tmp_path, output_dir, mocker):
        execute = mocker.patch.object(
            RunExperiment, "execute", return_value=RunResult(run_dir="r", status="not_converged")
        )
        assert main(["run", str(config_file), "--out", str(tmp_path / "run")]) == 3
        assert execute.call_args.kwargs["run_id"] == "portfolio-3"


class TestReportCommand:
    def test_report_of_a_run(self, config_file, tmp_path, output_dir, capsys):
        run_dir = tmp_path / "run"
        main(["run", str(config_file), "--out", str(run_dir)])
        capsys.readouterr()
        assert main(["report", str(run_dir), "--bins", "8"]) == 0
        out = capsys.readouterr().out
        assert "portfolio" in out
        assert f"histogram: {run_dir}/histogram.csv" in out
        assert (run_dir / "histogram.csv").is_file()

    def test_missing_run(self, tmp_path, output_dir):
        assert main(["report", str(tmp_path / "nowhere")]) == 1

    def test_bad_bins(self, config_file, tmp_path, output_dir):
        run_dir = tmp_path / "run"
        main(["run", str(config_file), "--out", str(run_dir)])
        assert main(["report", str(run_dir), "--bins", "0"]) == 1
