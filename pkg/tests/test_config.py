"""Tests for experiment configuration loading and validation"""
import pytest

from ..domain import UTE, AlphaBeta, CVaR, ConfigError, Exponential, FixedBandwidth, Linear, Power
from ..interfaces.requests import PAPER_SCALE, ExperimentConfig, load_config, parse_ini, validate_config

PORTFOLIO_INI = """
[experiment]
name = portfolio
seed = 7

[risk]
alpha = 0.05
p_weight = 0.5

[market.portfolio]
d = 4

[market.statarb]
steps = 16

[sweep]
epsilon = 0.0, 0.01
p_weight = 0.25, 0.75
"""


class TestParseIni:
    def test_dotted_sections_nest(self):
        data = parse_ini(PORTFOLIO_INI)
        assert data["experiment"] == {"name": "portfolio", "seed": "7"}
        assert data["market"] == {"portfolio": {"d": "4"}, "statarb": {"steps": "16"}}

    def test_malformed_file(self):
        with pytest.raises(ConfigError) as exc:
            parse_ini("seed = 1\n")
        assert exc.value.errors[0].startswith("<file>:")


class TestLoadConfig:
    def test_reads_and_validates(self, tmp_path):
        path = tmp_path / "portfolio.ini"
        path.write_text(PORTFOLIO_INI, encoding="utf-8")
        config = load_config(path)
        assert config.experiment.seed == 7
        assert config.market.portfolio.d == 4
        assert config.market.statarb.steps == 16
        assert config.risk.to_distortion() == AlphaBeta(0.05, 0.9, 0.5)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError) as exc:
            load_config(tmp_path / "absent.ini")
        assert "absent.ini" in exc.value.errors[0]


class TestValidation:
    def test_defaults(self):
        config = ExperimentConfig()
        assert config.cases() == [(0.01, 0.75)]
        assert config.training.batch_size == 512

    def test_unknown_key_reports_its_path(self):
        with pytest.raises(ConfigError) as exc:
            validate_config({"risk": {"gamma": "1"}})
        assert any(error.startswith("risk.gamma:") for error in exc.value.errors)

    def test_bad_number_reports_its_path(self):
        with pytest.raises(ConfigError) as exc:
            validate_config({"market": {"statarb": {"steps": "many"}}})
        assert any(error.startswith("market.statarb.steps:") for error in exc.value.errors)

    def test_alpha_above_beta(self):
        with pytest.raises(ConfigError) as exc:
            validate_config({"risk": {"alpha": "0.9", "beta": "0.1"}})
        assert any(error.startswith("risk") for error in exc.value.errors)

    def test_fixed_bandwidth_needs_a_value(self):
        with pytest.raises(ConfigError) as exc:
            validate_config({"kde": {"bandwidth_rule": "fixed"}})
        assert any(error.startswith("kde") for error in exc.value.errors)
        config = validate_config({"kde": {"bandwidth_rule": "fixed", "bandwidth": "0.3"}})
        assert config.kde.to_spec().bandwidth_rule == FixedBandwidth(0.3)

    def test_sweep_weight_needs_the_alpha_beta_family(self):
        with pytest.raises(ConfigError) as exc:
            validate_config({"risk": {"distortion": "cvar"}, "sweep": {"p_weight": "1.0, 0.75"}})
        assert any("sweep.p_weight" in error for error in exc.value.errors)
        config = validate_config({"risk": {"distortion": "cvar"}, "sweep": {"epsilon": "0.01, 0.1"}})
        assert config.cases() == [(0.01, 0.75), (0.1, 0.75)]

    def test_sweep_weight_out_of_range(self):
        with pytest.raises(ConfigError) as exc:
            validate_config({"sweep": {"p_weight": "0.5, 1.5"}})
        assert any(error.startswith("sweep.p_weight") for error in exc.value.errors)

    def test_negative_radius(self):
        with pytest.raises(ConfigError):
            validate_config({"sweep": {"epsilon": "-0.1"}})

    def test_infinite_radius_is_allowed(self):
        config = validate_config({"wasserstein": {"epsilon": "inf"}})
        assert config.wasserstein.to_spec().epsilon == float("inf")

    def test_unknown_experiment(self):
        with pytest.raises(ConfigError) as exc:
            validate_config({"experiment": {"name": "options"}})
        assert any(error.startswith("experiment.name") for error in exc.value.errors)

    def test_hidden_layers_from_a_list(self):
        config = validate_config({"adversary": {"hidden_layers": "16, 8"}})
        assert config.adversary.hidden_layers == (16, 8)
        with pytest.raises(ConfigError):
            validate_config({"policy": {"hidden_layers": "16, 0"}})

    def test_benchmark_vectors(self):
        config = validate_config({"market": {"benchmark": {
            "drifts": "0.05, 0.08",
            "volatilities": "0.1, 0.2",
            "benchmark_weights": "0.5, 0.5",
            "correlation": "0.2",
        }}})
        spec = config.market.benchmark.to_spec()
        assert spec.correlation == ((1.0, 0.2), (0.2, 1.0))
        with pytest.raises(ConfigError):
            validate_config({"market": {"benchmark": {"benchmark_weights": "0.5, 0.5"}}})


class TestRiskBlock:
    @pytest.mark.parametrize(
        "block, expected",
        [
            ({"distortion": "cvar", "alpha": "0.2"}, CVaR(0.2)),
            ({"distortion": "ute", "beta": "0.8"}, UTE(0.8)),
            ({"alpha": "0.1", "beta": "0.9", "p_weight": "0.6"}, AlphaBeta(0.1, 0.9, 0.6)),
        ],
    )
    def test_distortions(self, block, expected):
        assert validate_config({"risk": block}).risk.to_distortion() == expected

    @pytest.mark.parametrize(
        "block, expected",
        [
            ({}, Linear()),
            ({"utility": "exponential", "risk_aversion": "2"}, Exponential(2.0)),
            ({"utility": "power", "exponent": "0.3"}, Power(0.3)),
        ],
    )
    def test_utilities(self, block, expected):
        assert validate_config({"risk": block}).risk.to_utility() == expected


class TestTrainingBlock:
    def test_warm_window_fits_the_warm_cap(self):
        training = validate_config({"training": {"window": "100", "inner_steps_per_outer": "20"}}).training
        rule = training.warm_inner_stopping()
        assert rule.window == 5
        assert rule.max_iterations == 20
        assert rule.require_feasible

    def test_single_warm_step_keeps_a_window(self):
        training = validate_config({"training": {"inner_steps_per_outer": "1"}}).training
        assert training.warm_inner_stopping().window == 1

    def test_default_warm_solve_can_stop_early(self):
        rule = ExperimentConfig().training.warm_inner_stopping()
        assert 2 * rule.window < rule.max_iterations

    def test_penalty_ceiling(self):
        state = validate_config({"training": {"max_mu": "1000"}}).training.lagrange()
        assert state.max_mu == 1000.0
        with pytest.raises(ConfigError) as exc:
            validate_config({"training": {"initial_mu": "50", "max_mu": "20"}})
        assert any(error.startswith("training") for error in exc.value.errors)

    def test_lagrange_state(self):
        state = validate_config({"training": {"initial_lambda": "0.5", "lagrange_period": "7"}}).training.lagrange()
        assert state.lam == 0.5
        assert state.mu == 10.0
        assert state.update_period == 7


class TestExperimentConfig:
    def test_cases_sweep_radius_then_weight(self):
        config = validate_config(parse_ini(PORTFOLIO_INI))
        assert config.cases() == [(0.0, 0.25), (0.0, 0.75), (0.01, 0.25), (0.01, 0.75)]

    def test_overrides_are_revalidated(self):
        config = ExperimentConfig().with_overrides(**{"experiment.seed": 3, "market.portfolio.d": 2})
        assert config.experiment.seed == 3
        assert config.market.portfolio.d == 2
        with pytest.raises(ConfigError):
            ExperimentConfig().with_overrides(**{"experiment.seed": -1})

    def test_overrides_leave_the_original(self):
        config = ExperimentConfig()
        config.with_overrides(**{"training.batch_size": 16})
        assert config.training.batch_size == 512

    def test_paper_scale(self):
        config = validate_config(parse_ini(PORTFOLIO_INI)).paper_scale()
        assert config.market.portfolio.d == PAPER_SCALE["market.portfolio.d"] == 10
        assert config.training.batch_size == 4096
        assert config.adversary.hidden_layers == (50, 50, 50)
        assert config.market.statarb.dt == pytest.approx(1.0 / 252.0)
        # unrelated settings survive
        assert config.experiment.seed == 7
        assert config.cases() == [(0.0, 0.25), (0.0, 0.75), (0.01, 0.25), (0.01, 0.75)]
