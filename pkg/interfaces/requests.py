"""
Experiment configuration models.

An experiment is described by an INI file whose sections map onto the blocks
of ExperimentConfig. Every block is strict: unknown keys are rejected, and the
domain objects each block describes are built once at load time so their
invariants are checked before any training starts.
"""

import configparser
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ..domain.density import FixedBandwidth, KdeSpec, Silverman
from ..domain.enums.density import BandwidthRule, BandwidthRuleType, Kernel, KernelType
from ..domain.enums.experiments import (
    ExperimentType,
    ShortRate,
    ShortRateType,
    StoppingKind,
    StoppingKindType,
    Utility,
    UtilityType,
)
from ..domain.errors import ConfigError
from ..domain.markets import BenchmarkMarketSpec, FactorMarketSpec, OuStatArbSpec, ShortRateSpec
from ..domain.risk import CVaR, UTE, AlphaBeta, DistortionSpec, Expectation, Exponential, Linear, Power, UtilitySpec
from ..domain.training import LagrangeState, StoppingRule
from ..domain.wasserstein import WassersteinSpec

DistortionKind = Literal["alpha_beta", "cvar", "ute", "expectation"]


def _split_list(value: Any) -> Any:
    """Accept `a, b, c` strings where a tuple is expected"""
    if isinstance(value, str):
        return tuple(item.strip() for item in value.split(",") if item.strip())
    return value


class _Block(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class ExperimentBlock(_Block):
    """Which experiment to run and where its artifacts go"""
    name: ExperimentType = Field("portfolio", description="portfolio, benchmark, statarb or inner-only")
    seed: int = Field(0, ge=0, le=2 ** 64 - 1, description="Master seed of every random stream")
    output_dir: Optional[str] = Field(None, description="Run directory; defaults to RRDEU_OUTPUT_DIR/<name>")


class RiskBlock(_Block):
    """Distortion and utility of the RDEU functional"""
    distortion: DistortionKind = Field("alpha_beta", description="Distortion family")
    alpha: float = Field(0.1, gt=0.0, lt=1.0, description="Lower tail level")
    beta: float = Field(0.9, gt=0.0, lt=1.0, description="Upper tail level")
    p_weight: float = Field(0.75, ge=0.0, le=1.0, description="Weight of the lower tail")
    utility: UtilityType = Field(Utility.LINEAR, description="linear, exponential or power")
    risk_aversion: float = Field(1.0, gt=0.0, description="Exponential utility coefficient")
    exponent: float = Field(0.5, gt=0.0, le=1.0, description="Power utility exponent")

    @model_validator(mode="after")
    def check_domain(self):
        self.to_distortion()
        return self

    def to_distortion(self, p_weight: Optional[float] = None) -> DistortionSpec:
        if self.distortion == "cvar":
            return CVaR(self.alpha)
        if self.distortion == "ute":
            return UTE(self.beta)
        if self.distortion == "expectation":
            return Expectation()
        return AlphaBeta(self.alpha, self.beta, self.p_weight if p_weight is None else p_weight)

    def to_utility(self) -> UtilitySpec:
        if self.utility == Utility.EXPONENTIAL:
            return Exponential(self.risk_aversion)
        if self.utility == Utility.POWER:
            return Power(self.exponent)
        return Linear()


class WassersteinBlock(_Block):
    """Order and radius of the ambiguity ball"""
    p: float = Field(2.0, ge=1.0, allow_inf_nan=False, description="Order of the distance")
    epsilon: float = Field(0.01, ge=0.0, description="Radius; inf leaves the ball unconstrained")

    def to_spec(self, epsilon: Optional[float] = None) -> WassersteinSpec:
        return WassersteinSpec(order_p=self.p, epsilon=self.epsilon if epsilon is None else epsilon)


class KdeBlock(_Block):
    """Kernel density smoothing of the empirical CDF"""
    kernel: KernelType = Field(Kernel.GAUSSIAN, description="gaussian or epanechnikov")
    bandwidth_rule: BandwidthRuleType = Field(BandwidthRule.SILVERMAN, description="silverman or fixed")
    bandwidth: Optional[float] = Field(None, gt=0.0, description="Bandwidth for the fixed rule")

    @model_validator(mode="after")
    def check_bandwidth(self):
        if self.bandwidth_rule == BandwidthRule.FIXED and self.bandwidth is None:
            raise ValueError("bandwidth is required when bandwidth_rule = fixed")
        return self

    def to_spec(self) -> KdeSpec:
        if self.bandwidth_rule == BandwidthRule.FIXED:
            return KdeSpec(kernel=self.kernel, bandwidth_rule=FixedBandwidth(self.bandwidth))
        return KdeSpec(kernel=self.kernel, bandwidth_rule=Silverman())


class TrainingBlock(_Block):
    """Batch size, learning rates, caps and the multiplier schedule"""
    batch_size: int = Field(512, ge=2, description="Mini-batch size N")
    inner_learning_rate: float = Field(1e-3, gt=0.0, description="ADAM step of the adversary")
    outer_learning_rate: float = Field(0.05, gt=0.0, description="ADAM step of the policy")
    inner_max_iterations: int = Field(1000, ge=1, description="Cap of the first inner solve")
    inner_steps_per_outer: int = Field(40, ge=1, description="Cap of warm-started inner solves")
    outer_max_iterations: int = Field(150, ge=1, description="Cap of the outer loop")
    stopping: StoppingKindType = Field(StoppingKind.RELATIVE_CHANGE, description="Stopping rule")
    tolerance: float = Field(0.01, gt=0.0, description="Stopping tolerance")
    window: int = Field(100, ge=1, description="Inner stopping window")
    outer_window: int = Field(25, ge=1, description="Outer stopping window")
    lagrange_period: int = Field(50, ge=1, description="Inner iterations between multiplier updates")
    lagrange_growth: float = Field(1.5, gt=1.0, description="Growth factor of mu")
    initial_lambda: float = Field(1.0, ge=0.0, description="Initial multiplier")
    initial_mu: float = Field(10.0, gt=0.0, description="Initial penalty")
    max_mu: float = Field(1e8, gt=0.0, description="Ceiling on the penalty mu")
    validation_slack: float = Field(0.05, ge=0.0, description="Relative slack on the validated distance")

    @model_validator(mode="after")
    def check_penalty(self):
        if self.max_mu < self.initial_mu:
            raise ValueError("max_mu must be at least initial_mu")
        return self

    def lagrange(self) -> LagrangeState:
        return LagrangeState(
            lam=self.initial_lambda,
            mu=self.initial_mu,
            growth=self.lagrange_growth,
            update_period=self.lagrange_period,
            max_mu=self.max_mu,
        )

    def inner_stopping(self) -> StoppingRule:
        return StoppingRule(
            kind=self.stopping,
            tolerance=self.tolerance,
            window=self.window,
            max_iterations=self.inner_max_iterations,
            require_feasible=True,
        )

    def warm_inner_stopping(self) -> StoppingRule:
        return StoppingRule(
            kind=self.stopping,
            tolerance=self.tolerance,
            window=max(1, min(self.window, self.inner_steps_per_outer // 4)),
            max_iterations=self.inner_steps_per_outer,
            require_feasible=True,
        )

    def outer_stopping(self) -> StoppingRule:
        return StoppingRule(
            kind=self.stopping,
            tolerance=self.tolerance,
            window=self.outer_window,
            max_iterations=self.outer_max_iterations,
        )


class NetworkBlock(_Block):
    """Hidden layer widths of a ReLU network"""
    hidden_layers: Tuple[int, ...] = Field((32, 32), description="Comma-separated widths")

    @field_validator("hidden_layers", mode="before")
    def split_widths(cls, v):
        return _split_list(v)

    @field_validator("hidden_layers")
    def check_widths(cls, v):
        if any(width < 1 for width in v):
            raise ValueError("hidden layer widths must be positive")
        return v


class PortfolioBlock(_Block):
    """Factor-model market of the portfolio experiment"""
    d: int = Field(5, ge=1, description="Number of assets")
    systematic_sd: float = Field(0.02, gt=0.0)
    drift_step: float = Field(0.03)
    volatility_step: float = Field(0.025, gt=0.0)

    def to_spec(self) -> FactorMarketSpec:
        return FactorMarketSpec(
            d=self.d,
            systematic_sd=self.systematic_sd,
            drift_step=self.drift_step,
            volatility_step=self.volatility_step,
        )


class StatArbBlock(_Block):
    """Mean-reverting market with price impact"""
    kappa: float = Field(5.0, gt=0.0)
    mean_level: float = Field(1.0)
    sigma: float = Field(0.8, gt=0.0)
    impact: float = Field(0.1, ge=0.0)
    steps: int = Field(64, ge=1)
    dt: float = Field(1.0 / 64.0, gt=0.0)
    initial_price: float = Field(1.0)
    inventory_bound: float = Field(5.0, gt=0.0)

    def to_spec(self) -> OuStatArbSpec:
        return OuStatArbSpec(**self.model_dump())


class BenchmarkBlock(_Block):
    """Correlated assets, short rate and the constant-proportion benchmark"""
    drifts: Tuple[float, ...] = Field((0.05, 0.07, 0.09))
    volatilities: Tuple[float, ...] = Field((0.10, 0.15, 0.20))
    correlation: float = Field(0.3, ge=-1.0, le=1.0, description="Common pairwise correlation")
    benchmark_weights: Tuple[float, ...] = Field((0.3, 0.3, 0.4))
    short_rate: ShortRateType = Field(ShortRate.CONSTANT, description="constant or vasicek")
    rate_initial: float = Field(0.02)
    rate_kappa: float = Field(0.5)
    rate_mean: float = Field(0.02)
    rate_sigma: float = Field(0.01, ge=0.0)
    steps: int = Field(60, ge=1)
    dt: float = Field(1.0 / 12.0, gt=0.0)
    initial_wealth: float = Field(1.0, gt=0.0)

    @field_validator("drifts", "volatilities", "benchmark_weights", mode="before")
    def split_vectors(cls, v):
        return _split_list(v)

    @model_validator(mode="after")
    def check_domain(self):
        self.to_spec()
        return self

    def to_spec(self) -> BenchmarkMarketSpec:
        d = len(self.drifts)
        correlation = tuple(
            tuple(1.0 if i == j else self.correlation for j in range(d)) for i in range(d)
        )
        return BenchmarkMarketSpec(
            drifts=self.drifts,
            volatilities=self.volatilities,
            correlation=correlation,
            short_rate=ShortRateSpec(
                kind=self.short_rate,
                initial=self.rate_initial,
                kappa=self.rate_kappa,
                mean=self.rate_mean,
                sigma=self.rate_sigma,
            ),
            steps=self.steps,
            dt=self.dt,
            initial_wealth=self.initial_wealth,
            benchmark_weights=self.benchmark_weights,
        )


class MarketBlock(_Block):
    portfolio: PortfolioBlock = Field(default_factory=PortfolioBlock)
    statarb: StatArbBlock = Field(default_factory=StatArbBlock)
    benchmark: BenchmarkBlock = Field(default_factory=BenchmarkBlock)


class SweepBlock(_Block):
    """Radii and tail weights to sweep; empty lists keep the single configured value"""
    epsilon: Tuple[float, ...] = Field((), description="Comma-separated radii")
    p_weight: Tuple[float, ...] = Field((), description="Comma-separated lower-tail weights")

    @field_validator("epsilon", "p_weight", mode="before")
    def split_values(cls, v):
        return _split_list(v)

    @field_validator("epsilon")
    def check_radii(cls, v):
        if any(not eps >= 0.0 for eps in v):
            raise ValueError("radii must be nonnegative")
        return v

    @field_validator("p_weight")
    def check_weights(cls, v):
        if any(not 0.0 <= w <= 1.0 for w in v):
            raise ValueError("p_weight values must lie in [0, 1]")
        return v


class ExperimentConfig(_Block):
    """Complete, validated description of one experiment run"""
    experiment: ExperimentBlock = Field(default_factory=ExperimentBlock)
    risk: RiskBlock = Field(default_factory=RiskBlock)
    wasserstein: WassersteinBlock = Field(default_factory=WassersteinBlock)
    kde: KdeBlock = Field(default_factory=KdeBlock)
    training: TrainingBlock = Field(default_factory=TrainingBlock)
    adversary: NetworkBlock = Field(default_factory=NetworkBlock)
    policy: NetworkBlock = Field(default_factory=NetworkBlock)
    market: MarketBlock = Field(default_factory=MarketBlock)
    sweep: SweepBlock = Field(default_factory=SweepBlock)

    @model_validator(mode="after")
    def check_sweep(self):
        if self.sweep.p_weight and self.risk.distortion != "alpha_beta":
            raise ValueError(f"sweep.p_weight only applies to the alpha_beta distortion, not {self.risk.distortion}")
        for p_weight in self.sweep.p_weight:
            self.risk.to_distortion(p_weight)
        return self

    def cases(self) -> List[Tuple[float, float]]:
        """(epsilon, p_weight) of every sweep case in a fixed order"""
        radii = self.sweep.epsilon or (self.wasserstein.epsilon,)
        weights = self.sweep.p_weight or (self.risk.p_weight,)
        return [(eps, w) for eps in radii for w in weights]

    def with_overrides(self, **overrides: Any) -> "ExperimentConfig":
        """Copy with dotted-key overrides such as `experiment.seed=7`, re-validated"""
        data = self.model_dump()
        for dotted, value in overrides.items():
            node = data
            *parents, key = dotted.split(".")
            for parent in parents:
                node = node[parent]
            node[key] = value
        return validate_config(data)

    def paper_scale(self) -> "ExperimentConfig":
        """Copy with the full-size market, network and training settings"""
        return self.with_overrides(**PAPER_SCALE)


PAPER_SCALE: Dict[str, Any] = {
    "market.portfolio.d": 10,
    "training.batch_size": 4096,
    "training.inner_max_iterations": 5000,
    "training.outer_max_iterations": 500,
    "market.statarb.steps": 252,
    "market.statarb.dt": 1.0 / 252.0,
    "market.benchmark.steps": 5 * 252,
    "market.benchmark.dt": 1.0 / 252.0,
    "adversary.hidden_layers": (50, 50, 50),
    "policy.hidden_layers": (50, 50, 50),
}


def _key_path(loc: Tuple[Union[str, int], ...]) -> str:
    return ".".join(str(part) for part in loc) or "<root>"


def validate_config(data: Dict[str, Any]) -> ExperimentConfig:
    """Validate raw nested data, reporting each failure under its dotted key path"""
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError([f"{_key_path(err['loc'])}: {err['msg']}" for err in e.errors()]) from e


def parse_ini(text: str) -> Dict[str, Any]:
    """Nested dict of an INI document; `[market.statarb]` nests under market"""
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as e:
        raise ConfigError([f"<file>: {e}"]) from e
    data: Dict[str, Any] = {}
    for section in parser.sections():
        node = data
        for part in section.split("."):
            node = node.setdefault(part.strip(), {})
        node.update(parser.items(section))
    return data


def load_config(path: Union[str, Path]) -> ExperimentConfig:
    """Read and validate an experiment INI file"""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError([f"{path}: {e.strerror or e}"]) from e
    return validate_config(parse_ini(text))
