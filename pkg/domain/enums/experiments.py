"""Experiment and training enumeration types"""
from dataclasses import dataclass
from typing import Literal

ExperimentType = Literal["portfolio", "benchmark", "statarb", "inner-only"]
StoppingKindType = Literal["relative_change", "no_improvement"]
UtilityType = Literal["linear", "exponential", "power"]
ShortRateType = Literal["constant", "vasicek"]

@dataclass(frozen=True)
class Experiment:
    """Valid experiment names"""
    PORTFOLIO: ExperimentType = "portfolio"
    BENCHMARK: ExperimentType = "benchmark"
    STATARB: ExperimentType = "statarb"
    INNER_ONLY: ExperimentType = "inner-only"

    @classmethod
    def is_valid(cls, value: str) -> bool:
        """Validate experiment name"""
        return value in {cls.PORTFOLIO, cls.BENCHMARK, cls.STATARB, cls.INNER_ONLY}

@dataclass(frozen=True)
class StoppingKind:
    """Valid stopping rules"""
    RELATIVE_CHANGE: StoppingKindType = "relative_change"
    NO_IMPROVEMENT: StoppingKindType = "no_improvement"

    @classmethod
    def is_valid(cls, value: str) -> bool:
        """Validate stopping rule"""
        return value in {cls.RELATIVE_CHANGE, cls.NO_IMPROVEMENT}

@dataclass(frozen=True)
class Utility:
    """Valid utility families"""
    LINEAR: UtilityType = "linear"
    EXPONENTIAL: UtilityType = "exponential"
    POWER: UtilityType = "power"

    @classmethod
    def is_valid(cls, value: str) -> bool:
        """Validate utility name"""
        return value in {cls.LINEAR, cls.EXPONENTIAL, cls.POWER}

@dataclass(frozen=True)
class ShortRate:
    """Valid short-rate models"""
    CONSTANT: ShortRateType = "constant"
    VASICEK: ShortRateType = "vasicek"

    @classmethod
    def is_valid(cls, value: str) -> bool:
        """Validate short-rate model name"""
        return value in {cls.CONSTANT, cls.VASICEK}
