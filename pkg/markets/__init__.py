"""Scenario simulators and adversaries of the factor, stat-arb and benchmark markets"""
from .adversaries import ResidualAdversary, StrategyAdversary
from .benchmark import BenchmarkScenario
from .factor import FactorPortfolioScenario
from .statarb import StatArbScenario

__all__ = (
    'ResidualAdversary',
    'StrategyAdversary',
    'BenchmarkScenario',
    'FactorPortfolioScenario',
    'StatArbScenario',
)
