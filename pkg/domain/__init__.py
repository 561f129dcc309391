"""Domain types for robust rank-dependent risk optimisation.

This package holds immutable value types only, organised into submodules:
- risk: distortions, utilities and empirical samples
- wasserstein: the ambiguity ball
- density: kernel density estimator configuration
- networks: feed-forward network parameters
- training: optimiser state, batches and solver results
- markets: scenario specifications
"""

from .errors import *
from .risk import *
from .wasserstein import *
from .density import *
from .networks import *
from .training import *
from .markets import *

__all__ = (
    'RobustRdeuError',
    'DomainError',
    'EmptySampleError',
    'LengthMismatchError',
    'ShapeMismatchError',
    'DegenerateBandwidthError',
    'MissingTapeError',
    'NonFiniteError',
    'ConfigError',
    'DistortionSpec',
    'AlphaBeta',
    'CVaR',
    'UTE',
    'Expectation',
    'UtilitySpec',
    'Linear',
    'Exponential',
    'Power',
    'EmpiricalDistribution',
    'RdeuSummary',
    'RobustProblem',
    'WassersteinSpec',
    'KdeSpec',
    'Silverman',
    'FixedBandwidth',
    'KdeDiagnostics',
    'Mlp',
    'GradientTape',
    'AdamState',
    'LagrangeState',
    'LambdaWeight',
    'StoppingRule',
    'SampleBatch',
    'PolicyOutcome',
    'PathBatch',
    'TraceRow',
    'InnerSolution',
    'OuterTraceRow',
    'OuterSolution',
    'FactorMarketSpec',
    'OuStatArbSpec',
    'ShortRateSpec',
    'BenchmarkMarketSpec',
)
