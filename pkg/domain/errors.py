"""Exception types raised by the numerical layers"""
from typing import Optional, Sequence

import numpy as np


class RobustRdeuError(Exception):
    """Base class for all library errors"""


class DomainError(RobustRdeuError, ValueError):
    """An argument lies outside the mathematical domain of an operation"""


class EmptySampleError(RobustRdeuError, ValueError):
    """An operation received no samples"""


class LengthMismatchError(RobustRdeuError, ValueError):
    """Paired sample sets have different lengths"""


class ShapeMismatchError(RobustRdeuError, ValueError):
    """Array shapes do not match what the operation expects"""


class DegenerateBandwidthError(RobustRdeuError, ValueError):
    """Silverman's rule produced a zero bandwidth"""

    def __init__(self, message: Optional[str] = None):
        super().__init__(
            message
            or "Sample standard deviation is zero so Silverman's rule gives h = 0; "
               "configure a fixed bandwidth instead"
        )


class MissingTapeError(RobustRdeuError, ValueError):
    """A gradient estimator needs a tape the batch does not carry"""


class NonFiniteError(RobustRdeuError, ArithmeticError):
    """A NaN or infinity appeared in an intermediate quantity"""

    def __init__(self, stage: str, index: int, value: float):
        self.stage = stage
        self.index = index
        self.value = value
        super().__init__(f"Non-finite value {value!r} in {stage} at index {index}")


class ConfigError(RobustRdeuError, ValueError):
    """Invalid experiment configuration"""

    def __init__(self, errors: Sequence[str]):
        self.errors = list(errors)
        super().__init__("Invalid configuration: " + "; ".join(self.errors))


def check_finite(values, stage: str) -> None:
    """Raise NonFiniteError naming the first offending flat index"""
    array = np.asarray(values)
    finite = np.isfinite(array)
    if not finite.all():
        index = int(np.flatnonzero(~finite.ravel())[0])
        raise NonFiniteError(stage, index, float(array.ravel()[index]))
