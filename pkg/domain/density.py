"""Kernel density estimator configuration"""
from dataclasses import dataclass, field
from typing import Union

from .enums.density import Kernel, KernelType
from .errors import DomainError


@dataclass(frozen=True)
class Silverman:
    """h = 1.06 * sample std * N ** (-1/5)"""


@dataclass(frozen=True)
class FixedBandwidth:
    """A configured bandwidth used as is"""
    h: float

    def __post_init__(self):
        if not self.h > 0.0:
            raise DomainError(f"Fixed bandwidth must be positive, got {self.h}")


BandwidthSpec = Union[Silverman, FixedBandwidth]


@dataclass(frozen=True)
class KdeSpec:
    """Kernel and bandwidth rule of a kernel density estimator"""
    kernel: KernelType = Kernel.GAUSSIAN
    bandwidth_rule: BandwidthSpec = field(default_factory=Silverman)

    def __post_init__(self):
        if not Kernel.is_valid(self.kernel):
            raise DomainError(f"Unknown kernel: {self.kernel}")


@dataclass
class KdeDiagnostics:
    """Counts rows whose kernel weights all vanished and fell back to self-weight"""
    fallback_rows: int = 0
