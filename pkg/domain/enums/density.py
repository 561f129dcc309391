"""Kernel-density enumeration types"""
from dataclasses import dataclass
from typing import Literal

KernelType = Literal["gaussian", "epanechnikov"]
BandwidthRuleType = Literal["silverman", "fixed"]

@dataclass(frozen=True)
class Kernel:
    """Valid smoothing kernels"""
    GAUSSIAN: KernelType = "gaussian"
    EPANECHNIKOV: KernelType = "epanechnikov"

    @classmethod
    def is_valid(cls, value: str) -> bool:
        """Validate kernel name"""
        return value in {cls.GAUSSIAN, cls.EPANECHNIKOV}

@dataclass(frozen=True)
class BandwidthRule:
    """Valid bandwidth rules"""
    SILVERMAN: BandwidthRuleType = "silverman"
    FIXED: BandwidthRuleType = "fixed"

    @classmethod
    def is_valid(cls, value: str) -> bool:
        """Validate bandwidth rule"""
        return value in {cls.SILVERMAN, cls.FIXED}
