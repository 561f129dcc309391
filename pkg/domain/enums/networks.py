"""Network enumeration types"""
from dataclasses import dataclass
from typing import Literal

OutputActivationType = Literal["identity", "softmax", "scaled_tanh", "sigmoid"]

@dataclass(frozen=True)
class OutputActivation:
    """Valid output-layer activations"""
    IDENTITY: OutputActivationType = "identity"
    SOFTMAX: OutputActivationType = "softmax"
    SCALED_TANH: OutputActivationType = "scaled_tanh"
    SIGMOID: OutputActivationType = "sigmoid"

    @classmethod
    def is_valid(cls, value: str) -> bool:
        """Validate activation name"""
        return value in {cls.IDENTITY, cls.SOFTMAX, cls.SCALED_TANH, cls.SIGMOID}
