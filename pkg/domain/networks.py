"""Feed-forward network parameters and recorded forward passes"""
from dataclasses import dataclass, replace
from typing import Tuple

import numpy as np

from .arrays import FloatArray
from .enums.networks import OutputActivation, OutputActivationType
from .errors import DomainError, ShapeMismatchError


@dataclass(frozen=True)
class Mlp:
    """Dense ReLU network; weights[k] has shape (layer_sizes[k+1], layer_sizes[k])"""
    layer_sizes: Tuple[int, ...]
    weights: Tuple[FloatArray, ...]
    biases: Tuple[FloatArray, ...]
    output_activation: OutputActivationType = OutputActivation.IDENTITY
    output_scale: float = 1.0

    def __post_init__(self):
        if len(self.layer_sizes) < 2 or any(n < 1 for n in self.layer_sizes):
            raise DomainError(f"layer_sizes must hold at least two positive sizes, got {self.layer_sizes}")
        if not OutputActivation.is_valid(self.output_activation):
            raise DomainError(f"Unknown output activation: {self.output_activation}")
        if not self.output_scale > 0.0:
            raise DomainError(f"output_scale must be positive, got {self.output_scale}")
        if len(self.weights) != len(self.layer_sizes) - 1 or len(self.biases) != len(self.weights):
            raise ShapeMismatchError("One weight matrix and one bias vector per layer expected")
        for k, (w, b) in enumerate(zip(self.weights, self.biases)):
            fan_in, fan_out = self.layer_sizes[k], self.layer_sizes[k + 1]
            if w.shape != (fan_out, fan_in) or b.shape != (fan_out,):
                raise ShapeMismatchError(
                    f"Layer {k} expects W{(fan_out, fan_in)} and b{(fan_out,)}, "
                    f"got W{w.shape} and b{b.shape}"
                )

    @property
    def input_size(self) -> int:
        return self.layer_sizes[0]

    @property
    def output_size(self) -> int:
        return self.layer_sizes[-1]

    @property
    def parameter_count(self) -> int:
        return sum((n_in + 1) * n_out for n_in, n_out in zip(self.layer_sizes[:-1], self.layer_sizes[1:]))

    def parameters(self) -> FloatArray:
        """Flat view ordered as W0, b0, W1, b1, ..."""
        chunks = []
        for w, b in zip(self.weights, self.biases):
            chunks.extend((w.ravel(), b))
        return np.concatenate(chunks)

    def with_parameters(self, flat) -> "Mlp":
        """Copy of this network carrying the given flat parameter vector"""
        flat = np.asarray(flat, dtype=np.float64)
        if flat.shape != (self.parameter_count,):
            raise ShapeMismatchError(
                f"Expected {self.parameter_count} parameters, got shape {flat.shape}"
            )
        weights, biases, offset = [], [], 0
        for w, b in zip(self.weights, self.biases):
            weights.append(flat[offset:offset + w.size].reshape(w.shape).copy())
            offset += w.size
            biases.append(flat[offset:offset + b.size].copy())
            offset += b.size
        return replace(self, weights=tuple(weights), biases=tuple(biases))


@dataclass(frozen=True)
class GradientTape:
    """Intermediates of one batched forward pass, consumed by backward"""
    inputs: FloatArray
    layer_inputs: Tuple[FloatArray, ...]
    pre_activations: Tuple[FloatArray, ...]
    outputs: FloatArray

    @property
    def batch_size(self) -> int:
        return int(self.inputs.shape[0])
