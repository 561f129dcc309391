"""Batched forward and reverse-mode passes of dense ReLU networks"""
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.special import expit

from ..domain.arrays import FloatArray
from ..domain.enums.networks import OutputActivation, OutputActivationType
from ..domain.errors import ShapeMismatchError, check_finite
from ..domain.networks import GradientTape, Mlp
from .seeding import Seed, as_generator


def init_mlp(
    layer_sizes: Sequence[int],
    seed: Seed = None,
    output_activation: OutputActivationType = OutputActivation.IDENTITY,
    output_scale: float = 1.0,
    zero_output_layer: bool = False,
) -> Mlp:
    """He-uniform weights within +-sqrt(6 / fan_in), zero biases"""
    rng = as_generator(seed)
    sizes = tuple(int(n) for n in layer_sizes)
    weights, biases = [], []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        limit = np.sqrt(6.0 / fan_in)
        weights.append(rng.uniform(-limit, limit, size=(fan_out, fan_in)))
        biases.append(np.zeros(fan_out))
    if zero_output_layer:
        weights[-1] = np.zeros_like(weights[-1])
    return Mlp(
        layer_sizes=sizes,
        weights=tuple(weights),
        biases=tuple(biases),
        output_activation=output_activation,
        output_scale=output_scale,
    )


def _activate_output(net: Mlp, z: FloatArray) -> FloatArray:
    if net.output_activation == OutputActivation.SOFTMAX:
        shifted = np.exp(z - z.max(axis=1, keepdims=True))
        return shifted / shifted.sum(axis=1, keepdims=True)
    if net.output_activation == OutputActivation.SCALED_TANH:
        return net.output_scale * np.tanh(z)
    if net.output_activation == OutputActivation.SIGMOID:
        return expit(z)
    return z


def _output_cotangent(net: Mlp, outputs: FloatArray, cotangent: FloatArray) -> FloatArray:
    if net.output_activation == OutputActivation.SOFTMAX:
        return outputs * (cotangent - np.sum(cotangent * outputs, axis=1, keepdims=True))
    if net.output_activation == OutputActivation.SCALED_TANH:
        squashed = outputs / net.output_scale
        return cotangent * net.output_scale * (1.0 - squashed * squashed)
    if net.output_activation == OutputActivation.SIGMOID:
        return cotangent * outputs * (1.0 - outputs)
    return cotangent


def forward(net: Mlp, inputs) -> Tuple[FloatArray, GradientTape]:
    """Outputs for a batch (B, n_in) or a single input vector, with its tape"""
    x = np.asarray(inputs, dtype=np.float64)
    single = x.ndim == 1
    batch = x[None, :] if single else x
    if batch.ndim != 2 or batch.shape[1] != net.input_size:
        raise ShapeMismatchError(
            f"Network expects inputs with {net.input_size} features, got shape {x.shape}"
        )
    layer_inputs, pre_activations = [], []
    a = batch
    last = len(net.weights) - 1
    for k, (w, b) in enumerate(zip(net.weights, net.biases)):
        layer_inputs.append(a)
        z = a @ w.T + b
        pre_activations.append(z)
        a = _activate_output(net, z) if k == last else np.maximum(z, 0.0)
    tape = GradientTape(
        inputs=batch,
        layer_inputs=tuple(layer_inputs),
        pre_activations=tuple(pre_activations),
        outputs=a,
    )
    return (a[0] if single else a), tape


def backward(
    net: Mlp,
    tape: Optional[GradientTape],
    output_cotangent,
) -> Tuple[FloatArray, FloatArray]:
    """Gradient of sum(cotangent * outputs) wrt the flat parameters and the inputs

    ReLU'(0) is taken as 0. The parameter gradient follows the layout of
    Mlp.parameters().
    """
    if tape is None or len(tape.layer_inputs) != len(net.weights):
        raise ShapeMismatchError("Tape was not recorded by a forward pass of this network")
    cotangent = np.asarray(output_cotangent, dtype=np.float64)
    single = cotangent.ndim == 1 and tape.batch_size == 1 and tape.outputs.shape[1] == cotangent.size
    if single:
        cotangent = cotangent[None, :]
    if cotangent.shape != tape.outputs.shape:
        raise ShapeMismatchError(
            f"Cotangent shape {cotangent.shape} does not match outputs {tape.outputs.shape}"
        )
    check_finite(cotangent, "network cotangent")
    grads = [None] * (2 * len(net.weights))
    dz = _output_cotangent(net, tape.outputs, cotangent)
    for k in range(len(net.weights) - 1, -1, -1):
        grads[2 * k] = dz.T @ tape.layer_inputs[k]
        grads[2 * k + 1] = dz.sum(axis=0)
        da = dz @ net.weights[k]
        if k > 0:
            dz = da * (tape.pre_activations[k - 1] > 0.0)
    input_grad = da[0] if single else da
    return np.concatenate([g.ravel() for g in grads]), input_grad
