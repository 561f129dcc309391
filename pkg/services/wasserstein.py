"""Empirical p-Wasserstein distance between one-dimensional samples.

In one dimension the optimal coupling is the comonotone one, so the mini-batch
distance pairs the order statistics of both samples.
"""
from typing import Tuple

import numpy as np

from ..domain.arrays import FloatArray, IndexArray, as_sample
from ..domain.errors import EmptySampleError, LengthMismatchError
from ..domain.wasserstein import WassersteinSpec


def _paired(a, b) -> Tuple[FloatArray, FloatArray]:
    a = as_sample(a, "a")
    b = as_sample(b, "b")
    if a.size != b.size:
        raise LengthMismatchError(f"Paired samples differ in length: {a.size} vs {b.size}")
    if a.size == 0:
        raise EmptySampleError("Wasserstein distance of empty samples")
    return a, b


def comonotonic_permutation(a, b) -> IndexArray:
    """Index vector idx with b[idx][i] holding the value of b ranked like a[i]"""
    a, b = _paired(a, b)
    rank_order = np.argsort(a, kind="stable")
    permutation = np.empty(a.size, dtype=np.intp)
    permutation[rank_order] = np.argsort(b, kind="stable")
    return permutation


def comonotonic_pair(a, b) -> FloatArray:
    """b reordered so that it is comonotone with a (ties broken by index)"""
    _, b_values = _paired(a, b)
    return b_values[comonotonic_permutation(a, b)]


def transport_cost(a, b, order_p: float) -> float:
    """(1/N) sum |a_(i) - b_(i)|^p, the p-th power of the distance"""
    a, b = _paired(a, b)
    gaps = np.abs(np.sort(a, kind="stable") - np.sort(b, kind="stable"))
    return float(np.mean(gaps ** order_p))


def distance(a, b, spec: WassersteinSpec) -> float:
    return transport_cost(a, b, spec.order_p) ** (1.0 / spec.order_p)


def constraint_error(a, b, spec: WassersteinSpec) -> float:
    """(d_p^p - epsilon^p)_+"""
    return max(transport_cost(a, b, spec.order_p) - spec.radius_power, 0.0)
