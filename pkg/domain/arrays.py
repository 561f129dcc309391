"""Array type aliases shared by the numerical modules"""
from typing import Callable, TypeAlias

import numpy as np
import numpy.typing as npt

from .errors import ShapeMismatchError

FloatArray: TypeAlias = npt.NDArray[np.float64]
IndexArray: TypeAlias = npt.NDArray[np.intp]

# Maps a cotangent on a batch of outputs to the gradient wrt a flat parameter vector
VectorJacobianProduct: TypeAlias = Callable[[FloatArray], FloatArray]


def as_sample(values, name: str = "samples") -> FloatArray:
    """Coerce to a 1-D float64 array, rejecting other shapes"""
    array = np.asarray(values, dtype=np.float64)
    if array.ndim == 0:
        array = array.reshape(1)
    if array.ndim != 1:
        raise ShapeMismatchError(f"{name} must be one-dimensional, got shape {array.shape}")
    return array
