"""Kernel density estimation of a sample's distribution function.

Kernels are standardised (zero mean, unit variance) and evaluated at
(x - x_i) / h with an explicit bandwidth h. Bandwidths are treated as
constants by every gradient computed here.
"""
import math
import warnings
from typing import Iterator, Optional

import numpy as np
from scipy.optimize import brentq, newton
from scipy.special import ndtr

from ..domain.arrays import FloatArray, as_sample
from ..domain.density import FixedBandwidth, KdeDiagnostics, KdeSpec, Silverman
from ..domain.enums.density import Kernel, KernelType
from ..domain.errors import DegenerateBandwidthError, EmptySampleError, LengthMismatchError

_SQRT_5 = math.sqrt(5.0)
_EPANECHNIKOV_PEAK = 3.0 / (4.0 * _SQRT_5)
_GAUSSIAN_PEAK = 1.0 / math.sqrt(2.0 * math.pi)
# Cap on the number of pairwise kernel evaluations held in memory at once
_BLOCK_ENTRIES = 1 << 22


def kernel_pdf(kernel: KernelType, u) -> FloatArray:
    u = np.asarray(u, dtype=np.float64)
    if kernel == Kernel.GAUSSIAN:
        return _GAUSSIAN_PEAK * np.exp(-0.5 * u * u)
    return np.where(np.abs(u) < _SQRT_5, _EPANECHNIKOV_PEAK * (1.0 - u * u / 5.0), 0.0)


def kernel_cdf(kernel: KernelType, u) -> FloatArray:
    u = np.asarray(u, dtype=np.float64)
    if kernel == Kernel.GAUSSIAN:
        return ndtr(u)
    clipped = np.clip(u, -_SQRT_5, _SQRT_5)
    return 0.5 + _EPANECHNIKOV_PEAK * (clipped - clipped ** 3 / 15.0)


def bandwidth(points, rule) -> float:
    """Resolve a bandwidth rule (Silverman or FixedBandwidth) on a sample"""
    if isinstance(rule, FixedBandwidth):
        return rule.h
    points = as_sample(points, "points")
    if points.size < 2:
        raise DegenerateBandwidthError(
            "Silverman's rule needs at least two points; configure a fixed bandwidth instead"
        )
    spread = float(np.std(points, ddof=1))
    if not spread > 0.0:
        raise DegenerateBandwidthError()
    return 1.06 * spread * points.size ** (-0.2)


def resolve_bandwidth(points, spec: KdeSpec, h: Optional[float] = None) -> float:
    return bandwidth(points, spec.bandwidth_rule) if h is None else h


def row_blocks(n_rows: int, n_cols: int) -> Iterator[slice]:
    step = max(1, _BLOCK_ENTRIES // max(n_cols, 1))
    for start in range(0, n_rows, step):
        yield slice(start, min(start + step, n_rows))


def _nonempty(points) -> FloatArray:
    points = as_sample(points, "points")
    if points.size == 0:
        raise EmptySampleError("Kernel density estimate of an empty sample")
    return points


def cdf_hat(points, x, spec: KdeSpec, h: Optional[float] = None):
    """F_hat(x) = (1/N) sum_i Phi((x - x_i) / h)"""
    points = _nonempty(points)
    h = resolve_bandwidth(points, spec, h)
    grid = np.atleast_1d(np.asarray(x, dtype=np.float64))
    values = np.empty(grid.size)
    for rows in row_blocks(grid.size, points.size):
        u = (grid[rows, None] - points[None, :]) / h
        values[rows] = kernel_cdf(spec.kernel, u).mean(axis=1)
    return float(values[0]) if np.ndim(x) == 0 else values.reshape(np.shape(x))


def pdf_hat(points, x, spec: KdeSpec, h: Optional[float] = None):
    """f_hat(x) = (1/(N h)) sum_i Phi'((x - x_i) / h)"""
    points = _nonempty(points)
    h = resolve_bandwidth(points, spec, h)
    grid = np.atleast_1d(np.asarray(x, dtype=np.float64))
    values = np.empty(grid.size)
    for rows in row_blocks(grid.size, points.size):
        u = (grid[rows, None] - points[None, :]) / h
        values[rows] = kernel_pdf(spec.kernel, u).mean(axis=1) / h
    return float(values[0]) if np.ndim(x) == 0 else values.reshape(np.shape(x))


def cdf_hat_gradient(points, x, spec: KdeSpec, h: Optional[float] = None) -> FloatArray:
    """dF_hat(x)/dx_j = -(1/N) Phi'((x - x_j) / h) / h, one row per x"""
    points = _nonempty(points)
    h = resolve_bandwidth(points, spec, h)
    u = (np.asarray(x, dtype=np.float64)[..., None] - points) / h
    return -kernel_pdf(spec.kernel, u) / (points.size * h)


def kernel_weights(
    points,
    i: int,
    spec: KdeSpec,
    h: Optional[float] = None,
    diagnostics: Optional[KdeDiagnostics] = None,
) -> FloatArray:
    """Row i of w_ij = Phi'((x_i - x_j)/h) / sum_k Phi'((x_i - x_k)/h)"""
    points = _nonempty(points)
    h = resolve_bandwidth(points, spec, h)
    row = kernel_pdf(spec.kernel, (points[i] - points) / h)
    total = row.sum()
    if not total > 0.0:
        if diagnostics is not None:
            diagnostics.fallback_rows += 1
        row = np.zeros(points.size)
        row[i] = 1.0
        return row
    return row / total


def smoothed_vjp(
    points,
    coefficients,
    spec: KdeSpec,
    h: Optional[float] = None,
    diagnostics: Optional[KdeDiagnostics] = None,
) -> FloatArray:
    """W^T c for the row-normalised kernel weight matrix W of the sample

    Rows are assembled block by block in index order, so the N x N matrix is
    never held in memory.
    """
    points = _nonempty(points)
    coefficients = as_sample(coefficients, "coefficients")
    if coefficients.size != points.size:
        raise LengthMismatchError("One coefficient per sample point expected")
    h = resolve_bandwidth(points, spec, h)
    result = np.zeros(points.size)
    for rows in row_blocks(points.size, points.size):
        kernel = kernel_pdf(spec.kernel, (points[rows, None] - points[None, :]) / h)
        totals = kernel.sum(axis=1)
        degenerate = ~(totals > 0.0)
        if degenerate.any():
            # a row with no kernel mass keeps its own value
            offsets = np.flatnonzero(degenerate)
            result[rows.start + offsets] += coefficients[rows][offsets]
            totals = np.where(degenerate, 1.0, totals)
            kernel[offsets] = 0.0
            if diagnostics is not None:
                diagnostics.fallback_rows += int(offsets.size)
        result += kernel.T @ (coefficients[rows] / totals)
    return result


def quantile_hat(
    points,
    levels,
    spec: KdeSpec,
    h: Optional[float] = None,
    initial=None,
) -> FloatArray:
    """Solve F_hat(x) = s for each level s in (0, 1)

    Newton steps on F_hat with f_hat as derivative; entries that do not
    converge are bracketed and solved with Brent's method.
    """
    points = _nonempty(points)
    h = resolve_bandwidth(points, spec, h)
    levels = np.atleast_1d(np.asarray(levels, dtype=np.float64))
    if initial is None:
        start = np.quantile(points, np.clip(levels, 0.0, 1.0))
    else:
        start = np.array(initial, dtype=np.float64, copy=True).reshape(levels.shape)

    def residual(x):
        return cdf_hat(points, x, spec, h) - levels

    def slope(x):
        return pdf_hat(points, x, spec, h)

    if levels.size > 1:
        # unconverged entries are re-solved by bracketing below
        with np.errstate(all="ignore"), warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            solution = newton(residual, start, fprime=slope, tol=1e-12, maxiter=100, full_output=True)
        roots = np.asarray(solution.root, dtype=np.float64)
        unresolved = ~np.asarray(solution.converged) | ~np.isfinite(roots)
    else:
        # scipy's scalar Newton path returns a different structure; bracket directly
        roots = start.astype(np.float64)
        unresolved = np.ones(levels.size, dtype=bool)
    if unresolved.any():
        lower = points.min() - 40.0 * h
        upper = points.max() + 40.0 * h
        for k in np.flatnonzero(unresolved):
            target = levels[k]
            roots[k] = brentq(
                lambda x: cdf_hat(points, x, spec, h) - target,
                lower,
                upper,
                xtol=1e-14,
            )
    return roots
