"""Composite Gauss–Legendre quadrature on arrays of intervals.

Nodes and weights come from :func:`numpy.polynomial.legendre.leggauss` and are
cached per order. All helpers are vectorized over a leading batch of intervals
so that many integrals (one per evaluation point) are computed in one pass.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable

import numpy as np
from numpy.typing import ArrayLike, NDArray

from revcurv.errors import QuadratureError

FloatArray = NDArray[np.float64]
Integrand = Callable[[FloatArray], FloatArray]


@lru_cache(maxsize=None)
def gauss_legendre(order: int) -> tuple[FloatArray, FloatArray]:
    """Reference nodes and weights on [-1, 1]."""
    if order < 1:
        raise ValueError(f"quadrature order must be positive, got {order}")
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def composite_rule(
    lo: ArrayLike, hi: ArrayLike, order: int, panels: int = 1
) -> tuple[FloatArray, FloatArray]:
    """Nodes and weights of a composite rule on ``[lo, hi]``.

    ``lo`` and ``hi`` broadcast to a batch shape ``S``; the result has shape
    ``S + (panels * order,)``. Degenerate intervals get zero weights.
    """
    lo_arr = np.asarray(lo, dtype=float)
    hi_arr = np.asarray(hi, dtype=float)
    lo_arr, hi_arr = np.broadcast_arrays(lo_arr, hi_arr)
    frac = np.linspace(0.0, 1.0, panels + 1)
    edges = lo_arr[..., None] + (hi_arr - lo_arr)[..., None] * frac
    a, b = edges[..., :-1], edges[..., 1:]
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    x, w = gauss_legendre(order)
    nodes = mid[..., None] + half[..., None] * x
    weights = half[..., None] * w
    shape = lo_arr.shape + (panels * order,)
    return nodes.reshape(shape), weights.reshape(shape)


def integrate(func: Integrand, lo: ArrayLike, hi: ArrayLike, order: int, panels: int = 1) -> FloatArray:
    """Integrate ``func`` over each interval of the batch."""
    nodes, weights = composite_rule(lo, hi, order, panels)
    result: FloatArray = np.sum(func(nodes) * weights, axis=-1)
    return result


def integrate_checked(
    func: Integrand,
    lo: ArrayLike,
    hi: ArrayLike,
    order: int,
    panels: int = 1,
    tol: float = 1e-10,
) -> tuple[FloatArray, FloatArray]:
    """Integrate with ``order`` and ``2 * order`` nodes per panel.

    Returns the higher-order value and the absolute difference between the two
    rules. Raises :class:`QuadratureError` if any difference exceeds
    ``tol * max(1, |value|)``.
    """
    coarse = integrate(func, lo, hi, order, panels)
    fine = integrate(func, lo, hi, 2 * order, panels)
    residual = np.abs(fine - coarse)
    limit = tol * np.maximum(1.0, np.abs(fine))
    if np.any(residual > limit):
        worst = float(np.max(residual - limit))
        raise QuadratureError("order-doubling check failed", residual=worst + float(np.max(limit)))
    return fine, residual


def interval_integrals(func: Integrand, grid: ArrayLike, order: int) -> FloatArray:
    """Integral of ``func`` over each consecutive pair of grid points."""
    g = np.asarray(grid, dtype=float)
    return integrate(func, g[:-1], g[1:], order)


def cumulative_integral(func: Integrand, grid: ArrayLike, order: int) -> FloatArray:
    """Running integral from ``grid[0]`` evaluated at every grid point."""
    pieces = interval_integrals(func, grid, order)
    return np.concatenate(([0.0], np.cumsum(pieces)))
