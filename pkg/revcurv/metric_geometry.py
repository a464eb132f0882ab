"""Gauss curvature and integral identities of a surface of revolution.

For an arclength profile ``(f, g)`` the Gauss curvature is ``-f''/f``. On the
part of a perturbed round profile where the perturbation vanishes the ratio
is ``cos/cos`` and evaluates to exactly 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, NamedTuple

import numpy as np
from loguru import logger
from numpy.typing import ArrayLike, NDArray
from scipy.optimize import minimize_scalar

from revcurv.errors import ConsistencyError, PoleError, PreconditionError, QuadratureError
from revcurv.profile_construction import ProfileCurve
from revcurv.quadrature import interval_integrals

log = logger.bind(name="Curvature")

FloatArray = NDArray[np.float64]

POLE_GUARD = 1e-6
AREA_RTOL = 1e-8
GAUSS_BONNET_TOL = 1e-6
MINIMAL_SPHERE_SLACK = 1e-8
GOLDEN_XTOL = 1e-10


def _near_pole(profile: ProfileCurve, t: FloatArray) -> NDArray[np.bool_]:
    lower_pole, upper_pole = profile.shape.poles
    near = np.zeros(t.shape, dtype=bool)
    if lower_pole:
        near |= t - profile.lower <= POLE_GUARD
    if upper_pole:
        near |= profile.upper - t <= POLE_GUARD
    return near


def curvature_samples(profile: ProfileCurve, t: ArrayLike, check: bool = True) -> FloatArray:
    """Vectorized K; the pole limit 1 is used within ``POLE_GUARD`` of a pole."""
    s = np.asarray(t, dtype=float)
    d = profile.derivatives(s, 2, check)
    near = _near_pole(profile, s)
    with np.errstate(divide="ignore", invalid="ignore"):
        k = np.where(near, 1.0, -d[2] / np.where(near, 1.0, d[0]))
    return np.where(profile.shape.round_mask(s), 1.0, k)


def gauss_curvature(profile: ProfileCurve, t: float) -> float:
    """``(cos t - eps''(t)) / (cos t + eps(t))`` at the reflection-reduced t.

    Raises :class:`PoleError` within ``POLE_GUARD`` of a pole.
    """
    if bool(_near_pole(profile, np.asarray(t, dtype=float))):
        raise PoleError(f"curvature requested at a pole (t={t:.17g}); the limit is 1")
    return float(curvature_samples(profile, t))


@dataclass(frozen=True, eq=False)
class CurvatureField:
    """K sampled on the profile grid."""

    profile: ProfileCurve
    t: FloatArray
    k: FloatArray
    round_mask: NDArray[np.bool_]

    @property
    def max(self) -> float:
        return float(self.k.max())

    @property
    def min(self) -> float:
        return float(self.k.min())

    def unity_exact(self) -> bool:
        """Whether every round-region sample is exactly 1."""
        return bool(np.all(self.k[self.round_mask] == 1.0))


def curvature_field(profile: ProfileCurve) -> CurvatureField:
    t = profile.t
    near = _near_pole(profile, t)
    with np.errstate(divide="ignore", invalid="ignore"):
        k = np.where(near, 1.0, -profile.fpp / np.where(near, 1.0, profile.f))
    mask = profile.shape.round_mask(t)
    return CurvatureField(profile, t, np.where(mask, 1.0, k), mask)


class CurvatureExtrema(NamedTuple):
    k_max: float
    t_max: float
    k_min: float
    t_min: float


def _refine(profile: ProfileCurve, grid: FloatArray, values: FloatArray, sign: float) -> tuple[float, float]:
    """Golden-section refinement of ``sign * K`` around its grid minimum."""
    scaled = sign * values
    i = int(np.argmin(scaled))
    best_t, best = float(grid[i]), float(scaled[i])
    if 0 < i < grid.size - 1 and scaled[i] < scaled[i - 1] and scaled[i] < scaled[i + 1]:
        result = minimize_scalar(
            lambda x: sign * float(curvature_samples(profile, x)),
            bracket=(grid[i - 1], grid[i], grid[i + 1]),
            method="golden",
            options={"xtol": GOLDEN_XTOL},
        )
        if result.fun < best:
            best_t, best = float(result.x), float(result.fun)
    return sign * best, best_t


def curvature_extrema(profile: ProfileCurve, grid_n: int | None = None) -> CurvatureExtrema:
    """Grid scan of K refined around strict interior extrema."""
    if grid_n is None:
        grid, values = profile.t, curvature_field(profile).k
    else:
        if grid_n < 512:
            raise PreconditionError(f"grid_n must be at least 512, got {grid_n}")
        grid = np.linspace(profile.lower, profile.upper, grid_n)
        values = curvature_samples(profile, grid)
    k_max, t_max = _refine(profile, grid, values, -1.0)
    k_min, t_min = _refine(profile, grid, values, 1.0)
    log.debug("Curvature extrema", k_max=k_max, t_max=t_max, k_min=k_min, t_min=t_min)
    return CurvatureExtrema(k_max, t_max, k_min, t_min)


def _checked_integral(profile: ProfileCurve, integrand: Any, what: str) -> float:
    coarse = float(np.sum(interval_integrals(integrand, profile.t, 3)))
    fine = float(np.sum(interval_integrals(integrand, profile.t, 6)))
    residual = abs(fine - coarse)
    if residual > AREA_RTOL * max(1.0, abs(fine)):
        raise QuadratureError(f"{what} quadrature did not converge", residual=residual)
    return fine


def surface_area(profile: ProfileCurve) -> float:
    """``2 pi * integral f dt`` over the profile domain."""
    integral = _checked_integral(profile, lambda x: profile.derivatives(x, 0, check=False)[0], "area")
    return 2.0 * math.pi * integral


def telescoped_total_curvature(profile: ProfileCurve) -> float:
    """``2 pi (f'(start) - f'(end))``, the closed form of ``2 pi * integral K f``."""
    d = profile.derivatives(np.array([profile.lower, profile.upper]), 1)
    return 2.0 * math.pi * float(d[1, 0] - d[1, 1])


def total_curvature(profile: ProfileCurve) -> float:
    """``2 pi * integral K f dt`` checked against its telescoped form.

    Raises :class:`ConsistencyError` if the two differ by more than
    ``GAUSS_BONNET_TOL``.
    """

    def integrand(x: FloatArray) -> FloatArray:
        f = profile.derivatives(x, 0, check=False)[0]
        return curvature_samples(profile, x, check=False) * f

    quadrature = 2.0 * math.pi * _checked_integral(profile, integrand, "total curvature")
    telescoped = telescoped_total_curvature(profile)
    if abs(quadrature - telescoped) > GAUSS_BONNET_TOL:
        raise ConsistencyError(
            f"total curvature by quadrature {quadrature:.17g} differs from telescoped {telescoped:.17g}"
        )
    return quadrature


class MinimalSphereBound(NamedTuple):
    passed: bool
    margin: float
    area: float
    k_max: float


def minimal_sphere_bound_check(profile: ProfileCurve, k_max: float | None = None) -> MinimalSphereBound:
    """``K_max * Area >= 4 pi`` for a closed surface; margin is the difference."""
    if not profile.closed:
        raise PreconditionError("minimal-sphere bound needs a profile closed at both poles")
    area = surface_area(profile)
    if k_max is None:
        k_max = curvature_extrema(profile).k_max
    margin = k_max * area - 4.0 * math.pi
    return MinimalSphereBound(margin >= -MINIMAL_SPHERE_SLACK, margin, area, k_max)


def export_curvature(field: CurvatureField, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    np.savetxt(path, np.column_stack([field.t, field.k]), fmt="%.17g", delimiter=",", header="t,K", comments="")
    return path
