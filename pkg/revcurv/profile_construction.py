"""Profile curve of the barbell surface of revolution.

The profile is ``f(t) = cos(t) + eps(t)`` on ``[-pi/2, pi/2]``, mirrored as
``f(t) = f(pi - t)`` on ``[pi/2, 3pi/2]``. The perturbation ``eps`` is the
convolution of a piecewise C^2 function ``eps0`` (zero, then a cubic-times-
linear polynomial, then ``c - cos t``) with a normalized bump kernel, so every
derivative of ``eps`` is an integral of ``eps0`` against a derivative of the
kernel.

Shapes (``MollifiedShape``, ``RoundShape``, ``CylinderShape``) evaluate the
profile and its derivatives at arbitrary parameters; a :class:`ProfileCurve`
is a shape sampled on a uniform grid together with the axis coordinate ``g``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Any, Callable, Protocol, runtime_checkable

import numpy as np
from loguru import logger
from numpy.polynomial import Polynomial
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, Field, model_validator

from revcurv.errors import (
    ConstructionError,
    DomainError,
    PreconditionError,
    QuadratureError,
    UnsupportedOrderError,
)
from revcurv.quadrature import composite_rule, cumulative_integral, integrate, integrate_checked
from revcurv.report import CheckRecord, VerificationReport, check

log = logger.bind(name="Profile")

FloatArray = NDArray[np.float64]

HALF_PI = 0.5 * math.pi
MAX_KERNEL_ORDER = 4
# relative to the absolute integrand mass of each convolution
CONVOLUTION_TOL = 1e-11
NORMALIZATION_TOL = 1e-12
_CHUNK = 256
_DOMAIN_SLACK = 1e-12


def _as_output(values: FloatArray) -> Any:
    return float(values) if values.ndim == 0 else values


def _cos_derivative(x: FloatArray, k: int) -> FloatArray:
    """k-th derivative of cos without phase-shift roundoff."""
    r = k % 4
    if r == 0:
        return np.cos(x)
    if r == 1:
        return -np.sin(x)
    if r == 2:
        return -np.cos(x)
    return np.sin(x)


# ---------------------------------------------------------------------------
# Parameters
# ---------------------------------------------------------------------------


class ConstructionParams(BaseModel):
    """Parameters of the barbell construction (immutable)."""

    model_config = ConfigDict(frozen=True)

    delta: float = Field(0.1, description="kernel half-width in radians")
    a: float = Field(0.0, description="start of the perturbation support")
    grid_n: int = 4096
    quad_order: int = 64
    quad_panels: int = 8

    @model_validator(mode="after")
    def _check_ranges(self) -> "ConstructionParams":
        if not 0.0 < self.delta < 0.25 * math.pi:
            raise ValueError(f"delta must lie in (0, pi/4), got {self.delta}")
        if not 0.0 <= self.a < HALF_PI - 2.0 * self.delta:
            raise ValueError(f"a must lie in [0, pi/2 - 2*delta), got {self.a}")
        if self.grid_n < 512:
            raise ValueError(f"grid_n must be at least 512, got {self.grid_n}")
        if self.quad_order < 16:
            raise ValueError(f"quad_order must be at least 16, got {self.quad_order}")
        if self.quad_panels < 1:
            raise ValueError(f"quad_panels must be positive, got {self.quad_panels}")
        return self

    @property
    def stretch(self) -> float:
        """Linear factor mapping [a, pi/2] onto [0, pi/2]."""
        return HALF_PI / (HALF_PI - self.a)


def _check_delta(delta: float) -> None:
    if not 0.0 < delta < 0.25 * math.pi:
        raise DomainError(f"delta must lie in (0, pi/4), got {delta}")


# ---------------------------------------------------------------------------
# Piecewise eps0
# ---------------------------------------------------------------------------


def _eps0_polynomial(delta: float) -> Polynomial:
    cd, sd = math.cos(delta), math.sin(delta)
    span = math.pi - 4.0 * delta
    linear = Polynomial(
        [
            12.0 * (math.pi - 3.0 * delta) * cd - span * (2.0 * math.pi - 5.0 * delta) * sd,
            -12.0 * cd + 3.0 * span * sd,
        ]
    )
    cubic = Polynomial([-delta, 1.0]) ** 3
    return cubic * linear / (3.0 * span**3)


def eps0_constant(delta: float) -> float:
    """Gluing constant ``c = eps0(pi/2 - delta) + cos(pi/2 - delta)``."""
    _check_delta(delta)
    half = HALF_PI - 2.0 * delta
    return half * (6.0 * math.cos(delta) - half * math.sin(delta)) / 12.0 + math.sin(delta)


def eps0_derivative(t: ArrayLike, delta: float, k: int = 0) -> Any:
    """Piecewise k-th derivative of eps0 on ``[-pi/2 - delta, pi/2 + delta]``.

    eps0 is C^2; for ``k >= 3`` each piece is differentiated separately and
    the polynomial branch wins at the two junctions.
    """
    _check_delta(delta)
    if not 0 <= k <= MAX_KERNEL_ORDER:
        raise UnsupportedOrderError(f"eps0 derivative order {k} not in 0..{MAX_KERNEL_ORDER}")
    s = np.asarray(t, dtype=float)
    lo, hi = -HALF_PI - delta, HALF_PI + delta
    if np.any(s < lo - _DOMAIN_SLACK) or np.any(s > hi + _DOMAIN_SLACK):
        raise DomainError(f"eps0 is defined on [{lo:.6g}, {hi:.6g}]")
    poly = _eps0_polynomial(delta).deriv(k) if k else _eps0_polynomial(delta)
    tail = (eps0_constant(delta) if k == 0 else 0.0) - _cos_derivative(s, k)
    out = np.where(s <= delta, 0.0, np.where(s <= HALF_PI - delta, poly(s), tail))
    return _as_output(np.asarray(out, dtype=float))


def eps0_value(t: ArrayLike, delta: float) -> Any:
    """eps0: zero, polynomial, then ``c - cos t``; non-negative."""
    return eps0_derivative(t, delta, 0)


def eps0_second_derivative(t: ArrayLike, delta: float) -> Any:
    """Closed form of eps0'' on the polynomial piece ``[delta, pi/2 - delta]``."""
    _check_delta(delta)
    s = np.asarray(t, dtype=float)
    if np.any(s < delta - _DOMAIN_SLACK) or np.any(s > HALF_PI - delta + _DOMAIN_SLACK):
        raise DomainError("eps0'' closed form only holds on [delta, pi/2 - delta]")
    span = math.pi - 4.0 * delta
    value = (
        (s - delta)
        * (
            24.0 * (math.pi - 2.0 * delta - 2.0 * s) * math.cos(delta)
            - 4.0 * span * (math.pi - delta - 3.0 * s) * math.sin(delta)
        )
        / span**3
    )
    return _as_output(np.asarray(value, dtype=float))


# ---------------------------------------------------------------------------
# Bump kernel
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _bump_polynomials(max_order: int) -> tuple[Polynomial, ...]:
    """P_k with d^k/du^k exp(-1/(1-u^2)) = P_k(u) (1-u^2)^(-2k) exp(-1/(1-u^2))."""
    u = Polynomial([0.0, 1.0])
    w = Polynomial([1.0, 0.0, -1.0])
    polys = [Polynomial([1.0])]
    for k in range(max_order):
        p = polys[-1]
        polys.append(p.deriv() * w**2 + 4.0 * k * u * w * p - 2.0 * u * p)
    return tuple(polys)


def _bump_shape(u: FloatArray, max_order: int) -> FloatArray:
    """Rows k = 0..max_order of the unnormalized bump derivatives in ``u``."""
    out = np.zeros((max_order + 1,) + u.shape)
    inside = np.abs(u) < 1.0
    ui = u[inside]
    w = 1.0 - ui * ui
    exponent = -1.0 / w
    log_w = np.log(w)
    for k, poly in enumerate(_bump_polynomials(max_order)):
        out[k, inside] = poly(ui) * np.exp(exponent - 2.0 * k * log_w)
    return out


def _bump_mass(delta: float, quad_order: int, quad_panels: int) -> float:
    mass, _ = integrate_checked(
        lambda y: _bump_shape(y / delta, 0)[0],
        -delta,
        delta,
        quad_order,
        quad_panels,
        tol=NORMALIZATION_TOL,
    )
    return float(mass)


def _normalize(delta: float, quad_order: int, quad_panels: int) -> tuple[float, float]:
    _check_delta(delta)
    mass = _bump_mass(delta, quad_order, quad_panels)

    def weighted(y: FloatArray) -> FloatArray:
        return np.cos(y) * _bump_shape(y / delta, 0)[0] / mass

    moment, _ = integrate_checked(weighted, -delta, delta, quad_order, quad_panels, tol=NORMALIZATION_TOL)
    alpha0 = 1.0 / float(moment)
    recheck = alpha0 * float(integrate(weighted, -delta, delta, 3 * quad_order, quad_panels))
    if abs(recheck - 1.0) > NORMALIZATION_TOL:
        raise QuadratureError("kernel normalization did not re-integrate to 1", residual=abs(recheck - 1.0))
    return mass, alpha0


def kernel_normalization(delta: float, quad_order: int = 64, quad_panels: int = 8) -> float:
    """alpha0 such that the kernel has unit moment against ``sin(pi/2 - y)``."""
    return _normalize(delta, quad_order, quad_panels)[1]


@dataclass(frozen=True)
class SmoothingKernel:
    """The normalized even bump ``phi = alpha0 * phi0`` on ``[-delta, delta]``.

    ``phi0(x) = exp(-1/(1-(x/delta)^2)) / mass`` has unit integral.
    """

    delta: float
    alpha0: float
    mass: float
    nodes: FloatArray = field(repr=False)
    weights: FloatArray = field(repr=False)

    def values(self, x: ArrayLike, max_order: int = 0) -> FloatArray:
        """Rows ``phi^(k)(x)`` for ``k = 0..max_order``."""
        if not 0 <= max_order <= MAX_KERNEL_ORDER:
            raise UnsupportedOrderError(f"kernel derivative order {max_order} not in 0..{MAX_KERNEL_ORDER}")
        xs = np.asarray(x, dtype=float)
        raw = _bump_shape(xs / self.delta, max_order)
        scale = self.alpha0 / self.mass * self.delta ** -np.arange(max_order + 1, dtype=float)
        return raw * scale.reshape((-1,) + (1,) * xs.ndim)

    def moment(self, func: Callable[[FloatArray], FloatArray], k: int = 0) -> float:
        """``integral func(y) phi^(k)(y) dy`` on the cached nodes."""
        return float(np.sum(func(self.nodes) * self.values(self.nodes, k)[k] * self.weights))


def build_kernel(delta: float, quad_order: int = 64, quad_panels: int = 8) -> SmoothingKernel:
    mass, alpha0 = _normalize(delta, quad_order, quad_panels)
    nodes, weights = composite_rule(-delta, delta, 2 * quad_order, quad_panels)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    log.debug("Kernel built", delta=delta, alpha0=alpha0, mass=mass)
    return SmoothingKernel(delta=delta, alpha0=alpha0, mass=mass, nodes=nodes, weights=weights)


def bump_kernel_value(x: ArrayLike, kernel: SmoothingKernel, derivative_order: int = 0) -> Any:
    """``phi^(k)(x)``; exactly 0 for ``|x| >= delta``."""
    if not 0 <= derivative_order <= MAX_KERNEL_ORDER:
        raise UnsupportedOrderError(
            f"kernel derivative order {derivative_order} not in 0..{MAX_KERNEL_ORDER}"
        )
    return _as_output(kernel.values(x, derivative_order)[derivative_order])


# ---------------------------------------------------------------------------
# Shapes
# ---------------------------------------------------------------------------


def _check_domain(s: FloatArray, lower: float, upper: float) -> None:
    if s.size and (np.min(s) < lower - _DOMAIN_SLACK or np.max(s) > upper + _DOMAIN_SLACK):
        raise DomainError(f"parameter outside profile domain [{lower:.17g}, {upper:.17g}]")


@runtime_checkable
class ProfileShape(Protocol):
    """Anything that can evaluate ``f`` and its derivatives."""

    @property
    def lower(self) -> float: ...

    @property
    def upper(self) -> float: ...

    @property
    def poles(self) -> tuple[bool, bool]: ...

    @property
    def degenerate(self) -> bool: ...

    def derivatives(self, t: ArrayLike, max_order: int = 3, check: bool = True) -> FloatArray: ...

    def round_mask(self, t: ArrayLike) -> NDArray[np.bool_]: ...


@dataclass(frozen=True)
class MollifiedShape:
    """``cos + eps`` on ``[-pi/2, pi/2]`` reflected across ``pi/2``.

    ``amplitude`` multiplies eps; anything but 1 breaks derivative matching
    at the waist and is only meant for negative fixtures.
    """

    params: ConstructionParams
    kernel: SmoothingKernel
    amplitude: float = 1.0

    lower: float = field(default=-HALF_PI, init=False)
    upper: float = field(default=3.0 * HALF_PI, init=False)
    poles: tuple[bool, bool] = field(default=(True, True), init=False)

    @property
    def degenerate(self) -> bool:
        return self.amplitude == 0.0

    @cached_property
    def _polynomial(self) -> Polynomial:
        return _eps0_polynomial(self.params.delta)

    @cached_property
    def _constant(self) -> float:
        return eps0_constant(self.params.delta)

    def _segments_at(self, tau: FloatArray, max_order: int, order: int) -> tuple[FloatArray, FloatArray]:
        d = self.params.delta
        c = self._constant
        lo = np.clip(tau - (HALF_PI - d), -d, d)
        hi = np.clip(tau - d, -d, d)
        total = np.zeros((max_order + 1, tau.size))
        mass = np.zeros_like(total)
        pieces: tuple[tuple[FloatArray, FloatArray, Callable[[FloatArray], FloatArray]], ...] = (
            (np.full_like(tau, -d), lo, lambda s: c - np.cos(s)),
            (lo, hi, self._polynomial),
        )
        for left, right, piece in pieces:
            nodes, weights = composite_rule(left, right, order, self.params.quad_panels)
            base = piece(tau[:, None] - nodes) * weights
            terms = base * self.kernel.values(nodes, max_order)
            total += np.sum(terms, axis=-1)
            mass += np.sum(np.abs(terms), axis=-1)
        return total, mass

    def _convolve(self, tau: FloatArray, max_order: int, check: bool) -> FloatArray:
        order = self.params.quad_order
        value, mass = self._segments_at(tau, max_order, order)
        if not check:
            return value
        fine, _ = self._segments_at(tau, max_order, 2 * order)
        residual = np.abs(fine - value)
        limit = CONVOLUTION_TOL * np.maximum(1.0, mass)
        ratio = residual / limit
        worst = np.unravel_index(int(np.argmax(ratio)), ratio.shape)
        if ratio[worst] > 1.0:
            raise QuadratureError(
                f"convolution for eps^({worst[0]}) at tau={tau[worst[1]]:.17g} did not converge",
                residual=float(residual[worst]),
            )
        if ratio[worst] > 0.1:
            log.debug("Convolution residual near threshold", ratio=float(ratio[worst]))
        return fine

    def eps_derivatives(self, t: ArrayLike, max_order: int = 4, check: bool = True) -> FloatArray:
        """Rows ``eps^(k)(t)`` for ``t`` in ``[-pi/2, pi/2]``.

        Zero exactly where ``t <= a``; elsewhere a two-segment Gauss-Legendre
        convolution with the kernel derivatives.
        """
        if not 0 <= max_order <= MAX_KERNEL_ORDER:
            raise UnsupportedOrderError(f"eps derivative order {max_order} not in 0..{MAX_KERNEL_ORDER}")
        s = np.asarray(t, dtype=float)
        _check_domain(s, -HALF_PI, HALF_PI)
        flat = s.ravel()
        lam = self.params.stretch
        tau = lam * (flat - self.params.a)
        out = np.zeros((max_order + 1, flat.size))
        active = np.flatnonzero(tau > 0.0)
        for start in range(0, active.size, _CHUNK):
            idx = active[start : start + _CHUNK]
            out[:, idx] = self._convolve(tau[idx], max_order, check)
        out *= (self.amplitude * lam ** np.arange(max_order + 1, dtype=float))[:, None]
        return out.reshape((max_order + 1,) + s.shape)

    def _reduce(self, t: ArrayLike) -> tuple[FloatArray, NDArray[np.bool_]]:
        s = np.asarray(t, dtype=float)
        _check_domain(s, self.lower, self.upper)
        mirrored = s > HALF_PI
        return np.where(mirrored, math.pi - s, s), mirrored

    def derivatives(self, t: ArrayLike, max_order: int = 3, check: bool = True) -> FloatArray:
        reduced, mirrored = self._reduce(t)
        eps = self.eps_derivatives(reduced, max_order, check)
        out = np.empty_like(eps)
        for k in range(max_order + 1):
            value = _cos_derivative(reduced, k) + eps[k]
            out[k] = np.where(mirrored, -value, value) if k % 2 else value
        return out

    def round_mask(self, t: ArrayLike) -> NDArray[np.bool_]:
        reduced, _ = self._reduce(t)
        return np.asarray(reduced <= self.params.a)


def eps_derivative(
    t: ArrayLike, k: int, params: ConstructionParams, kernel: SmoothingKernel | None = None
) -> Any:
    """``eps^(k)(t)`` for ``t`` in ``[-pi/2, pi/2]``; scalar in, scalar out."""
    if not 0 <= k <= MAX_KERNEL_ORDER:
        raise UnsupportedOrderError(f"eps derivative order {k} not in 0..{MAX_KERNEL_ORDER}")
    if kernel is None:
        kernel = build_kernel(params.delta, params.quad_order, params.quad_panels)
    elif kernel.delta != params.delta:
        raise PreconditionError(f"kernel built for delta={kernel.delta}, params have delta={params.delta}")
    return _as_output(MollifiedShape(params, kernel).eps_derivatives(t, k)[k])


@dataclass(frozen=True)
class RoundShape:
    """Unit round sphere profile ``f = cos`` on ``[-pi/2, upper]``."""

    upper: float = HALF_PI
    lower: float = field(default=-HALF_PI, init=False)

    def __post_init__(self) -> None:
        if not -HALF_PI < self.upper <= HALF_PI:
            raise DomainError(f"round profile must end in (-pi/2, pi/2], got {self.upper}")

    @property
    def poles(self) -> tuple[bool, bool]:
        return True, self.upper == HALF_PI

    @property
    def degenerate(self) -> bool:
        return True

    def derivatives(self, t: ArrayLike, max_order: int = 3, check: bool = True) -> FloatArray:
        s = np.asarray(t, dtype=float)
        _check_domain(s, self.lower, self.upper)
        return np.stack([_cos_derivative(s, k) for k in range(max_order + 1)])

    def eps_derivatives(self, t: ArrayLike, max_order: int = 4, check: bool = True) -> FloatArray:
        s = np.asarray(t, dtype=float)
        _check_domain(s, -HALF_PI, HALF_PI)
        return np.zeros((max_order + 1,) + s.shape)

    def round_mask(self, t: ArrayLike) -> NDArray[np.bool_]:
        return np.ones(np.shape(t), dtype=bool)


@dataclass(frozen=True)
class CylinderShape:
    """Flat cylinder ``f = radius`` on ``[0, length]``; not closed."""

    radius: float = 1.0
    length: float = 2.0 * math.pi
    lower: float = field(default=0.0, init=False)
    poles: tuple[bool, bool] = field(default=(False, False), init=False)

    @property
    def upper(self) -> float:
        return self.length

    @property
    def degenerate(self) -> bool:
        return False

    def derivatives(self, t: ArrayLike, max_order: int = 3, check: bool = True) -> FloatArray:
        s = np.asarray(t, dtype=float)
        _check_domain(s, self.lower, self.upper)
        out = np.zeros((max_order + 1,) + s.shape)
        out[0] = self.radius
        return out

    def round_mask(self, t: ArrayLike) -> NDArray[np.bool_]:
        return np.zeros(np.shape(t), dtype=bool)


# ---------------------------------------------------------------------------
# Sampled profile
# ---------------------------------------------------------------------------

SLOPE_SLACK = 1e-12


@dataclass(frozen=True, eq=False)
class ProfileCurve:
    """A shape sampled on a uniform grid with the arclength axis coordinate."""

    shape: ProfileShape
    t: FloatArray
    f: FloatArray
    fp: FloatArray
    fpp: FloatArray
    fppp: FloatArray
    g: FloatArray
    gp: FloatArray
    params: ConstructionParams | None = None

    @property
    def lower(self) -> float:
        return self.shape.lower

    @property
    def upper(self) -> float:
        return self.shape.upper

    @property
    def closed(self) -> bool:
        return all(self.shape.poles)

    @property
    def degenerate(self) -> bool:
        return self.shape.degenerate

    @property
    def spacing(self) -> float:
        return float(self.t[1] - self.t[0])

    def derivatives(self, t: ArrayLike, max_order: int = 2, check: bool = True) -> FloatArray:
        return self.shape.derivatives(t, max_order, check)

    def eps(self, t: ArrayLike, max_order: int = 4) -> FloatArray:
        """Perturbation derivatives; only defined for cos-based shapes."""
        evaluate = getattr(self.shape, "eps_derivatives", None)
        if evaluate is None:
            raise PreconditionError(f"{type(self.shape).__name__} is not a perturbed round profile")
        result: FloatArray = evaluate(t, max_order)
        return result

    def speed_defect(self) -> float:
        return float(np.max(np.abs(self.fp**2 + self.gp**2 - 1.0)))


def _axis_speed(shape: ProfileShape, x: FloatArray) -> FloatArray:
    fp = shape.derivatives(x, 1, check=False)[1]
    return np.sqrt(np.clip(1.0 - fp * fp, 0.0, None))


def sample_profile(shape: ProfileShape, grid_n: int, params: ConstructionParams | None = None) -> ProfileCurve:
    """Sample ``shape`` on ``grid_n`` uniform points and integrate ``g``.

    Raises :class:`ConstructionError` at the first sample with ``|f'| > 1``
    or where ``g`` stops increasing.
    """
    t = np.linspace(shape.lower, shape.upper, grid_n)
    d = shape.derivatives(t, 3)
    slope = np.abs(d[1])
    bad = np.flatnonzero(slope > 1.0 + SLOPE_SLACK)
    if bad.size:
        i = int(bad[0])
        raise ConstructionError(float(t[i]), float(slope[i]))
    f = d[0].copy()
    lower_pole, upper_pole = shape.poles
    if lower_pole:
        f[0] = 0.0
    if upper_pole:
        f[-1] = 0.0
    gp = np.sqrt(np.clip(1.0 - d[1] ** 2, 0.0, None))
    g = cumulative_integral(lambda x: _axis_speed(shape, x), t, 6)
    steps = np.diff(g)
    if np.any(steps <= 0.0):
        i = int(np.argmax(steps <= 0.0))
        raise ConstructionError(
            float(t[i]),
            float(slope[i]),
            f"height g is not strictly increasing on [{t[i]:.17g}, {t[i + 1]:.17g}] (|f'| = {slope[i]:.17g})",
        )
    return ProfileCurve(shape, t, f, d[1], d[2], d[3], g, gp, params)


def build_profile(
    params: ConstructionParams | None = None,
    baseline: bool = False,
    kernel: SmoothingKernel | None = None,
) -> ProfileCurve:
    """Build the barbell profile, or the round baseline when ``baseline``."""
    params = params or ConstructionParams()
    shape: ProfileShape
    if baseline:
        shape = RoundShape()
    else:
        if params.a > 0.0:
            log.warning(
                "Rescaling the perturbation onto [a, pi/2] is experimental; "
                "derivative matching at pi/2 is not preserved",
                a=params.a,
                stretch=params.stretch,
            )
        kernel = kernel or build_kernel(params.delta, params.quad_order, params.quad_panels)
        shape = MollifiedShape(params, kernel)
    log.info("Building profile", baseline=baseline, delta=params.delta, a=params.a, grid_n=params.grid_n)
    profile = sample_profile(shape, params.grid_n, params)
    log.info("Profile built", axis_length=float(profile.g[-1]), speed_defect=profile.speed_defect())
    return profile


# ---------------------------------------------------------------------------
# Claim verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClaimTolerances:
    inequality: float = 1e-9
    vanishing: float = 1e-8
    matching: float = 1e-6


WAIST_TARGETS = (1.0, 0.0, -1.0, 0.0)
VACUOUS = "vacuous: unperturbed profile"


def _vacuous(check_id: str, description: str, statement: str, threshold: float) -> CheckRecord:
    return check(check_id, description, statement, 0.0, threshold, True, VACUOUS)


def verify_claim_properties(profile: ProfileCurve, tol: ClaimTolerances | None = None) -> VerificationReport:
    """Check the perturbation against its five defining properties on the grid.

    Failures are report records, never exceptions. Degenerate (round)
    profiles pass the convexity, vanishing and matching bullets vacuously.
    """
    tol = tol or ClaimTolerances()
    a = profile.params.a if profile.params else 0.0
    delta = profile.params.delta if profile.params else 0.1
    half = profile.t[profile.t <= HALF_PI]
    e0, e1, e2 = profile.eps(half, 2)
    sin_t = np.sin(half)
    records: list[CheckRecord] = []

    margin = min(float(e0.min()), 1.0 - float(e0.max()))
    records.append(
        check(
            "claim.eps_range",
            "perturbation stays in [0, 1]",
            "min(eps, 1 - eps) >= -tol",
            margin,
            -tol.inequality,
            margin >= -tol.inequality,
            f"max_eps={float(e0.max()):.17g}",
        )
    )

    margin = min(float((e1 + 1.0 - sin_t).min()), float((1.0 + sin_t - e1).min()))
    records.append(
        check(
            "claim.slope_bounds",
            "unit-speed slope bound on eps'",
            "-1 + sin t <= eps' <= 1 + sin t",
            margin,
            -tol.inequality,
            margin >= -tol.inequality,
        )
    )

    upper = half >= 0.0
    margin = min(float(e1[upper].min()), float((sin_t[upper] - e1[upper]).min()))
    records.append(
        check(
            "claim.slope_strong",
            "stronger slope bound on [0, pi/2]",
            "0 <= eps' <= sin t",
            margin,
            -tol.inequality,
            margin >= -tol.inequality,
        )
    )

    if profile.degenerate:
        records.extend(
            [
                _vacuous("claim.eps0_slope", "eps0 slope below sin t", "0 <= eps0' <= sin t", -tol.inequality),
                _vacuous("claim.convex_weak", "eps convex on [a, pi/2]", "eps'' >= -tol", -tol.inequality),
                _vacuous("claim.convex_strict", "eps strictly convex inside", "eps'' > 0", 0.0),
                _vacuous("claim.vanishing_at_a", "eps flat at a", "max_k |eps^(k)(a)| <= tol", tol.vanishing),
            ]
        )
        records.extend(
            _vacuous(f"claim.matching.order{k}", f"eps^({k}) matches -cos^({k}) at pi/2", "|error| <= tol", tol.matching)
            for k in range(1, 5)
        )
        return VerificationReport(records=records, degenerate=True)

    piece = np.linspace(delta, HALF_PI - delta, 2049)
    slope0 = np.asarray(eps0_derivative(piece, delta, 1))
    margin = min(float(slope0.min()), float((np.sin(piece) - slope0).min()))
    records.append(
        check(
            "claim.eps0_slope",
            "eps0 slope below sin t on its polynomial piece",
            "0 <= eps0' <= sin t",
            margin,
            -tol.inequality,
            margin >= -tol.inequality,
        )
    )

    band = half >= a
    worst = float(e2[band].min())
    records.append(
        check("claim.convex_weak", "eps convex on [a, pi/2]", "eps'' >= -tol", worst, -tol.inequality, worst >= -tol.inequality)
    )

    band = (half >= a + delta) & (half < HALF_PI)
    worst = float(e2[band].min())
    records.append(
        check(
            "claim.convex_strict",
            "eps strictly convex on [a + delta, pi/2)",
            "eps'' > 0",
            worst,
            0.0,
            worst > 0.0,
            f"samples={int(band.sum())}",
        )
    )

    at_a = profile.eps(np.array([a]), 4)[:, 0]
    worst = float(np.max(np.abs(at_a)))
    records.append(
        check(
            "claim.vanishing_at_a",
            "eps vanishes to order 4 at a",
            "max_k |eps^(k)(a)| <= tol",
            worst,
            tol.vanishing,
            worst <= tol.vanishing,
        )
    )

    waist = profile.eps(np.array([HALF_PI]), 4)[:, 0]
    for k, target in enumerate(WAIST_TARGETS, start=1):
        error = abs(float(waist[k]) - target)
        records.append(
            check(
                f"claim.matching.order{k}",
                f"eps^({k}) matches -cos^({k}) at pi/2",
                f"|eps^({k})(pi/2) - ({target:g})| <= tol",
                error,
                tol.matching,
                error <= tol.matching,
                f"value={float(waist[k]):.17g}",
            )
        )
    return VerificationReport(records=records, degenerate=False)


def gluing_jumps(profile: ProfileCurve, t0: float, eta: float = 1e-7, max_order: int = 4) -> FloatArray:
    """One-sided jumps ``|f^(k)(t0+eta) - f^(k)(t0-eta)|`` for ``k = 1..max_order``."""
    d = profile.derivatives(np.array([t0 - eta, t0 + eta]), max_order)
    return np.abs(d[1:, 1] - d[1:, 0])


def export_profile(profile: ProfileCurve, path: str | Path) -> Path:
    """Write ``t,f,fp,fpp,g`` rows with 17 significant digits."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    table = np.column_stack([profile.t, profile.f, profile.fp, profile.fpp, profile.g])
    np.savetxt(path, table, fmt="%.17g", delimiter=",", header="t,f,fp,fpp,g", comments="")
    return path
