"""Geodesics and Jacobi fields on a surface of revolution.

In coordinates ``(t, theta)`` with metric ``dt^2 + f(t)^2 dtheta^2`` a unit
speed geodesic satisfies::

    t''     =  f f' theta'^2
    theta'' = -2 (f'/f) t' theta'

and conserves the Clairaut constant ``f^2 theta'``. Meridians (``theta' = 0``)
are handled in closed form because the profile parameter is arclength; every
other geodesic stays where ``f >= |c|`` and never meets a pole.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, NamedTuple, Sequence

import numpy as np
from loguru import logger
from numpy.typing import ArrayLike, NDArray
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from revcurv.errors import DomainError, IntegrationError, PreconditionError
from revcurv.metric_geometry import curvature_samples
from revcurv.profile_construction import ProfileCurve

log = logger.bind(name="Geodesic")

FloatArray = NDArray[np.float64]

DEFAULT_STEP_TOL = 1e-10
FLAT_SLOPE = 1e-11
ROOT_XTOL = 1e-12
MERIDIAN_SPACING = 0.01
# fixed-step runs accept every step
_LOOSE_TOL = 1e3


@dataclass(frozen=True)
class GeodesicState:
    """Phase point ``(t, theta, dt/ds, dtheta/ds)``."""

    t: float
    theta: float
    dt_ds: float
    dtheta_ds: float

    @classmethod
    def from_heading(cls, profile: ProfileCurve, t: float, theta: float, heading: float) -> "GeodesicState":
        """Unit-speed state leaving ``(t, theta)`` at ``heading`` from the meridian."""
        f = float(profile.derivatives(t, 0)[0])
        return cls(t, theta, math.cos(heading), math.sin(heading) / f)

    def as_array(self) -> FloatArray:
        return np.array([self.t, self.theta, self.dt_ds, self.dtheta_ds])

    def clairaut(self, f: float) -> float:
        return f * f * self.dtheta_ds

    def speed_defect(self, f: float) -> float:
        return abs(self.dt_ds**2 + (f * self.dtheta_ds) ** 2 - 1.0)

    @property
    def meridian(self) -> bool:
        return self.dtheta_ds == 0.0


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Samples of a geodesic with its conserved quantities."""

    s: FloatArray
    t: FloatArray
    theta: FloatArray
    dt_ds: FloatArray
    dtheta_ds: FloatArray
    clairaut: FloatArray
    speed_defect: FloatArray
    meridian: bool = False
    nfev: int = 0
    event_s: tuple[float, ...] = ()

    @property
    def length(self) -> float:
        return float(self.s[-1])

    @property
    def initial(self) -> GeodesicState:
        return self.state(0)

    @property
    def final(self) -> GeodesicState:
        return self.state(-1)

    def state(self, i: int) -> GeodesicState:
        return GeodesicState(float(self.t[i]), float(self.theta[i]), float(self.dt_ds[i]), float(self.dtheta_ds[i]))

    def step_stats(self) -> dict[str, float]:
        steps = np.diff(self.s)
        if steps.size == 0:
            return {"steps": 0.0, "min_step": 0.0, "max_step": 0.0}
        return {"steps": float(steps.size), "min_step": float(steps.min()), "max_step": float(steps.max())}


@dataclass(frozen=True, eq=False)
class JacobiSolution:
    """``y'' + K y = 0`` with ``y(0) = 0, y'(0) = 1`` along a geodesic."""

    s: FloatArray
    y: FloatArray
    yp: FloatArray
    first_zero: float | None = None
    inconclusive_beyond: float | None = None


def _f_values(profile: ProfileCurve, t: FloatArray) -> FloatArray:
    return profile.derivatives(t, 0, check=False)[0]


def _geodesic_rhs(profile: ProfileCurve) -> Callable[[float, FloatArray], FloatArray]:
    def rhs(_: float, y: FloatArray) -> FloatArray:
        d = profile.derivatives(y[0], 1, check=False)
        f, fp = float(d[0]), float(d[1])
        return np.array([y[2], y[3], f * fp * y[3] ** 2, -2.0 * (fp / f) * y[2] * y[3]])

    return rhs


def _jacobi_rhs(profile: ProfileCurve) -> Callable[[float, FloatArray], FloatArray]:
    geodesic = _geodesic_rhs(profile)

    def rhs(s: float, y: FloatArray) -> FloatArray:
        k = float(curvature_samples(profile, y[0], check=False))
        return np.concatenate([geodesic(s, y[:4]), [y[5], -k * y[4]]])

    return rhs


def _fold_meridian(profile: ProfileCurve, initial: GeodesicState, s: FloatArray) -> tuple[FloatArray, ...]:
    """Closed-form meridian: ``t`` bounces between the poles at unit speed."""
    span = profile.upper - profile.lower
    direction = 1.0 if initial.dt_ds >= 0.0 else -1.0
    unfolded = (initial.t - profile.lower) + direction * s
    phase = np.mod(unfolded, 2.0 * span)
    forward = phase <= span
    t = np.where(forward, profile.lower + phase, profile.lower + 2.0 * span - phase)
    dt_ds = np.where(forward, direction, -direction)
    passes = np.abs(np.floor(unfolded / span))
    theta = initial.theta + math.pi * passes
    return t, theta, dt_ds


def _meridian_trajectory(profile: ProfileCurve, initial: GeodesicState, length: float) -> Trajectory:
    if not profile.closed:
        raise PreconditionError("meridian continuation through a pole needs a closed profile")
    n = max(2, int(math.ceil(length / MERIDIAN_SPACING)) + 1)
    s = np.linspace(0.0, length, n)
    t, theta, dt_ds = _fold_meridian(profile, initial, s)
    zeros = np.zeros_like(s)
    return Trajectory(s, t, theta, dt_ds, zeros, zeros.copy(), np.abs(dt_ds**2 - 1.0), meridian=True)


def geodesic_flow(
    profile: ProfileCurve,
    initial: GeodesicState,
    length: float,
    step_tol: float = DEFAULT_STEP_TOL,
    events: Sequence[Callable[[float, FloatArray], float]] = (),
    fixed_step: float | None = None,
) -> Trajectory:
    """Integrate a unit-speed geodesic for arclength ``length``.

    Adaptive RK45 with ``rtol = atol = step_tol``; ``fixed_step`` forces a
    constant step instead (used for the order check).
    """
    if length <= 0.0:
        raise PreconditionError(f"length must be positive, got {length}")
    f0 = float(_f_values(profile, np.asarray(initial.t)))
    if initial.speed_defect(f0) > 1e-8:
        raise PreconditionError(f"initial state is not unit speed (defect {initial.speed_defect(f0):.3e})")
    if initial.meridian:
        return _meridian_trajectory(profile, initial, length)

    options: dict[str, Any] = {"rtol": step_tol, "atol": step_tol}
    if fixed_step is not None:
        options = {"rtol": _LOOSE_TOL, "atol": _LOOSE_TOL, "first_step": fixed_step, "max_step": fixed_step}
    try:
        sol = solve_ivp(
            _geodesic_rhs(profile),
            (0.0, length),
            initial.as_array(),
            method="RK45",
            events=list(events) or None,
            **options,
        )
    except DomainError as exc:
        raise IntegrationError(f"geodesic left the profile domain: {exc}") from exc
    if sol.status < 0:
        raise IntegrationError(f"geodesic integration failed: {sol.message}")

    t, theta, dt_ds, dtheta_ds = sol.y
    f = _f_values(profile, t)
    c0 = initial.clairaut(f0)
    if fixed_step is None and np.min(f) < abs(c0) - 1e-8:
        raise IntegrationError("geodesic crossed its Clairaut barrier; step underflow near a pole")
    event_s = tuple(float(x) for times in (sol.t_events or []) for x in times)
    return Trajectory(
        s=sol.t,
        t=t,
        theta=theta,
        dt_ds=dt_ds,
        dtheta_ds=dtheta_ds,
        clairaut=f * f * dtheta_ds,
        speed_defect=np.abs(dt_ds**2 + (f * dtheta_ds) ** 2 - 1.0),
        nfev=int(sol.nfev),
        event_s=event_s,
    )


def clairaut_drift(traj: Trajectory) -> float:
    """Largest deviation of ``f^2 theta'`` from its initial value."""
    if traj.s.size == 0:
        raise PreconditionError("empty trajectory")
    return float(np.max(np.abs(traj.clairaut - traj.clairaut[0])))


def conservation_drift(traj: Trajectory) -> float:
    """Worst of the Clairaut drift and the unit-speed defect."""
    return max(clairaut_drift(traj), float(np.max(traj.speed_defect)))


class OrderCheck(NamedTuple):
    coarse_drift: float
    fine_drift: float
    ratio: float
    passed: bool


def drift_order_check(
    profile: ProfileCurve, initial: GeodesicState, length: float = 10.0, step: float = 0.4
) -> OrderCheck:
    """Fixed-step drift at ``step`` and ``step/2``; halving must gain 4x."""
    coarse = conservation_drift(geodesic_flow(profile, initial, length, fixed_step=step))
    fine = conservation_drift(geodesic_flow(profile, initial, length, fixed_step=0.5 * step))
    ratio = coarse / fine if fine > 0.0 else math.inf
    return OrderCheck(coarse, fine, ratio, ratio >= 4.0)


# ---------------------------------------------------------------------------
# Closed geodesics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Parallel:
    """A parallel circle ``t = t_star`` that is a geodesic."""

    t: float
    length: float
    kind: str  # crossing | flat | tangent


class ParallelSet(NamedTuple):
    parallels: list[Parallel]
    degenerate: bool


def _slope(profile: ProfileCurve, x: float) -> float:
    return float(profile.derivatives(x, 1)[1])


def geodesic_parallels(profile: ProfileCurve) -> ParallelSet:
    """Roots of ``f'`` in the open domain.

    Sign changes are refined with brentq; runs of ``|f'| <= FLAT_SLOPE``
    count as one root at their midpoint, or as a degenerate family when
    they reach the domain ends.
    """
    t = profile.t[1:-1]
    fp = profile.fp[1:-1]
    sign = np.where(np.abs(fp) <= FLAT_SLOPE, 0, np.sign(fp)).astype(int)
    roots: list[tuple[float, str]] = []
    degenerate = False
    i, n = 0, t.size
    while i < n:
        if sign[i] == 0:
            j = i
            while j + 1 < n and sign[j + 1] == 0:
                j += 1
            if i == 0 or j == n - 1:
                degenerate = True
            else:
                kind = "flat" if sign[i - 1] * sign[j + 1] < 0 else "tangent"
                roots.append((0.5 * (t[i] + t[j]), kind))
            i = j + 1
            continue
        if i + 1 < n and sign[i + 1] != 0 and sign[i] * sign[i + 1] < 0:
            root = brentq(lambda x: _slope(profile, x), t[i], t[i + 1], xtol=ROOT_XTOL)
            roots.append((float(root), "crossing"))
        i += 1
    if not roots:
        return ParallelSet([], degenerate)
    radii = _f_values(profile, np.array([r for r, _ in roots]))
    parallels = [Parallel(r, 2.0 * math.pi * float(f), kind) for (r, kind), f in zip(roots, radii)]
    log.debug("Parallel geodesics", count=len(parallels), degenerate=degenerate)
    return ParallelSet(parallels, degenerate)


class ClosedGeodesic(NamedTuple):
    length: float
    classification: str  # parallel | meridian
    t: float | None


def meridian_loop_length(profile: ProfileCurve) -> float:
    return 2.0 * (profile.upper - profile.lower)


def shortest_closed_geodesic(profile: ProfileCurve) -> ClosedGeodesic:
    """Minimum over geodesic parallels and the meridian loop (ties go to parallels)."""
    if not profile.closed:
        raise PreconditionError("closed-geodesic search needs a profile closed at both poles")
    best = ClosedGeodesic(meridian_loop_length(profile), "meridian", None)
    for parallel in geodesic_parallels(profile).parallels:
        if parallel.length <= best.length:
            best = ClosedGeodesic(parallel.length, "parallel", parallel.t)
    return best


def parallel_closure_length(profile: ProfileCurve, t_star: float, step_tol: float = DEFAULT_STEP_TOL) -> float:
    """Arclength after which the geodesic along ``t = t_star`` returns, by ODE."""
    f = float(_f_values(profile, np.asarray(t_star)))
    initial = GeodesicState(t_star, 0.0, 0.0, 1.0 / f)

    def full_turn(_: float, y: FloatArray) -> float:
        return float(y[1] - 2.0 * math.pi)

    full_turn.terminal = True  # type: ignore[attr-defined]
    full_turn.direction = 1.0  # type: ignore[attr-defined]
    traj = geodesic_flow(profile, initial, 1.5 * 2.0 * math.pi * f + 1.0, step_tol, events=[full_turn])
    if not traj.event_s:
        raise IntegrationError(f"parallel at t={t_star:.17g} did not close")
    return traj.event_s[0]


# ---------------------------------------------------------------------------
# Jacobi fields
# ---------------------------------------------------------------------------


def _first_zero_event(_: float, y: FloatArray) -> float:
    return float(y[-2])


_first_zero_event.terminal = True  # type: ignore[attr-defined]
_first_zero_event.direction = -1.0  # type: ignore[attr-defined]


def jacobi_field(profile: ProfileCurve, traj: Trajectory, step_tol: float = DEFAULT_STEP_TOL) -> JacobiSolution:
    """Normal Jacobi field along ``traj`` stopped at its first zero."""
    length = traj.length
    if traj.meridian:
        start = traj.initial

        def rhs(s: float, y: FloatArray) -> FloatArray:
            t, _, _ = _fold_meridian(profile, start, np.asarray(s))
            k = float(curvature_samples(profile, t, check=False))
            return np.array([y[1], -k * y[0]])

        y0 = np.array([0.0, 1.0])
    else:
        rhs = _jacobi_rhs(profile)
        y0 = np.concatenate([traj.initial.as_array(), [0.0, 1.0]])
    sol = solve_ivp(
        rhs,
        (0.0, length),
        y0,
        method="RK45",
        rtol=step_tol,
        atol=step_tol,
        events=[_first_zero_event],
    )
    if sol.status < 0:
        raise IntegrationError(f"Jacobi integration failed: {sol.message}")
    zeros = sol.t_events[0] if sol.t_events else np.empty(0)
    first = float(zeros[0]) if zeros.size else None
    return JacobiSolution(
        s=sol.t,
        y=sol.y[-2],
        yp=sol.y[-1],
        first_zero=first,
        inconclusive_beyond=None if first is not None else length,
    )


def first_conjugate_time(
    profile: ProfileCurve, traj: Trajectory, step_tol: float = DEFAULT_STEP_TOL
) -> float | None:
    """First positive zero of the Jacobi field, or ``None`` within the trajectory."""
    return jacobi_field(profile, traj, step_tol).first_zero


def random_round_states(rng: np.random.Generator, n: int) -> list[GeodesicState]:
    """Unit-speed states on the unit sphere that keep clear of the poles."""
    states = []
    for _ in range(n):
        t = float(rng.uniform(-1.2, 1.2))
        theta = float(rng.uniform(0.0, 2.0 * math.pi))
        heading = float(rng.uniform(0.35, math.pi - 0.35)) * float(rng.choice([-1.0, 1.0]))
        states.append(GeodesicState(t, theta, math.cos(heading), math.sin(heading) / math.cos(t)))
    return states


# ---------------------------------------------------------------------------
# Tabulated profiles and exports
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class TabulatedShape:
    """Cubic-spline profile read back from an exported table."""

    knots: FloatArray
    values: FloatArray
    spline: CubicSpline = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "spline", CubicSpline(self.knots, self.values))

    @property
    def lower(self) -> float:
        return float(self.knots[0])

    @property
    def upper(self) -> float:
        return float(self.knots[-1])

    @property
    def poles(self) -> tuple[bool, bool]:
        return bool(self.values[0] == 0.0), bool(self.values[-1] == 0.0)

    @property
    def degenerate(self) -> bool:
        return False

    def derivatives(self, t: ArrayLike, max_order: int = 3, check: bool = True) -> FloatArray:
        s = np.asarray(t, dtype=float)
        if s.size and (np.min(s) < self.lower - 1e-12 or np.max(s) > self.upper + 1e-12):
            raise DomainError("parameter outside tabulated profile")
        return np.stack([self.spline(s, k) for k in range(max_order + 1)])

    def round_mask(self, t: ArrayLike) -> NDArray[np.bool_]:
        return np.zeros(np.shape(t), dtype=bool)


def load_profile_table(path: str | Path) -> ProfileCurve:
    """Read a ``t,f,fp,fpp,g`` table into a spline-backed profile."""
    table = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if table.shape[1] != 5:
        raise PreconditionError(f"{path}: expected 5 columns t,f,fp,fpp,g")
    t, f, fp, fpp, g = table.T
    shape = TabulatedShape(t, f)
    fppp = shape.derivatives(t, 3)[3]
    gp = np.sqrt(np.clip(1.0 - fp**2, 0.0, None))
    return ProfileCurve(shape, t, f, fp, fpp, fppp, g, gp)


def export_trajectory(traj: Trajectory, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    table = np.column_stack([traj.s, traj.t, traj.theta, traj.dt_ds, traj.dtheta_ds, traj.clairaut])
    np.savetxt(path, table, fmt="%.17g", delimiter=",", header="s,t,theta,dt_ds,dtheta_ds,clairaut", comments="")
    return path


def export_jacobi(solution: JacobiSolution, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    table = np.column_stack([solution.s, solution.y, solution.yp])
    np.savetxt(path, table, fmt="%.17g", delimiter=",", header="s,y,yp", comments="")
    return path
