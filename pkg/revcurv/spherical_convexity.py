"""Convex regions on the round unit sphere and sampling oracles for them.

Points are unit 3-vectors stored in numpy arrays of shape ``(..., 3)``.
Every region exposes a signed ``excess`` (positive outside, in radians for
caps and hemispheres), membership, boundary samples and a bounding cap used
for rejection sampling. Convexity verdicts are certified only to the
sampling density recorded in the verdict.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Iterable, NamedTuple, Sequence

import numpy as np
from loguru import logger
from numpy.typing import ArrayLike, NDArray
from scipy.optimize import brentq, minimize

from revcurv.errors import ConfigError, DomainError, NonUniqueGeodesicError, PreconditionError
from revcurv.report import format_block

log = logger.bind(name="Convexity")

FloatArray = NDArray[np.float64]

HALF_PI = 0.5 * math.pi
CONVEXITY_RADIUS = HALF_PI
MEMBERSHIP_TOL = 1e-12
WITNESS_TOL = 1e-9
ANTIPODAL_TOL = 1e-9
FAMILY_DIRECTIONS = 64
CERTIFICATE_TOL = 1e-6
BOUNDARY_RESOLUTION = 720
LATTICE_BASE = 125
NORM_TOL = 1e-12


# ---------------------------------------------------------------------------
# Points and arcs
# ---------------------------------------------------------------------------


def normalize(v: ArrayLike) -> FloatArray:
    arr = np.asarray(v, dtype=float)
    norm = np.linalg.norm(arr, axis=-1, keepdims=True)
    if np.any(norm == 0.0):
        raise DomainError("zero vector has no direction on the sphere")
    return arr / norm


def spherical_point(x: float, y: float, z: float) -> FloatArray:
    """Unit vector in the direction of ``(x, y, z)``."""
    return normalize([x, y, z])


def _check_unit(p: FloatArray) -> None:
    if np.any(np.abs(np.linalg.norm(p, axis=-1) - 1.0) > NORM_TOL):
        raise DomainError("points must be unit vectors")


def sph_distance(p: ArrayLike, q: ArrayLike) -> Any:
    """Great-circle distance in ``[0, pi]``."""
    d = np.arccos(np.clip(np.sum(np.asarray(p, dtype=float) * np.asarray(q, dtype=float), axis=-1), -1.0, 1.0))
    return float(d) if np.ndim(d) == 0 else d


def tangent_basis(c: ArrayLike) -> tuple[FloatArray, FloatArray]:
    """Orthonormal pair spanning the tangent plane at ``c``."""
    c = np.asarray(c, dtype=float)
    axis = np.eye(3)[int(np.argmin(np.abs(c)))]
    e1 = normalize(np.cross(c, axis))
    return e1, np.cross(c, e1)


def _slerp(p: FloatArray, q: FloatArray, s: FloatArray) -> FloatArray:
    """Points on the minimizing arcs ``p[i] -> q[i]`` at parameters ``s``; shape (P, S, 3)."""
    omega = np.arccos(np.clip(np.sum(p * q, axis=-1), -1.0, 1.0))[:, None, None]
    sin_omega = np.sin(omega)
    safe = np.where(sin_omega == 0.0, 1.0, sin_omega)
    ss = s[None, :, None]
    out = np.sin((1.0 - ss) * omega) / safe * p[:, None, :] + np.sin(ss * omega) / safe * q[:, None, :]
    same = (sin_omega == 0.0)[:, 0, 0]
    out[same] = p[same][:, None, :]
    return normalize(out)


def family_directions(p: ArrayLike, directions: int = FAMILY_DIRECTIONS) -> FloatArray:
    """Unit tangent directions at ``p``, evenly spaced in angle."""
    e1, e2 = tangent_basis(p)
    angles = 2.0 * math.pi * np.arange(directions) / directions
    return np.cos(angles)[:, None] * e1 + np.sin(angles)[:, None] * e2


def _family_arcs(p: FloatArray, s: FloatArray, directions: int) -> FloatArray:
    """Half great circles from ``p`` to ``-p``; shape (directions, S, 3)."""
    u = family_directions(p, directions)
    angle = math.pi * s[None, :, None]
    return np.cos(angle) * p + np.sin(angle) * u[:, None, :]


def geodesic_point(
    p: ArrayLike, q: ArrayLike, s: float, family: bool = False, directions: int = FAMILY_DIRECTIONS
) -> FloatArray:
    """Point at fraction ``s`` of the minimizing arc from ``p`` to ``q``.

    Antipodal pairs have a circle of minimizing arcs: with ``family`` the
    result stacks one point per arc, otherwise :class:`NonUniqueGeodesicError`.
    """
    pp, qq = np.asarray(p, dtype=float), np.asarray(q, dtype=float)
    _check_unit(pp)
    _check_unit(qq)
    if sph_distance(pp, qq) > math.pi - ANTIPODAL_TOL:
        if not family:
            raise NonUniqueGeodesicError("antipodal points are joined by a family of minimizing arcs")
        return _family_arcs(pp, np.array([s]), directions)[:, 0, :]
    return _slerp(pp[None, :], qq[None, :], np.array([s]))[0, 0]


def fibonacci_sphere(n: int) -> FloatArray:
    """Near-uniform lattice of ``n`` points."""
    i = np.arange(n) + 0.5
    z = 1.0 - 2.0 * i / n
    r = np.sqrt(1.0 - z * z)
    phi = math.pi * (1.0 + math.sqrt(5.0)) * i
    return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])


def fibonacci_spacing(n: int) -> float:
    return math.sqrt(4.0 * math.pi / n)


def _circle(center: FloatArray, radius: float, n: int) -> FloatArray:
    e1, e2 = tangent_basis(center)
    angles = 2.0 * math.pi * np.arange(n) / n
    ring = np.cos(angles)[:, None] * e1 + np.sin(angles)[:, None] * e2
    return math.cos(radius) * center + math.sin(radius) * ring


def _sample_cap(rng: np.random.Generator, center: FloatArray, radius: float, n: int) -> FloatArray:
    """Uniform samples in a cap."""
    e1, e2 = tangent_basis(center)
    z = rng.uniform(math.cos(radius), 1.0, n)
    phi = rng.uniform(0.0, 2.0 * math.pi, n)
    r = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    return (
        z[:, None] * center
        + (r * np.cos(phi))[:, None] * e1
        + (r * np.sin(phi))[:, None] * e2
    )


# ---------------------------------------------------------------------------
# Regions
# ---------------------------------------------------------------------------


class SphericalRegion(ABC):
    """A subset of the unit sphere given by a signed excess function."""

    open: bool = False

    @abstractmethod
    def excess(self, points: ArrayLike) -> FloatArray:
        """Positive outside the region, non-positive inside."""

    @abstractmethod
    def boundary_samples(self, n: int = BOUNDARY_RESOLUTION) -> FloatArray: ...

    @abstractmethod
    def bounding_cap(self) -> tuple[FloatArray, float]: ...

    @abstractmethod
    def spec(self) -> str: ...

    def contains(self, points: ArrayLike) -> NDArray[np.bool_]:
        e = self.excess(points)
        return np.asarray(e < 0.0 if self.open else e <= MEMBERSHIP_TOL)

    def distance(self, points: ArrayLike) -> FloatArray:
        """Distance to the region from boundary samples; 0 inside."""
        pts = np.asarray(points, dtype=float).reshape(-1, 3)
        inside = self.contains(pts)
        boundary = self.boundary_samples()
        if boundary.size == 0:
            return np.zeros(len(pts))
        d = np.min(np.arccos(np.clip(pts @ boundary.T, -1.0, 1.0)), axis=1)
        return np.where(inside, 0.0, d)

    def sample(self, rng: np.random.Generator, n: int, max_rounds: int = 50) -> FloatArray:
        """Rejection samples from the bounding cap."""
        center, radius = self.bounding_cap()
        found: list[FloatArray] = []
        count = 0
        for _ in range(max_rounds):
            batch = _sample_cap(rng, center, radius, 4 * n)
            keep = batch[self.contains(batch)]
            found.append(keep)
            count += len(keep)
            if count >= n:
                return np.concatenate(found)[:n]
        raise PreconditionError(f"region {self.spec()} looks empty: {count} of {n} samples accepted")


@dataclass(frozen=True, eq=False)
class Cap(SphericalRegion):
    """Closed (or open) ball of ``radius`` around ``center``."""

    center: FloatArray
    radius: float
    open: bool = False

    def __post_init__(self) -> None:
        if not 0.0 < self.radius <= math.pi:
            raise DomainError(f"cap radius must lie in (0, pi], got {self.radius}")
        object.__setattr__(self, "center", normalize(self.center))

    def excess(self, points: ArrayLike) -> FloatArray:
        return np.asarray(sph_distance(points, self.center)) - self.radius

    def distance(self, points: ArrayLike) -> FloatArray:
        pts = np.asarray(points, dtype=float).reshape(-1, 3)
        return np.maximum(self.excess(pts), 0.0)

    def boundary_samples(self, n: int = BOUNDARY_RESOLUTION) -> FloatArray:
        if self.radius >= math.pi:
            return np.empty((0, 3))
        return _circle(self.center, self.radius, n)

    def bounding_cap(self) -> tuple[FloatArray, float]:
        return self.center, self.radius

    def spec(self) -> str:
        c = ",".join(f"{x:.17g}" for x in self.center)
        return f"{'open:' if self.open else ''}cap:{c},{self.radius:.17g}"


def hemisphere(center: ArrayLike, open: bool = False) -> Cap:
    return Cap(np.asarray(center, dtype=float), HALF_PI, open)


@dataclass(frozen=True, eq=False)
class RegionIntersection(SphericalRegion):
    """Intersection of arbitrary regions."""

    parts: tuple[SphericalRegion, ...]

    def __post_init__(self) -> None:
        if not self.parts:
            raise DomainError("intersection needs at least one region")

    def excess(self, points: ArrayLike) -> FloatArray:
        return np.max(np.stack([part.excess(points) for part in self.parts]), axis=0)

    def contains(self, points: ArrayLike) -> NDArray[np.bool_]:
        return np.logical_and.reduce([part.contains(points) for part in self.parts])

    def boundary_samples(self, n: int = BOUNDARY_RESOLUTION) -> FloatArray:
        pieces = [part.boundary_samples(n) for part in self.parts]
        candidates = np.concatenate(pieces) if pieces else np.empty((0, 3))
        if candidates.size == 0:
            return candidates
        return candidates[self.excess(candidates) <= MEMBERSHIP_TOL]

    def bounding_cap(self) -> tuple[FloatArray, float]:
        return min((part.bounding_cap() for part in self.parts), key=lambda cap: cap[1])

    def spec(self) -> str:
        return "inter:" + ";".join(part.spec() for part in self.parts)


def _circle_intersections(a: Cap, b: Cap) -> FloatArray:
    """Points on both boundary circles (0 or 2 rows)."""
    d = float(a.center @ b.center)
    cross = np.cross(a.center, b.center)
    denom = float(cross @ cross)
    if denom < 1e-24:
        return np.empty((0, 3))
    ca, cb = math.cos(a.radius), math.cos(b.radius)
    alpha = (ca - d * cb) / denom
    beta = (cb - d * ca) / denom
    base = alpha * a.center + beta * b.center
    rest = 1.0 - float(base @ base)
    if rest < 0.0:
        return np.empty((0, 3))
    gamma = math.sqrt(rest / denom)
    return np.stack([base + gamma * cross, base - gamma * cross])


@dataclass(frozen=True, eq=False)
class CapIntersection(RegionIntersection):
    """Finite intersection of caps, with exact distance to the region."""

    parts: tuple[Cap, ...]

    @property
    def caps(self) -> tuple[Cap, ...]:
        return self.parts

    def vertices(self) -> FloatArray:
        rows = [
            _circle_intersections(self.caps[i], self.caps[j])
            for i in range(len(self.caps))
            for j in range(i + 1, len(self.caps))
        ]
        points = np.concatenate(rows) if rows else np.empty((0, 3))
        if points.size == 0:
            return points
        return points[self.excess(points) <= MEMBERSHIP_TOL]

    def boundary_samples(self, n: int = BOUNDARY_RESOLUTION) -> FloatArray:
        arcs = super().boundary_samples(n)
        return np.concatenate([arcs, self.vertices()])

    def distance(self, points: ArrayLike) -> FloatArray:
        """Nearest point is a circle projection or a vertex."""
        pts = np.asarray(points, dtype=float).reshape(-1, 3)
        best = np.full(len(pts), np.inf)
        for cap in self.caps:
            along = pts @ cap.center
            tangent = pts - along[:, None] * cap.center
            norm = np.linalg.norm(tangent, axis=1)
            fallback = tangent_basis(cap.center)[0]
            direction = np.where(norm[:, None] > 1e-12, tangent / np.where(norm > 1e-12, norm, 1.0)[:, None], fallback)
            proj = math.cos(cap.radius) * cap.center + math.sin(cap.radius) * direction
            valid = self.excess(proj) <= MEMBERSHIP_TOL
            d = np.asarray(sph_distance(pts, proj))
            best = np.where(valid, np.minimum(best, d), best)
        vertices = self.vertices()
        if vertices.size:
            best = np.minimum(best, np.min(np.arccos(np.clip(pts @ vertices.T, -1.0, 1.0)), axis=1))
        return np.where(self.contains(pts), 0.0, best)

    def spec(self) -> str:
        return "inter:" + ";".join(cap.spec() for cap in self.caps)


@dataclass(frozen=True, eq=False)
class SphericalPolygon(CapIntersection):
    """Convex geodesic polygon as the intersection of its edge hemispheres."""

    vertex_list: FloatArray = field(default_factory=lambda: np.empty((0, 3)))

    @classmethod
    def from_vertices(cls, vertices: ArrayLike) -> "SphericalPolygon":
        v = normalize(vertices)
        if len(v) < 3:
            raise DomainError("a polygon needs at least three vertices")
        inner = normalize(np.sum(v, axis=0))
        caps = []
        for a, b in zip(v, np.roll(v, -1, axis=0)):
            normal = np.cross(a, b)
            if np.linalg.norm(normal) < 1e-12:
                raise DomainError("polygon has a degenerate edge")
            normal = normalize(normal)
            if normal @ inner < 0.0:
                normal = -normal
            caps.append(Cap(normal, HALF_PI))
        polygon = cls(tuple(caps), v)
        if np.any(polygon.excess(v) > 1e-9):
            raise DomainError("polygon vertices are not in convex position")
        return polygon

    def boundary_samples(self, n: int = BOUNDARY_RESOLUTION) -> FloatArray:
        per_edge = max(2, n // len(self.vertex_list))
        v = self.vertex_list
        s = np.linspace(0.0, 1.0, per_edge)
        return _slerp(v, np.roll(v, -1, axis=0), s).reshape(-1, 3)

    def bounding_cap(self) -> tuple[FloatArray, float]:
        center = normalize(np.sum(self.vertex_list, axis=0))
        radius = float(np.max(sph_distance(self.vertex_list, center)))
        return (center, radius) if radius < HALF_PI else (center, math.pi)

    def spec(self) -> str:
        return "poly:" + ";".join(",".join(f"{x:.17g}" for x in v) for v in self.vertex_list)


@dataclass(frozen=True, eq=False)
class RegionUnion(SphericalRegion):
    """Union of regions (used for non-convex fixtures)."""

    parts: tuple[SphericalRegion, ...]

    def excess(self, points: ArrayLike) -> FloatArray:
        return np.min(np.stack([part.excess(points) for part in self.parts]), axis=0)

    def contains(self, points: ArrayLike) -> NDArray[np.bool_]:
        return np.logical_or.reduce([part.contains(points) for part in self.parts])

    def distance(self, points: ArrayLike) -> FloatArray:
        return np.min(np.stack([part.distance(points) for part in self.parts]), axis=0)

    def boundary_samples(self, n: int = BOUNDARY_RESOLUTION) -> FloatArray:
        candidates = np.concatenate([part.boundary_samples(n) for part in self.parts])
        if candidates.size == 0:
            return candidates
        return candidates[self.excess(candidates) >= -MEMBERSHIP_TOL]

    def bounding_cap(self) -> tuple[FloatArray, float]:
        return np.array([0.0, 0.0, 1.0]), math.pi

    def spec(self) -> str:
        return "union:" + "|".join(part.spec() for part in self.parts)


@dataclass(frozen=True, eq=False)
class WholeSphere(SphericalRegion):
    def excess(self, points: ArrayLike) -> FloatArray:
        return np.full(np.shape(points)[:-1], -math.pi)

    def distance(self, points: ArrayLike) -> FloatArray:
        return np.zeros(len(np.asarray(points).reshape(-1, 3)))

    def boundary_samples(self, n: int = BOUNDARY_RESOLUTION) -> FloatArray:
        return np.empty((0, 3))

    def bounding_cap(self) -> tuple[FloatArray, float]:
        return np.array([0.0, 0.0, 1.0]), math.pi

    def spec(self) -> str:
        return "sphere"


def _floats(text: str, count: int | None = None) -> list[float]:
    try:
        values = [float(x) for x in text.split(",")]
    except ValueError as exc:
        raise ConfigError(f"bad number list {text!r}") from exc
    if count is not None and len(values) != count:
        raise ConfigError(f"expected {count} numbers in {text!r}")
    return values


def parse_region(text: str) -> SphericalRegion:
    """Parse the region mini-language.

    ``cap:cx,cy,cz,r`` | ``open:cap:...`` | ``inter:cap:...;cap:...`` |
    ``poly:x,y,z;x,y,z;...`` | ``union:SPEC|SPEC`` | ``sphere``.
    Vectors are normalized.
    """
    text = text.strip()
    try:
        if text == "sphere":
            return WholeSphere()
        if text.startswith("union:"):
            return RegionUnion(tuple(parse_region(part) for part in text[6:].split("|")))
        if text.startswith("open:cap:"):
            cx, cy, cz, r = _floats(text[9:], 4)
            return Cap(np.array([cx, cy, cz]), r, open=True)
        if text.startswith("cap:"):
            cx, cy, cz, r = _floats(text[4:], 4)
            return Cap(np.array([cx, cy, cz]), r)
        if text.startswith("inter:"):
            caps = []
            for part in text[6:].split(";"):
                cap = parse_region(part)
                if not isinstance(cap, Cap):
                    raise ConfigError(f"intersection parts must be caps: {part!r}")
                caps.append(cap)
            return CapIntersection(tuple(caps))
        if text.startswith("poly:"):
            return SphericalPolygon.from_vertices([_floats(v, 3) for v in text[5:].split(";")])
    except DomainError as exc:
        raise ConfigError(f"invalid region {text!r}: {exc}") from exc
    raise ConfigError(f"unknown region spec {text!r}")


# ---------------------------------------------------------------------------
# Angle oracles
# ---------------------------------------------------------------------------


def lemma_angle_bound(R: float, eps: float) -> float:
    """``cos C = (cos R - cos eps cos R) / (sin eps sin R)``."""
    if not 0.0 < R < HALF_PI:
        raise DomainError(f"R must lie in (0, pi/2), got {R}")
    if not 0.0 < eps < HALF_PI - R:
        raise DomainError(f"eps must lie in (0, pi/2 - R), got {eps}")
    return (math.cos(R) - math.cos(eps) * math.cos(R)) / (math.sin(eps) * math.sin(R))


def triangle_angle_cosine(R: float, eps: float) -> float:
    """Measure the angle at the apex of the triangle with sides eps, R, R.

    The apex is the north pole, the eps side runs along the xz-plane and the
    third vertex is located by root finding on its distance.
    """
    if not 0.0 < eps < 2.0 * R or R + eps >= math.pi:
        raise DomainError("no triangle with sides eps, R, R")
    apex = np.array([0.0, 0.0, 1.0])
    near = np.array([math.sin(eps), 0.0, math.cos(eps)])

    def vertex(phi: float) -> FloatArray:
        return np.array([math.sin(R) * math.cos(phi), math.sin(R) * math.sin(phi), math.cos(R)])

    phi = brentq(lambda x: sph_distance(near, vertex(x)) - R, 0.0, math.pi, xtol=1e-15)
    far = vertex(phi)
    t1 = normalize(near - (near @ apex) * apex)
    t2 = normalize(far - (far @ apex) * apex)
    return float(t1 @ t2)


class FarthestPoint(NamedTuple):
    R: float
    point: FloatArray


def lattice_ladder(resolution: int) -> list[int]:
    """Lattice sizes ``LATTICE_BASE * 2**j`` not exceeding ``resolution``."""
    if resolution < LATTICE_BASE:
        raise PreconditionError(f"resolution must be at least {LATTICE_BASE}, got {resolution}")
    sizes = [LATTICE_BASE]
    while 2 * sizes[-1] <= resolution:
        sizes.append(2 * sizes[-1])
    return sizes


def _refined_farthest(region: SphericalRegion, n: int, candidates: int) -> FarthestPoint:
    grid = fibonacci_sphere(n)
    values = region.distance(grid)
    order = np.argsort(values)[::-1]
    best = FarthestPoint(float(values[order[0]]), grid[order[0]])
    spacing = fibonacci_spacing(n)
    starts: list[FloatArray] = []
    for i in order:
        if len(starts) == candidates:
            break
        if all(sph_distance(grid[i], s) > 2.0 * spacing for s in starts):
            starts.append(grid[i])
    for start in starts:
        e1, e2 = tangent_basis(start)

        def lift(w: FloatArray, start: FloatArray = start, e1: FloatArray = e1, e2: FloatArray = e2) -> FloatArray:
            return normalize(start + w[0] * e1 + w[1] * e2)

        def objective(w: FloatArray) -> float:
            return -float(region.distance(lift(w))[0])

        w = np.zeros(2)
        for size in (spacing, 1e-3 * spacing):
            simplex = np.array([w, w + [size, 0.0], w + [0.0, size]])
            result = minimize(
                objective,
                w,
                method="Nelder-Mead",
                options={"initial_simplex": simplex, "xatol": 1e-12, "fatol": 1e-14, "maxiter": 800},
            )
            w = result.x
        if -result.fun > best.R:
            best = FarthestPoint(-float(result.fun), lift(w))
    return best


def farthest_distance(region: SphericalRegion, resolution: int = 2000, candidates: int = 3) -> FarthestPoint:
    """``sup_z d(z, region)`` over Fibonacci lattices, refined by Nelder-Mead.

    Every lattice of :func:`lattice_ladder` up to ``resolution`` is searched
    and the best point kept. The ladders are nested, so ``R`` never decreases
    as ``resolution`` grows.
    """
    sizes = lattice_ladder(resolution)
    best = _refined_farthest(region, sizes[0], candidates)
    for n in sizes[1:]:
        found = _refined_farthest(region, n, candidates)
        if found.R > best.R:
            best = found
    return best


@dataclass(frozen=True, eq=False)
class HemisphereCertificate:
    """Region lies in the hemisphere of points at distance >= pi/2 from ``pole``."""

    pole: FloatArray
    farthest: float
    open: bool
    validated_samples: int
    min_distance: float


def hemisphere_certificate(
    region: SphericalRegion,
    resolution: int = 2000,
    samples: int = 2000,
    rng: np.random.Generator | None = None,
) -> HemisphereCertificate | None:
    """Closed certificate when ``R >= pi/2``, open when ``R > pi/2``; re-validated by sampling."""
    R, pole = farthest_distance(region, resolution)
    if R < HALF_PI - CERTIFICATE_TOL:
        return None
    rng = rng or np.random.default_rng(0)
    points = np.concatenate([region.sample(rng, samples), region.boundary_samples()])
    points = points[region.contains(points)]
    gap = float(np.min(sph_distance(points, pole))) if len(points) else math.pi
    if gap < HALF_PI - CERTIFICATE_TOL:
        log.warning("Hemisphere certificate failed validation", farthest=R, min_distance=gap)
        return None
    return HemisphereCertificate(pole, R, R > HALF_PI + CERTIFICATE_TOL, len(points), gap)


# ---------------------------------------------------------------------------
# Convexity verdicts
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Witness:
    p: FloatArray
    q: FloatArray
    s: float
    point: FloatArray
    excess: float
    direction: FloatArray | None = None

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "p": [float(x) for x in self.p],
            "q": [float(x) for x in self.q],
            "s": float(self.s),
            "point": [float(x) for x in self.point],
            "excess": float(self.excess),
        }
        if self.direction is not None:
            data["direction"] = [float(x) for x in self.direction]
        return data


@dataclass(frozen=True, eq=False)
class ConvexityVerdict:
    mode: str
    passed: bool
    witness: Witness | None
    samples_used: int
    pair_samples: int
    arc_samples: int
    family_directions: int

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "mode": self.mode,
            "verdict": "pass" if self.passed else "fail",
            "samples_used": self.samples_used,
            "pair_samples": self.pair_samples,
            "arc_samples": self.arc_samples,
            "family_directions": self.family_directions,
            "certified": "to sampling density",
        }
        if self.witness is not None:
            data.update({f"witness.{k}": v for k, v in self.witness.to_dict().items()})
        return data


def witness_holds(region: SphericalRegion, witness: Witness) -> bool:
    """A witness point must lie outside by more than ``WITNESS_TOL``."""
    return bool(region.excess(witness.point[None, :])[0] > WITNESS_TOL)


def format_verdict(verdict: ConvexityVerdict, header: str = "verdict") -> str:
    return format_block(header, verdict.to_dict())


def _pairs(region: SphericalRegion, rng: np.random.Generator, pair_samples: int) -> tuple[FloatArray, FloatArray]:
    inner = region.sample(rng, pair_samples)
    boundary = region.boundary_samples()
    if boundary.size:
        boundary = boundary[region.contains(boundary)]
    pool = np.concatenate([inner, boundary]) if boundary.size else inner
    i = rng.integers(0, len(pool), pair_samples)
    j = rng.integers(0, len(pool), pair_samples)
    p, q = [pool[i]], [pool[j]]
    if boundary.size:
        opposite = -boundary
        keep = region.contains(opposite)
        p.append(boundary[keep])
        q.append(opposite[keep])
    return np.concatenate(p), np.concatenate(q)


def convexity_check(
    region: SphericalRegion,
    mode: str = "s",
    pair_samples: int = 256,
    arc_samples: int = 64,
    rng: np.random.Generator | None = None,
    directions: int = FAMILY_DIRECTIONS,
) -> ConvexityVerdict:
    """Search sampled pairs for a minimizing arc that leaves the region.

    ``w``: some minimizing arc must stay inside. ``s``: every minimizing arc
    must. The two differ only on antipodal pairs, where all half great
    circles are minimizing.
    """
    if mode not in ("w", "s"):
        raise DomainError(f"mode must be 'w' or 's', got {mode!r}")
    if pair_samples < 64 or arc_samples < 64:
        raise PreconditionError("convexity check needs at least 64 pair and 64 arc samples")
    rng = rng or np.random.default_rng(0)
    p, q = _pairs(region, rng, pair_samples)
    s = np.linspace(0.0, 1.0, arc_samples)
    antipodal = np.asarray(sph_distance(p, q)) > math.pi - ANTIPODAL_TOL

    def verdict(passed: bool, witness: Witness | None) -> ConvexityVerdict:
        return ConvexityVerdict(mode, passed, witness, len(p), pair_samples, arc_samples, directions)

    regular = np.flatnonzero(~antipodal)
    if regular.size:
        arcs = _slerp(p[regular], q[regular], s)
        excess = region.excess(arcs)
        worst = np.unravel_index(int(np.argmax(excess)), excess.shape)
        if excess[worst] > WITNESS_TOL:
            k = regular[worst[0]]
            return verdict(False, Witness(p[k], q[k], float(s[worst[1]]), arcs[worst], float(excess[worst])))

    for k in np.flatnonzero(antipodal):
        arcs = _family_arcs(p[k], s, directions)
        excess = region.excess(arcs)
        per_arc = excess.max(axis=1)
        if mode == "s":
            arc = int(np.argmax(per_arc))
        else:
            arc = int(np.argmin(per_arc))
        if per_arc[arc] > WITNESS_TOL:
            j = int(np.argmax(excess[arc]))
            u = family_directions(p[k], directions)[arc]
            return verdict(False, Witness(p[k], q[k], float(s[j]), arcs[arc, j], float(excess[arc, j]), u))
    return verdict(True, None)


def local_convexity_check(
    region: SphericalRegion,
    centers: int = 8,
    pair_samples: int = 128,
    arc_samples: int = 64,
    rng: np.random.Generator | None = None,
) -> ConvexityVerdict:
    """s-convexity of the region inside balls of 0.9 times the convexity radius
    around sampled boundary points."""
    rng = rng or np.random.default_rng(0)
    boundary = region.boundary_samples()
    if boundary.size == 0:
        anchors = region.sample(rng, centers)
    else:
        anchors = boundary[rng.choice(len(boundary), size=min(centers, len(boundary)), replace=False)]
    used = 0
    for anchor in anchors:
        ball = Cap(anchor, 0.9 * CONVEXITY_RADIUS)
        local = convexity_check(RegionIntersection((region, ball)), "s", pair_samples, arc_samples, rng)
        used += local.samples_used
        if not local.passed:
            return ConvexityVerdict("l", False, local.witness, used, pair_samples, arc_samples, FAMILY_DIRECTIONS)
    return ConvexityVerdict("l", True, None, used, pair_samples, arc_samples, FAMILY_DIRECTIONS)


# ---------------------------------------------------------------------------
# Random convex regions
# ---------------------------------------------------------------------------


def _random_unit(rng: np.random.Generator) -> FloatArray:
    return normalize(rng.normal(size=3))


def _random_cap_around(rng: np.random.Generator, anchor: FloatArray, radius: float) -> Cap:
    """Cap of ``radius`` whose center is within ``radius - 0.05`` of ``anchor``."""
    e1, e2 = tangent_basis(anchor)
    offset = rng.uniform(0.0, radius - 0.05)
    phi = rng.uniform(0.0, 2.0 * math.pi)
    center = math.cos(offset) * anchor + math.sin(offset) * (math.cos(phi) * e1 + math.sin(phi) * e2)
    return Cap(center, radius)


def _random_s_convex(rng: np.random.Generator) -> SphericalRegion:
    kind = int(rng.integers(0, 3))
    if kind == 0:
        return Cap(_random_unit(rng), float(rng.uniform(0.2, 1.5)))
    if kind == 1:
        anchor = _random_unit(rng)
        count = int(rng.integers(2, 5))
        return CapIntersection(tuple(_random_cap_around(rng, anchor, float(rng.uniform(0.3, 1.5))) for _ in range(count)))
    center = _random_unit(rng)
    radius = float(rng.uniform(0.2, 1.2))
    count = int(rng.integers(3, 8))
    angles = np.sort(rng.uniform(0.0, 2.0 * math.pi, count))
    e1, e2 = tangent_basis(center)
    ring = np.cos(angles)[:, None] * e1 + np.sin(angles)[:, None] * e2
    vertices = math.cos(radius) * center + math.sin(radius) * ring
    try:
        return SphericalPolygon.from_vertices(vertices)
    except DomainError:
        return Cap(center, radius)


def _random_w_convex(rng: np.random.Generator) -> SphericalRegion:
    kind = int(rng.integers(0, 4))
    if kind == 0:
        return hemisphere(_random_unit(rng))
    if kind == 1:
        a = _random_unit(rng)
        b = _random_unit(rng)
        while abs(float(a @ b)) > 0.95:
            b = _random_unit(rng)
        return CapIntersection((hemisphere(a), hemisphere(b)))
    if kind == 2:
        anchor = _random_unit(rng)
        caps = tuple(_random_cap_around(rng, anchor, HALF_PI) for _ in range(3))
        return CapIntersection(caps)
    return _random_s_convex(rng)


def random_convex_regions(rng: np.random.Generator, n: int, kind: str = "s") -> list[SphericalRegion]:
    """Seeded closed convex regions: ``s`` stays inside an open hemisphere,
    ``w`` adds hemispheres, lunes and hemisphere intersections."""
    if kind == "s":
        return [_random_s_convex(rng) for _ in range(n)]
    if kind == "w":
        return [_random_w_convex(rng) for _ in range(n)]
    raise DomainError(f"kind must be 's' or 'w', got {kind!r}")


def regions_from_specs(specs: Iterable[str]) -> list[SphericalRegion]:
    return [parse_region(text) for text in specs]


def describe(regions: Sequence[SphericalRegion]) -> list[str]:
    return [region.spec() for region in regions]
