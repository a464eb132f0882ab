"""Command-line front end: build the profile, run the verification suites,
write the report and the figure data.

Suites run in a fixed order and each returns its own check records, so the
report reads the same whether they ran sequentially or on worker threads.
"""

from __future__ import annotations

import argparse
import asyncio
import math
import sys
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np
from loguru import logger

from revcurv import __version__
from revcurv.errors import ConfigError, ConstructionError, ConsistencyError
from revcurv.figures import export_figures as write_figures
from revcurv.figures import eps0_comparison, waist_shape
from revcurv.geodesic_dynamics import (
    GeodesicState,
    clairaut_drift,
    drift_order_check,
    export_jacobi,
    export_trajectory,
    first_conjugate_time,
    geodesic_flow,
    geodesic_parallels,
    jacobi_field,
    parallel_closure_length,
    random_round_states,
    shortest_closed_geodesic,
)
from revcurv.log_config import configure_logging
from revcurv.metric_geometry import (
    GAUSS_BONNET_TOL,
    MINIMAL_SPHERE_SLACK,
    curvature_extrema,
    curvature_field,
    export_curvature,
    minimal_sphere_bound_check,
    telescoped_total_curvature,
    total_curvature,
)
from revcurv.metrics import checks_total, last_report_passed
from revcurv.profile_construction import (
    HALF_PI,
    ProfileCurve,
    build_profile,
    export_profile,
    gluing_jumps,
    verify_claim_properties,
)
from revcurv.report import CheckRecord, VerificationReport, check
from revcurv.safe_run import safe_suite
from revcurv.settings import RunConfig, load_run_config
from revcurv.spherical_convexity import (
    Cap,
    convexity_check,
    farthest_distance,
    fibonacci_spacing,
    format_verdict,
    hemisphere,
    hemisphere_certificate,
    lemma_angle_bound,
    random_convex_regions,
    regions_from_specs,
    triangle_angle_cosine,
    witness_holds,
)

log = logger.bind(name="Verify")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2
EXIT_CONSTRUCTION = 3

CURVATURE_SLACK = 1e-9
NEGATIVE_CURVATURE = -1e-3
SHORT_GEODESIC_GAP = 0.5
CLOSURE_TOL = 1e-6
CONJUGATE_TOL = 1e-6
DRIFT_TOL = 1e-8
DRIFT_LENGTH = 10.0
GLUING_TOL = 1e-5
ROUND_STATES = 20
FARTHEST_RESOLUTION = 2000
RANDOM_REGIONS = 20
ANGLE_SAMPLES = 50
ANGLE_TOL = 1e-8
FARTHEST_TOL = 1e-6
REPORT_FILE = "report.txt"


@dataclass
class SuiteContext:
    """Inputs shared by the suites; the profiles are built on first use."""

    config: RunConfig

    @cached_property
    def profile(self) -> ProfileCurve:
        return build_profile(self.config.construction_params(), baseline=self.config.baseline)

    @cached_property
    def baseline(self) -> ProfileCurve:
        if self.config.baseline:
            return self.profile
        return build_profile(self.config.construction_params(), baseline=True)

    def rng(self, stream: int) -> np.random.Generator:
        return np.random.default_rng([self.config.seed, stream])


Suite = Callable[[SuiteContext], list[CheckRecord]]


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------


@safe_suite("claim")
def claim_suite(ctx: SuiteContext) -> list[CheckRecord]:
    profile = ctx.profile
    records = list(verify_claim_properties(profile).records)
    defect = profile.speed_defect()
    records.append(
        check("profile.unit_speed", "profile curve has unit speed", "max |f'^2 + g'^2 - 1| <= tol", defect, 1e-10, defect <= 1e-10)
    )
    if profile.degenerate:
        return records
    asymmetry = float(np.max(np.abs(profile.f - profile.f[::-1])))
    records.append(
        check("profile.reflection", "f(t) = f(pi - t)", "max |f(t) - f(pi - t)| <= tol", asymmetry, 1e-12, asymmetry <= 1e-12)
    )
    a = profile.params.a if profile.params else 0.0
    for name, t0 in (("a", a), ("waist", HALF_PI)):
        jumps = gluing_jumps(profile, t0)
        worst = float(jumps.max())
        records.append(
            check(
                f"gluing.{name}",
                f"derivatives of f of orders 1-4 continuous at t={t0:.17g}",
                "max_k |f^(k)(t0+) - f^(k)(t0-)| <= tol",
                worst,
                GLUING_TOL,
                worst <= GLUING_TOL,
                "jumps=" + ";".join(f"{float(j):.3e}" for j in jumps),
            )
        )
    ordering = eps0_comparison(profile.params.delta if profile.params else 0.1)
    records.append(
        check(
            "figure.eps0_ordering",
            "eps0 lies above c - cos t on its polynomial piece",
            "min(eps0 - (c - cos t)) >= -tol",
            ordering.min_gap,
            -1e-12,
            ordering.min_gap >= -1e-12,
        )
    )
    records.append(
        check(
            "figure.eps0_contact",
            "eps0 meets c - cos t at pi/2 - delta",
            "|eps0 - (c - cos t)| <= tol",
            ordering.contact_gap,
            1e-12,
            ordering.contact_gap <= 1e-12,
        )
    )
    shape = waist_shape(profile)
    records.append(
        check(
            "figure.waist_minimum",
            "f has a local minimum at pi/2",
            "f(pi/2) < f(pi/2 +- 0.2)",
            min(shape.left, shape.right) - shape.value,
            0.0,
            shape.is_local_minimum,
            f"value={shape.value:.17g}",
        )
    )
    return records


@safe_suite("curvature")
def curvature_suite(ctx: SuiteContext) -> list[CheckRecord]:
    profile = ctx.profile
    field = curvature_field(profile)
    extrema = curvature_extrema(profile)
    records = [
        check(
            "curvature.upper_bound",
            "Gauss curvature at most 1",
            "max K <= 1 + tol",
            extrema.k_max,
            1.0 + CURVATURE_SLACK,
            max(extrema.k_max, field.max) <= 1.0 + CURVATURE_SLACK,
            f"t_max={extrema.t_max:.17g}",
        ),
        check(
            "curvature.unity_exact",
            "K is exactly 1 where the profile is unperturbed",
            "K == 1 on the round band",
            float(np.count_nonzero(field.round_mask)),
            0.0,
            field.unity_exact(),
            "measured=round samples",
        ),
    ]
    if profile.degenerate:
        error = abs(extrema.k_min - 1.0)
        records.append(
            check("curvature.min", "round baseline has K = 1", "|K_min - 1| <= tol", error, 1e-12, error <= 1e-12)
        )
    else:
        records.append(
            check(
                "curvature.negative",
                "negative curvature somewhere in the perturbed band",
                "K_min < -1e-3",
                extrema.k_min,
                NEGATIVE_CURVATURE,
                extrema.k_min < NEGATIVE_CURVATURE,
                f"t_min={extrema.t_min:.17g}",
            )
        )
    return records


@safe_suite("gauss_bonnet")
def gauss_bonnet_suite(ctx: SuiteContext) -> list[CheckRecord]:
    records = []
    for name, profile in _profiles(ctx):
        telescoped = telescoped_total_curvature(profile)
        try:
            total = total_curvature(profile)
            agreement = abs(total - telescoped)
        except ConsistencyError as exc:
            log.warning("Gauss-Bonnet forms disagree", profile=name, error=str(exc))
            total, agreement = float("nan"), float("inf")
        error = abs(telescoped - 4.0 * math.pi)
        records.append(
            check(
                f"gauss_bonnet.{name}.total",
                "total curvature of a sphere is 4 pi",
                "|2 pi int K f dt - 4 pi| <= tol",
                abs(total - 4.0 * math.pi),
                GAUSS_BONNET_TOL,
                abs(total - 4.0 * math.pi) <= GAUSS_BONNET_TOL,
                f"telescoped_error={error:.3e}",
            )
        )
        records.append(
            check(
                f"gauss_bonnet.{name}.telescoped",
                "quadrature agrees with 2 pi (f'(start) - f'(end))",
                "|quadrature - telescoped| <= tol",
                agreement,
                GAUSS_BONNET_TOL,
                agreement <= GAUSS_BONNET_TOL,
            )
        )
    return records


@safe_suite("minimal_sphere")
def minimal_sphere_suite(ctx: SuiteContext) -> list[CheckRecord]:
    bound = minimal_sphere_bound_check(ctx.profile)
    detail = f"area={bound.area:.17g};k_max={bound.k_max:.17g}"
    if ctx.profile.degenerate:
        equal = abs(bound.margin) <= MINIMAL_SPHERE_SLACK
        return [
            check(
                "minimal_sphere.equality",
                "round sphere attains K_max * Area = 4 pi",
                "|K_max * Area - 4 pi| <= tol",
                bound.margin,
                MINIMAL_SPHERE_SLACK,
                equal,
                detail,
            )
        ]
    return [
        check(
            "minimal_sphere.bound",
            "K_max * Area >= 4 pi",
            "K_max * Area - 4 pi >= -tol",
            bound.margin,
            -MINIMAL_SPHERE_SLACK,
            bound.passed,
            detail,
        ),
        check(
            "minimal_sphere.strict",
            "barbell margin is strictly positive",
            "K_max * Area - 4 pi > 0",
            bound.margin,
            0.0,
            bound.margin > MINIMAL_SPHERE_SLACK,
            detail,
        ),
    ]


@safe_suite("closed_geodesics")
def closed_geodesic_suite(ctx: SuiteContext) -> list[CheckRecord]:
    profile = ctx.profile
    shortest = shortest_closed_geodesic(profile)
    detail = f"classification={shortest.classification};t={shortest.t}"
    if profile.degenerate:
        error = abs(shortest.length - 2.0 * math.pi)
        return [
            check("closed_geodesic.round", "shortest closed geodesic of the round sphere is 2 pi", "|L - 2 pi| <= tol", error, 1e-9, error <= 1e-9, detail)
        ]
    waist = float(profile.eps(np.array([HALF_PI]), 0)[0, 0])
    target = 2.0 * math.pi * waist
    return [
        check(
            "closed_geodesic.short",
            "a closed geodesic shorter than 2 pi exists",
            "L < 2 pi - 0.5",
            shortest.length,
            2.0 * math.pi - SHORT_GEODESIC_GAP,
            shortest.length < 2.0 * math.pi - SHORT_GEODESIC_GAP,
            detail,
        ),
        check(
            "closed_geodesic.waist",
            "shortest closed geodesic is the waist parallel",
            "|L - 2 pi eps(pi/2)| <= tol",
            abs(shortest.length - target),
            1e-9,
            abs(shortest.length - target) <= 1e-9 and shortest.classification == "parallel",
            f"waist={waist:.17g}",
        ),
    ]


@safe_suite("waist_ode")
def waist_ode_suite(ctx: SuiteContext) -> list[CheckRecord]:
    records = []
    parallels = geodesic_parallels(ctx.profile)
    for i, parallel in enumerate(parallels.parallels):
        closed = parallel_closure_length(ctx.profile, parallel.t, ctx.config.step_tol)
        error = abs(closed - parallel.length)
        records.append(
            check(
                f"waist_ode.parallel{i}",
                f"ODE closure length of the parallel at t={parallel.t:.6f}",
                "|L_ode - 2 pi f(t*)| <= tol",
                error,
                CLOSURE_TOL,
                error <= CLOSURE_TOL,
                f"kind={parallel.kind};length={parallel.length:.17g}",
            )
        )
    if not records:
        records.append(check("waist_ode.parallels", "profile has geodesic parallels", "count > 0", 0.0, 1.0, False))
    return records


@safe_suite("conjugate")
def conjugate_suite(ctx: SuiteContext) -> list[CheckRecord]:
    worst, missing = 0.0, 0
    for state in random_round_states(ctx.rng(1), ROUND_STATES):
        traj = geodesic_flow(ctx.baseline, state, math.pi + 0.5, ctx.config.step_tol)
        first = first_conjugate_time(ctx.baseline, traj, ctx.config.step_tol)
        if first is None:
            missing += 1
            continue
        worst = max(worst, abs(first - math.pi))
    records = [
        check(
            "conjugate.round",
            f"first conjugate time is pi on {ROUND_STATES} round geodesics",
            "max |t_conj - pi| <= tol",
            worst,
            CONJUGATE_TOL,
            worst <= CONJUGATE_TOL and missing == 0,
            f"missing={missing}",
        )
    ]
    if not ctx.profile.degenerate:
        f = float(ctx.profile.derivatives(HALF_PI, 0)[0])
        traj = geodesic_flow(ctx.profile, GeodesicState(HALF_PI, 0.0, 0.0, 1.0 / f), 4.0 * math.pi, ctx.config.step_tol)
        first = first_conjugate_time(ctx.profile, traj, ctx.config.step_tol)
        records.append(
            check(
                "conjugate.waist",
                "no conjugate point along the flat waist within 4 pi",
                "no Jacobi zero on (0, 4 pi]",
                float("nan") if first is None else first,
                4.0 * math.pi,
                first is None,
            )
        )
    return records


@safe_suite("integrator")
def integrator_suite(ctx: SuiteContext) -> list[CheckRecord]:
    profile = ctx.profile
    state = GeodesicState.from_heading(profile, 0.3, 0.0, 1.0)
    traj = geodesic_flow(profile, state, DRIFT_LENGTH, ctx.config.step_tol)
    drift = clairaut_drift(traj)
    speed = float(np.max(traj.speed_defect))
    order = drift_order_check(profile, state, DRIFT_LENGTH)
    return [
        check("integrator.clairaut", "Clairaut invariant conserved over length 10", "max |f^2 theta' - c| <= tol", drift, DRIFT_TOL, drift <= DRIFT_TOL, f"nfev={traj.nfev}"),
        check("integrator.unit_speed", "unit speed conserved over length 10", "max |speed^2 - 1| <= tol", speed, DRIFT_TOL, speed <= DRIFT_TOL),
        check(
            "integrator.order",
            "halving the step reduces the drift at least 4x",
            "drift(h) / drift(h/2) >= 4",
            order.ratio,
            4.0,
            order.passed,
            f"coarse={order.coarse_drift:.3e};fine={order.fine_drift:.3e}",
        ),
    ]


@safe_suite("convexity")
def convexity_suite(ctx: SuiteContext) -> list[CheckRecord]:
    records: list[CheckRecord] = []
    spacing = fibonacci_spacing(FARTHEST_RESOLUTION)
    for i, region in enumerate(regions_from_specs(ctx.config.regions)):
        R = farthest_distance(region, FARTHEST_RESOLUTION).R
        spec = region.spec()
        if isinstance(region, Cap):
            error = abs(R - (math.pi - region.radius))
            records.append(
                check(f"convexity.region{i}.farthest", "farthest distance from a cap is pi - r", "|R - (pi - r)| <= 2 * spacing", error, 2.0 * spacing, error <= 2.0 * spacing, spec)
            )
        weak = convexity_check(region, "w", rng=ctx.rng(100 + i))
        strong = convexity_check(region, "s", rng=ctx.rng(200 + i))
        for verdict in (weak, strong):
            holds = verdict.passed or (verdict.witness is not None and witness_holds(region, verdict.witness))
            records.append(
                check(
                    f"convexity.region{i}.{verdict.mode}",
                    f"{verdict.mode}-convexity verdict is backed by its witness",
                    "pass, or a witness outside the region",
                    0.0 if verdict.witness is None else verdict.witness.excess,
                    0.0,
                    holds,
                    f"{spec};verdict={'pass' if verdict.passed else 'fail'}",
                )
            )
        if weak.passed:
            records.append(_farthest_record(f"convexity.region{i}.weak_bound", R, strict=False, detail=spec))
        if strong.passed:
            records.append(_farthest_record(f"convexity.region{i}.strong_bound", R, strict=True, detail=spec))

    weak_margin = min(farthest_distance(r, FARTHEST_RESOLUTION).R for r in random_convex_regions(ctx.rng(2), RANDOM_REGIONS, "w"))
    records.append(_farthest_record("convexity.random_w", weak_margin, strict=False, detail=f"regions={RANDOM_REGIONS}"))
    strong_regions = random_convex_regions(ctx.rng(3), RANDOM_REGIONS // 2, "s")
    strong_margin = min(farthest_distance(r, FARTHEST_RESOLUTION).R for r in strong_regions)
    records.append(_farthest_record("convexity.random_s", strong_margin, strict=True, detail=f"regions={len(strong_regions)}"))
    certificate = hemisphere_certificate(strong_regions[0], FARTHEST_RESOLUTION, rng=ctx.rng(4))
    records.append(
        check(
            "convexity.certificate",
            "s-convex region lies in an open hemisphere",
            "validated open hemisphere certificate",
            float("nan") if certificate is None else certificate.min_distance,
            HALF_PI,
            certificate is not None and certificate.open,
        )
    )

    closed = hemisphere((0.0, 0.0, 1.0))
    weak = convexity_check(closed, "w", rng=ctx.rng(5))
    strong = convexity_check(closed, "s", rng=ctx.rng(6))
    validated = strong.witness is not None and witness_holds(closed, strong.witness)
    records.append(
        check(
            "convexity.hemisphere",
            "closed hemisphere is w-convex but not s-convex",
            "w pass, s fail with a re-validating witness",
            0.0 if strong.witness is None else strong.witness.excess,
            0.0,
            weak.passed and not strong.passed and validated,
            format_verdict(strong, "s").replace("\n", ";"),
        )
    )

    rng = ctx.rng(7)
    worst = 0.0
    for _ in range(ANGLE_SAMPLES):
        R = float(rng.uniform(0.05, HALF_PI - 0.05))
        eps = float(rng.uniform(0.01, 0.99)) * min(HALF_PI - R, 2.0 * R)
        worst = max(worst, abs(lemma_angle_bound(R, eps) - triangle_angle_cosine(R, eps)))
    records.append(
        check("convexity.angle_formula", "closed-form apex angle matches the constructed triangle", "max |cos C - measured| <= tol", worst, ANGLE_TOL, worst <= ANGLE_TOL)
    )
    return records


def _farthest_record(check_id: str, R: float, strict: bool, detail: str) -> CheckRecord:
    if strict:
        return check(check_id, "s-convex region has farthest distance above pi/2", "R > pi/2", R, HALF_PI, R > HALF_PI, detail)
    return check(check_id, "w-convex region has farthest distance at least pi/2", "R >= pi/2 - tol", R, HALF_PI - FARTHEST_TOL, R >= HALF_PI - FARTHEST_TOL, detail)


def _profiles(ctx: SuiteContext) -> list[tuple[str, ProfileCurve]]:
    if ctx.config.baseline:
        return [("baseline", ctx.baseline)]
    return [("baseline", ctx.baseline), ("barbell", ctx.profile)]


SUITES: tuple[Suite, ...] = (
    claim_suite,
    curvature_suite,
    gauss_bonnet_suite,
    minimal_sphere_suite,
    closed_geodesic_suite,
    waist_ode_suite,
    conjugate_suite,
    integrator_suite,
    convexity_suite,
)


# ---------------------------------------------------------------------------
# Orchestration
# ---------------------------------------------------------------------------


async def _gather(ctx: SuiteContext, suites: Sequence[Suite]) -> list[list[CheckRecord]]:
    return list(await asyncio.gather(*(asyncio.to_thread(suite, ctx) for suite in suites)))


def _log_records(records: Sequence[CheckRecord]) -> None:
    for record in records:
        checks_total.labels("pass" if record.passed else "fail").inc()
        if record.passed:
            log.info("Check passed", id=record.id, measured=record.measured)
        else:
            log.warning("Check failed", id=record.id, measured=record.measured, threshold=record.threshold)


def write_data_files(ctx: SuiteContext) -> list[Path]:
    out = ctx.config.out_dir
    return [
        export_profile(ctx.profile, out / "profile.csv"),
        export_curvature(curvature_field(ctx.profile), out / "curvature.csv"),
    ]


def run_report(config: RunConfig) -> tuple[VerificationReport, int]:
    """Run every suite in order, write the report and data files.

    Returns the report and the exit status. A construction error aborts the
    run; the records gathered so far are still written.
    """
    ctx = SuiteContext(config)
    report = VerificationReport(config=config.echo(), version=__version__, degenerate=config.baseline)
    path = config.out_dir / REPORT_FILE
    try:
        ctx.profile  # noqa: B018
        if config.parallel:
            # profiles must exist before threads share the context
            ctx.baseline  # noqa: B018
            results = asyncio.run(_gather(ctx, SUITES))
        else:
            results = [suite(ctx) for suite in SUITES]
        for records in results:
            _log_records(records)
            report.extend(records)
        write_data_files(ctx)
    except ConstructionError as exc:
        log.error("Profile construction failed", t=exc.t, slope=exc.slope)
        report.aborted = str(exc)
        report.write(path)
        last_report_passed.set(0)
        return report, EXIT_CONSTRUCTION
    report.write(path)
    last_report_passed.set(1 if report.passed else 0)
    log.info("Report written", path=str(path), passed=report.passed_count, failed=report.failed_count)
    return report, EXIT_OK if report.passed else EXIT_FAILED


def export_figures(config: RunConfig) -> list[Path]:
    """Profile, eps0 and curvature figures for ``config`` in its output directory."""
    return write_figures(SuiteContext(config).profile, config.out_dir)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def _emit(items: dict[str, Any]) -> None:
    for key, value in items.items():
        print(f"{key}={value:.17g}" if isinstance(value, float) else f"{key}={value}")


def cmd_build(config: RunConfig) -> int:
    """Build the profile and write its table."""
    ctx = SuiteContext(config)
    path = export_profile(ctx.profile, config.out_dir / "profile.csv")
    profile = ctx.profile
    _emit(
        {
            "waist_radius": float(profile.derivatives(HALF_PI, 0)[0]),
            "axis_length": float(profile.g[-1]),
            "speed_defect": profile.speed_defect(),
            "table": str(path),
        }
    )
    return EXIT_OK


def cmd_curvature(config: RunConfig) -> int:
    """Curvature extrema and the K table."""
    profile = SuiteContext(config).profile
    field = curvature_field(profile)
    extrema = curvature_extrema(profile)
    path = export_curvature(field, config.out_dir / "curvature.csv")
    _emit(
        {
            "k_max": extrema.k_max,
            "t_max": extrema.t_max,
            "k_min": extrema.k_min,
            "t_min": extrema.t_min,
            "unity_exact": field.unity_exact(),
            "table": str(path),
        }
    )
    return EXIT_OK


def cmd_geodesic(config: RunConfig) -> int:
    """Geodesic parallels and the shortest closed geodesic."""
    profile = SuiteContext(config).profile
    shortest = shortest_closed_geodesic(profile)
    for i, parallel in enumerate(geodesic_parallels(profile).parallels):
        _emit({f"parallel{i}.t": parallel.t, f"parallel{i}.length": parallel.length, f"parallel{i}.kind": parallel.kind})
    items: dict[str, Any] = {"shortest.length": shortest.length, "shortest.classification": shortest.classification}
    if shortest.t is not None:
        f = float(profile.derivatives(shortest.t, 0)[0])
        traj = geodesic_flow(profile, GeodesicState(shortest.t, 0.0, 0.0, 1.0 / f), shortest.length, config.step_tol)
        items["trajectory"] = str(export_trajectory(traj, config.out_dir / "trajectory.csv"))
    _emit(items)
    return EXIT_OK


def cmd_conjugate(config: RunConfig) -> int:
    """First conjugate times on random round-sphere geodesics."""
    ctx = SuiteContext(config)
    worst = 0.0
    solution = None
    for state in random_round_states(ctx.rng(1), ROUND_STATES):
        traj = geodesic_flow(ctx.baseline, state, math.pi + 0.5, config.step_tol)
        solution = jacobi_field(ctx.baseline, traj, config.step_tol)
        if solution.first_zero is None:
            worst = math.inf
        else:
            worst = max(worst, abs(solution.first_zero - math.pi))
    items: dict[str, Any] = {"states": ROUND_STATES, "max_error": worst}
    if solution is not None:
        items["jacobi"] = str(export_jacobi(solution, config.out_dir / "jacobi.csv"))
    _emit(items)
    return EXIT_OK if worst <= CONJUGATE_TOL else EXIT_FAILED


def cmd_convexity(config: RunConfig) -> int:
    """Convexity verdicts and farthest distances for the configured regions."""
    rng = np.random.default_rng(config.seed)
    status = EXIT_OK
    for i, region in enumerate(regions_from_specs(config.regions)):
        R = farthest_distance(region, FARTHEST_RESOLUTION).R
        print(f"[region]\nindex={i}\nspec={region.spec()}\nfarthest={R:.17g}\n")
        for mode in ("w", "s"):
            verdict = convexity_check(region, mode, rng=rng)
            print(format_verdict(verdict))
            if not verdict.passed and verdict.witness is not None and not witness_holds(region, verdict.witness):
                status = EXIT_FAILED
    return status


def cmd_report(config: RunConfig) -> int:
    """Run every verification suite and write the report."""
    report, status = run_report(config)
    print(f"report={config.out_dir / REPORT_FILE}")
    print(f"checks={len(report.records)}\npassed={report.passed_count}\nfailed={report.failed_count}")
    return status


def cmd_figures(config: RunConfig) -> int:
    """Write the figure tables and SVG plots."""
    for path in export_figures(config):
        print(f"file={path}")
    return EXIT_OK


COMMANDS: dict[str, Callable[[RunConfig], int]] = {
    "build": cmd_build,
    "curvature": cmd_curvature,
    "geodesic": cmd_geodesic,
    "conjugate": cmd_conjugate,
    "convexity": cmd_convexity,
    "report": cmd_report,
    "figures": cmd_figures,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, default=None, help="settings YAML (default config/settings.yaml)")
    common.add_argument("--delta", type=float, default=None)
    common.add_argument("--a", type=float, default=None)
    common.add_argument("--grid", dest="grid_n", type=int, default=None)
    common.add_argument("--quad-order", dest="quad_order", type=int, default=None)
    common.add_argument("--quad-panels", dest="quad_panels", type=int, default=None)
    common.add_argument("--step-tol", dest="step_tol", type=float, default=None)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--out", dest="out_dir", type=Path, default=None)
    common.add_argument("--baseline", action="store_true", default=None)
    common.add_argument("--parallel", action="store_true", default=None)
    common.add_argument("--region", dest="regions", action="append", default=None, help="region spec, repeatable")
    common.add_argument("--log-level", default=None)

    parser = argparse.ArgumentParser(prog="revcurv", description="Verify the barbell metric on the 2-sphere.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, func in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=(func.__doc__ or name).strip().splitlines()[0])
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    overrides = {
        key: value
        for key, value in vars(args).items()
        if key not in ("command", "config", "log_level")
    }
    try:
        config = load_run_config(args.config, **overrides)
    except ConfigError as exc:
        log.error("Invalid configuration", error=str(exc))
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    config.out_dir.mkdir(parents=True, exist_ok=True)
    try:
        return COMMANDS[args.command](config)
    except ConstructionError as exc:
        print(f"construction error: {exc}", file=sys.stderr)
        return EXIT_CONSTRUCTION
