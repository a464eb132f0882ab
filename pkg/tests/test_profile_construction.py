import math
from dataclasses import dataclass, field

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from pydantic import ValidationError

from revcurv.errors import ConstructionError, DomainError, PreconditionError, UnsupportedOrderError
from revcurv.profile_construction import (
    HALF_PI,
    ConstructionParams,
    MollifiedShape,
    ProfileShape,
    RoundShape,
    build_profile,
    bump_kernel_value,
    eps0_constant,
    eps0_derivative,
    eps0_second_derivative,
    eps0_value,
    eps_derivative,
    export_profile,
    gluing_jumps,
    kernel_normalization,
    sample_profile,
    verify_claim_properties,
)


@dataclass(frozen=True)
class SteepShape:
    """``1.5 cos t``: slope exceeds 1 away from the equator."""

    lower: float = field(default=-HALF_PI, init=False)
    upper: float = field(default=HALF_PI, init=False)
    poles: tuple[bool, bool] = field(default=(True, True), init=False)
    degenerate: bool = field(default=False, init=False)

    def derivatives(self, t, max_order=3, check=True):
        s = np.asarray(t, dtype=float)
        rows = [np.cos(s), -np.sin(s), -np.cos(s), np.sin(s)]
        return 1.5 * np.stack(rows[: max_order + 1])

    def round_mask(self, t):
        return np.zeros(np.shape(t), dtype=bool)


@dataclass(frozen=True)
class ConeShape:
    """``2 - t``: unit slope everywhere, so the height never increases."""

    lower: float = field(default=0.0, init=False)
    upper: float = field(default=1.0, init=False)
    poles: tuple[bool, bool] = field(default=(False, False), init=False)
    degenerate: bool = field(default=False, init=False)

    def derivatives(self, t, max_order=3, check=True):
        s = np.asarray(t, dtype=float)
        rows = [2.0 - s, -np.ones_like(s), np.zeros_like(s), np.zeros_like(s)]
        return np.stack(rows[: max_order + 1])

    def round_mask(self, t):
        return np.zeros(np.shape(t), dtype=bool)


def test_gluing_constant():
    delta = 0.1
    half = HALF_PI - 2 * delta
    expected = half * (6 * math.cos(delta) - half * math.sin(delta)) / 12 + math.sin(delta)
    assert math.isclose(eps0_constant(delta), expected, rel_tol=1e-15)
    assert 0.76 < eps0_constant(delta) < 0.77


@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=0.01, max_value=0.7))
def test_eps0_is_c2_at_both_junctions(delta):
    for t0 in (delta, HALF_PI - delta):
        for k in range(3):
            left = eps0_derivative(t0 - 1e-13, delta, k)
            right = eps0_derivative(t0 + 1e-13, delta, k)
            assert abs(left - right) <= 1e-9


def test_eps0_pieces():
    delta = 0.1
    assert eps0_value(-1.0, delta) == 0.0
    assert eps0_value(delta, delta) == 0.0
    t = np.array([HALF_PI - delta + 0.01, HALF_PI, HALF_PI + delta])
    assert np.allclose(eps0_value(t, delta), eps0_constant(delta) - np.cos(t), atol=1e-15)


def test_eps0_slope_below_sin_on_polynomial_piece():
    delta = 0.1
    t = np.linspace(delta, HALF_PI - delta, 1001)
    slope = eps0_derivative(t, delta, 1)
    assert np.all(slope >= -1e-15)
    assert np.all(slope <= np.sin(t) + 1e-12)


def test_second_derivative_closed_form():
    delta = 0.1
    t = np.linspace(delta, HALF_PI - delta, 101)
    assert np.allclose(eps0_second_derivative(t, delta), eps0_derivative(t, delta, 2), atol=1e-12)
    with pytest.raises(DomainError):
        eps0_second_derivative(0.0, delta)


def test_second_derivative_matches_finite_differences():
    delta = 0.1
    t = np.random.default_rng(3).uniform(delta + 1e-3, HALF_PI - delta - 1e-3, 100)
    closed = eps0_second_derivative(t, delta)
    h = 1e-6
    slope = (eps0_derivative(t + h, delta, 1) - eps0_derivative(t - h, delta, 1)) / (2 * h)
    assert np.max(np.abs(slope - closed)) <= 1e-6
    h = 1e-4
    curvature = (eps0_value(t + h, delta) - 2 * eps0_value(t, delta) + eps0_value(t - h, delta)) / h**2
    assert np.max(np.abs(curvature - closed)) <= 1e-6
    assert eps0_second_derivative(math.pi / 4, delta) > 0.0


def test_eps0_domain_and_order():
    with pytest.raises(DomainError):
        eps0_value(2.0, 0.1)
    with pytest.raises(DomainError):
        eps0_value(0.5, 0.9)
    with pytest.raises(UnsupportedOrderError):
        eps0_derivative(0.5, 0.1, 5)


def test_params_reject_out_of_range_values():
    with pytest.raises(ValidationError):
        ConstructionParams(delta=0.5 * math.pi)
    with pytest.raises(ValidationError):
        ConstructionParams(delta=0.1, a=HALF_PI - 0.2)
    with pytest.raises(ValidationError):
        ConstructionParams(grid_n=100)
    assert ConstructionParams(a=0.3).stretch == pytest.approx(HALF_PI / (HALF_PI - 0.3))


def test_kernel_has_unit_cos_moment(kernel):
    assert kernel.moment(np.cos) == pytest.approx(1.0, abs=1e-12)
    assert kernel_normalization(0.1) == pytest.approx(kernel.alpha0, rel=1e-14)
    assert 1.0 < kernel.alpha0 < 1.01


def test_narrow_kernel_needs_almost_no_normalization():
    assert kernel_normalization(1e-3) == pytest.approx(1.0, abs=1e-5)


def test_kernel_annihilates_odd_functions(kernel):
    assert abs(kernel.moment(lambda y: np.cos(HALF_PI - y))) <= 1e-15
    assert abs(kernel.moment(lambda y: y**3)) <= 1e-15


def test_kernel_shape(kernel):
    d = kernel.delta
    assert bump_kernel_value(0.5 * d, kernel) == pytest.approx(kernel.alpha0 * math.exp(-4 / 3) / kernel.mass, rel=1e-14)
    assert bump_kernel_value(0.3 * d, kernel) == bump_kernel_value(-0.3 * d, kernel)
    assert bump_kernel_value(0.3 * d, kernel, 1) == -bump_kernel_value(-0.3 * d, kernel, 1)
    assert bump_kernel_value(d, kernel) == 0.0
    assert bump_kernel_value(2 * d, kernel, 3) == 0.0
    with pytest.raises(UnsupportedOrderError):
        bump_kernel_value(0.0, kernel, 5)


def test_kernel_derivative_matches_finite_difference(kernel):
    x, h = 0.037, 1e-6
    for k in range(4):
        scale = kernel.alpha0 / kernel.mass * kernel.delta ** -(k + 1)
        fd = (bump_kernel_value(x + h, kernel, k) - bump_kernel_value(x - h, kernel, k)) / (2 * h)
        assert abs(fd - bump_kernel_value(x, kernel, k + 1)) <= 1e-6 * scale


def test_waist_value(barbell, kernel):
    waist = float(barbell.eps(np.array([HALF_PI]), 0)[0, 0])
    assert waist == pytest.approx(eps0_constant(0.1) * kernel.alpha0, abs=1e-10)
    assert float(barbell.derivatives(HALF_PI, 0)[0]) == pytest.approx(waist, abs=1e-15)


def test_eps_vanishes_up_to_a(barbell):
    t = np.linspace(-HALF_PI, 0.0, 50)
    assert np.all(barbell.eps(t, 4) == 0.0)
    assert np.all(barbell.shape.round_mask(t))


def test_eps_derivative_pointwise(params, kernel, barbell):
    assert eps_derivative(0.0, 3, params, kernel) == 0.0
    t = np.array([0.4, 1.2])
    assert np.allclose(eps_derivative(t, 2, params, kernel), barbell.eps(t, 2)[2], rtol=1e-13, atol=0.0)
    assert eps_derivative(0.9, 0, params, kernel) > 0.0
    with pytest.raises(UnsupportedOrderError):
        eps_derivative(0.5, 5, params, kernel)
    with pytest.raises(DomainError):
        eps_derivative(2.0, 0, params, kernel)
    with pytest.raises(PreconditionError):
        eps_derivative(0.5, 0, ConstructionParams(delta=0.2), kernel)


def test_eps_derivatives_match_successive_finite_differences(params, kernel):
    t = np.random.default_rng(5).uniform(params.a, HALF_PI - 1e-3, 100)
    h = 1e-5
    for k in range(1, 4):
        ahead = eps_derivative(t + h, k - 1, params, kernel)
        behind = eps_derivative(t - h, k - 1, params, kernel)
        exact = eps_derivative(t, k, params, kernel)
        assert np.max(np.abs((ahead - behind) / (2 * h) - exact)) <= 1e-5


def test_eps_second_derivative_matches_second_difference(params, kernel):
    t = np.random.default_rng(6).uniform(params.a, HALF_PI - 1e-3, 100)
    h = 1e-4
    values = [eps_derivative(t + s, 0, params, kernel) for s in (-h, 0.0, h)]
    second = (values[0] - 2 * values[1] + values[2]) / h**2
    assert np.max(np.abs(second - eps_derivative(t, 2, params, kernel))) <= 1e-5


def test_profile_is_reflection_symmetric(barbell):
    t = np.array([0.2, 0.9, 1.4])
    here = barbell.derivatives(t, 3)
    there = barbell.derivatives(math.pi - t, 3)
    signs = np.array([1.0, -1.0, 1.0, -1.0])[:, None]
    assert np.allclose(here, signs * there, atol=1e-13)


def test_profile_samples(barbell):
    assert isinstance(barbell.shape, ProfileShape)
    assert barbell.closed
    assert barbell.f[0] == 0.0 and barbell.f[-1] == 0.0
    assert barbell.t.size == 4096
    assert barbell.speed_defect() < 1e-12
    assert np.all(np.diff(barbell.g) > 0.0)


def test_default_claims_pass(barbell):
    report = verify_claim_properties(barbell)
    assert report.passed, [r.id for r in report.failures()]
    assert not report.degenerate
    assert report.get("claim.matching.order1").measured <= 1e-6


def test_baseline_claims_pass_vacuously(baseline):
    report = verify_claim_properties(baseline)
    assert report.passed
    assert report.degenerate
    assert report.get("claim.convex_strict").detail.startswith("vacuous")


def test_wrong_amplitude_breaks_matching(params, kernel):
    profile = sample_profile(MollifiedShape(params, kernel, amplitude=1.5), 1024, params)
    report = verify_claim_properties(profile)
    assert not report.passed
    assert not report.get("claim.matching.order1").passed


def test_steep_shape_raises_construction_error():
    with pytest.raises(ConstructionError) as excinfo:
        sample_profile(SteepShape(), 1024)
    assert excinfo.value.slope > 1.0
    assert -HALF_PI <= excinfo.value.t <= HALF_PI
    assert "exceeds 1" in str(excinfo.value)


def test_flat_height_raises_construction_error():
    with pytest.raises(ConstructionError) as excinfo:
        sample_profile(ConeShape(), 512)
    assert excinfo.value.t == 0.0
    assert excinfo.value.slope == 1.0
    message = str(excinfo.value)
    assert "not strictly increasing" in message
    assert "exceeds" not in message


def test_round_profile_has_no_perturbation(baseline):
    assert baseline.degenerate
    assert np.allclose(baseline.f, np.cos(baseline.t), atol=1e-15)
    assert np.all(baseline.eps(baseline.t[:10], 2) == 0.0)
    assert baseline.g[-1] == pytest.approx(2.0, abs=1e-12)


def test_one_cap_round_profile_is_open():
    profile = sample_profile(RoundShape(upper=0.0), 512)
    assert not profile.closed
    with pytest.raises(DomainError):
        RoundShape(upper=2.0)


def test_eps_needs_a_perturbed_shape():
    from revcurv.profile_construction import CylinderShape

    with pytest.raises(PreconditionError):
        sample_profile(CylinderShape(), 512).eps(np.array([0.1]))


def test_gluing_is_smooth(barbell):
    assert gluing_jumps(barbell, 0.0).max() <= 1e-5
    assert gluing_jumps(barbell, HALF_PI).max() <= 1e-5


def test_experimental_shift_builds(kernel):
    params = ConstructionParams(a=0.2, grid_n=1024)
    profile = build_profile(params, kernel=kernel)
    t = np.array([0.1, 0.2])
    assert np.all(profile.eps(t, 2) == 0.0)
    assert float(profile.eps(np.array([1.0]), 0)[0, 0]) > 0.0


def test_export_profile(tmp_path, baseline):
    path = export_profile(baseline, tmp_path / "profile.csv")
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "t,f,fp,fpp,g"
    assert len(lines) == baseline.t.size + 1
    assert len(lines[1].split(",")) == 5
