import math

import numpy as np
import pytest

from revcurv.errors import PreconditionError
from revcurv.geodesic_dynamics import (
    GeodesicState,
    clairaut_drift,
    conservation_drift,
    drift_order_check,
    export_jacobi,
    export_trajectory,
    first_conjugate_time,
    geodesic_flow,
    geodesic_parallels,
    jacobi_field,
    load_profile_table,
    meridian_loop_length,
    parallel_closure_length,
    random_round_states,
    shortest_closed_geodesic,
)
from revcurv.profile_construction import HALF_PI, CylinderShape, export_profile, sample_profile


def test_round_geodesic_conserves_invariants(baseline):
    state = GeodesicState.from_heading(baseline, 0.4, 0.0, 1.1)
    traj = geodesic_flow(baseline, state, 10.0)
    assert traj.length == pytest.approx(10.0)
    assert clairaut_drift(traj) <= 1e-8
    assert conservation_drift(traj) <= 1e-8
    assert traj.nfev > 0


def test_round_geodesic_is_a_great_circle(baseline):
    state = GeodesicState.from_heading(baseline, 0.0, 0.0, 0.7)
    traj = geodesic_flow(baseline, state, 2 * math.pi)
    end = traj.final
    assert end.t == pytest.approx(0.0, abs=1e-7)
    assert end.theta == pytest.approx(2 * math.pi, abs=1e-7)


def test_barbell_geodesic_conserves_invariants(barbell):
    state = GeodesicState.from_heading(barbell, 0.3, 0.0, 1.0)
    traj = geodesic_flow(barbell, state, 10.0)
    assert clairaut_drift(traj) <= 1e-8
    assert float(np.max(traj.speed_defect)) <= 1e-8


def test_meridian_passes_through_both_poles(baseline):
    traj = geodesic_flow(baseline, GeodesicState(0.0, 0.3, 1.0, 0.0), 2 * math.pi)
    assert traj.meridian
    assert traj.final.t == pytest.approx(0.0, abs=1e-12)
    assert traj.final.theta == pytest.approx(0.3 + 2 * math.pi)
    assert np.all(np.abs(traj.t) <= HALF_PI + 1e-12)
    assert meridian_loop_length(baseline) == pytest.approx(2 * math.pi)


def test_initial_state_must_have_unit_speed(baseline):
    with pytest.raises(PreconditionError):
        geodesic_flow(baseline, GeodesicState(0.0, 0.0, 1.0, 1.0), 1.0)
    with pytest.raises(PreconditionError):
        geodesic_flow(baseline, GeodesicState(0.0, 0.0, 1.0, 0.0), -1.0)


def test_meridian_needs_closed_profile():
    cylinder = sample_profile(CylinderShape(), 512)
    with pytest.raises(PreconditionError):
        geodesic_flow(cylinder, GeodesicState(1.0, 0.0, 1.0, 0.0), 10.0)


def test_fixed_step_order(baseline):
    state = GeodesicState.from_heading(baseline, 0.4, 0.0, 1.1)
    check = drift_order_check(baseline, state)
    assert check.passed
    assert check.coarse_drift > check.fine_drift


def test_round_parallels(baseline):
    found = geodesic_parallels(baseline)
    assert not found.degenerate
    assert len(found.parallels) == 1
    assert found.parallels[0].t == pytest.approx(0.0, abs=1e-10)
    assert found.parallels[0].length == pytest.approx(2 * math.pi)


def test_barbell_parallels(barbell):
    found = geodesic_parallels(barbell)
    ts = [p.t for p in found.parallels]
    assert len(ts) == 3
    assert ts[0] == pytest.approx(0.0, abs=1e-9)
    assert ts[1] == pytest.approx(HALF_PI, abs=barbell.spacing)
    assert ts[2] == pytest.approx(math.pi, abs=1e-9)
    assert found.parallels[0].kind == "crossing"
    assert found.parallels[1].kind in ("crossing", "flat")


def test_cylinder_parallels_are_degenerate():
    found = geodesic_parallels(sample_profile(CylinderShape(), 512))
    assert found.degenerate
    assert found.parallels == []


def test_shortest_closed_geodesic(baseline, barbell):
    round_best = shortest_closed_geodesic(baseline)
    assert round_best.length == pytest.approx(2 * math.pi, abs=1e-9)
    assert round_best.classification == "parallel"
    best = shortest_closed_geodesic(barbell)
    waist = float(barbell.derivatives(HALF_PI, 0)[0])
    assert best.classification == "parallel"
    assert best.length == pytest.approx(2 * math.pi * waist, abs=1e-9)
    assert best.length < 2 * math.pi - 0.5


def test_shortest_closed_geodesic_needs_closed_profile():
    with pytest.raises(PreconditionError):
        shortest_closed_geodesic(sample_profile(CylinderShape(), 512))


def test_waist_closes_by_ode(barbell):
    waist = float(barbell.derivatives(HALF_PI, 0)[0])
    assert parallel_closure_length(barbell, HALF_PI) == pytest.approx(2 * math.pi * waist, abs=1e-6)


def test_round_conjugate_time_is_pi(baseline):
    for state in random_round_states(np.random.default_rng(7), 5):
        traj = geodesic_flow(baseline, state, math.pi + 0.5)
        assert first_conjugate_time(baseline, traj) == pytest.approx(math.pi, abs=1e-6)


def test_meridian_conjugate_time_is_pi(baseline):
    traj = geodesic_flow(baseline, GeodesicState(-0.5, 0.0, 1.0, 0.0), 4.0)
    assert first_conjugate_time(baseline, traj) == pytest.approx(math.pi, abs=1e-6)


def test_flat_waist_has_no_conjugate_point(barbell):
    waist = float(barbell.derivatives(HALF_PI, 0)[0])
    traj = geodesic_flow(barbell, GeodesicState(HALF_PI, 0.0, 0.0, 1.0 / waist), 2 * math.pi)
    solution = jacobi_field(barbell, traj)
    assert solution.first_zero is None
    assert solution.inconclusive_beyond == pytest.approx(2 * math.pi)
    assert np.all(solution.y[1:] > 0.0)


def test_random_round_states_are_unit_speed():
    for state in random_round_states(np.random.default_rng(0), 20):
        assert abs(state.t) < 1.2
        assert state.speed_defect(math.cos(state.t)) <= 1e-14
        assert not state.meridian


def test_tabulated_profile_round_trip(tmp_path, baseline):
    loaded = load_profile_table(export_profile(baseline, tmp_path / "p.csv"))
    assert loaded.closed
    t = np.array([-1.0, 0.0, 0.7])
    assert np.allclose(loaded.derivatives(t, 1)[0], np.cos(t), atol=1e-8)
    assert shortest_closed_geodesic(loaded).length == pytest.approx(2 * math.pi, abs=1e-6)


def test_exports(tmp_path, baseline):
    state = GeodesicState.from_heading(baseline, 0.2, 0.0, 0.9)
    traj = geodesic_flow(baseline, state, 4.0)
    rows = export_trajectory(traj, tmp_path / "traj.csv").read_text(encoding="utf-8").splitlines()
    assert rows[0] == "s,t,theta,dt_ds,dtheta_ds,clairaut"
    assert len(rows) == traj.s.size + 1
    rows = export_jacobi(jacobi_field(baseline, traj), tmp_path / "jac.csv").read_text(encoding="utf-8").splitlines()
    assert rows[0] == "s,y,yp"


def test_flat_cylinder_has_no_conjugate_point():
    cylinder = sample_profile(CylinderShape(radius=0.7, length=3.0), 512)
    traj = geodesic_flow(cylinder, GeodesicState.from_heading(cylinder, 1.0, 0.0, 0.9), 2.0)
    assert traj.t.max() < cylinder.upper
    assert first_conjugate_time(cylinder, traj) is None
