"""Tests for the fixed-step RK4 checks: return error and perturbation runs."""

import io
import math

import numpy as np
import pytest

import actionorbits as ao
from actionorbits import (
    BOUNDED,
    EXITED,
    CollisionError,
    PhaseState,
    PotentialSpec,
    build_choreography,
    extract_ics,
    integrate,
    perturb_and_track,
    return_error,
    rk4_step,
    write_trajectory,
)

TWO_PI = 2.0 * math.pi


def _circle_state(a=1.0):
    """Two unit masses opposite each other on a radius-a circle, with the
    circular-orbit speed for the 1/r pair potential: v^2 = 1/(4a)."""
    pos = np.array([[a, 0.0, 0.0], [-a, 0.0, 0.0]])
    v = math.sqrt(1.0 / (4.0 * a))
    vel = np.array([[0.0, v, 0.0], [0.0, -v, 0.0]])
    return PhaseState(pos, vel)


class TestPhaseState:
    def test_validation(self):
        with pytest.raises(ValueError):
            PhaseState(np.zeros(3), np.zeros(3))
        with pytest.raises(ValueError):
            PhaseState(np.zeros((2, 3)), np.zeros((3, 3)))
        with pytest.raises(ao.IntegrationError):
            PhaseState(np.full((2, 3), np.nan), np.zeros((2, 3)))

    def test_arrays_are_read_only(self):
        s = _circle_state()
        with pytest.raises(ValueError):
            s.positions[0, 0] = 9.9

    def test_extract_ics_matches_series(self, circle):
        model, result = circle
        state = extract_ics(model, result.params, t=0.7)
        assert np.allclose(state.positions,
                           ao.sample_positions(model, result.params, 0.7))
        assert np.allclose(state.velocities,
                           ao.sample_positions(model, result.params, 0.7,
                                               deriv=1))


class TestRK4:
    def test_fourth_order_convergence(self):
        # halving the step should shrink the one-period error ~16x;
        # allow a wide band because roundoff and error mixing blur it
        state = _circle_state()
        masses = np.ones(2)
        spec = PotentialSpec()
        errs = []
        for n in (256, 512):
            traj = integrate(state, masses, spec, dt=TWO_PI * 2.0 / n,
                             horizon=2.0 * TWO_PI, record_stride=n)
            errs.append(np.abs(traj.positions[-1] - state.positions).max())
        ratio = errs[0] / errs[1]
        assert 12.0 < ratio < 20.0

    def test_energy_and_momentum_conserved(self):
        state = _circle_state(0.8)
        traj = integrate(state, np.ones(2), PotentialSpec(),
                         dt=TWO_PI / 2048, horizon=TWO_PI, record_stride=64)
        assert np.ptp(traj.energy) < 1e-12
        assert np.ptp(traj.angular_momentum[:, 2]) < 1e-12

    def test_single_step_signature(self):
        state = _circle_state()
        pos, vel = rk4_step(PotentialSpec(), np.ones(2), state.positions,
                            state.velocities, 0.0, 1e-3)
        assert pos.shape == (2, 3)
        assert vel.shape == (2, 3)
        assert not np.allclose(pos, state.positions)

    def test_head_on_collision_detected(self):
        pos = np.array([[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0]])
        vel = np.zeros((2, 3))
        with pytest.raises(CollisionError):
            integrate(PhaseState(pos, vel), np.ones(2), PotentialSpec(),
                      dt=1e-3, horizon=TWO_PI, collision_threshold=1e-2)

    def test_integrate_validation(self):
        state = _circle_state()
        with pytest.raises(ValueError):
            integrate(state, np.ones(2), PotentialSpec(), dt=-1e-3)
        with pytest.raises(ValueError):
            integrate(state, np.ones(2), PotentialSpec(), horizon=0.0)


class TestReturnError:
    def test_converged_orbit_closes(self, circle):
        model, result = circle
        err = return_error(model, result.params, dt=TWO_PI * 1e-4)
        assert err < 1e-9

    def test_unchanged_seed_does_not_close(self):
        model, params = build_choreography(2, k_max=9)
        err = return_error(model, params, dt=TWO_PI * 1e-3)
        assert err > 1e-2


class TestPerturbAndTrack:
    def test_zero_perturbation_rejected(self, circle):
        model, result = circle
        with pytest.raises(ValueError):
            perturb_and_track(model, result.params, np.zeros((2, 3)), 1.0)

    def test_tiny_perturbation_stays_bounded(self, circle):
        model, result = circle
        dev = np.zeros((2, 3))
        dev[0, 0] = 1e-6
        rep = perturb_and_track(model, result.params, dev, n_periods=3.0,
                                dt=TWO_PI / 300)
        assert rep.verdict == BOUNDED
        assert rep.exit_time is None
        assert rep.max_deviation <= rep.envelope
        assert rep.envelope == pytest.approx(1e-4)  # 100x the displacement
        assert rep.z_extent == 0.0
        assert rep.section_points.shape[2] == 3
        assert rep.sample_times[-1] == pytest.approx(3.0 * TWO_PI)

    def test_huge_perturbation_exits(self, circle):
        model, result = circle
        dev = np.zeros((2, 3))
        dev[0, 0] = 0.3
        rep = perturb_and_track(model, result.params, dev, n_periods=3.0,
                                envelope=0.05, dt=TWO_PI / 300)
        assert rep.verdict == EXITED
        assert rep.exit_time is not None

    def test_deviation_metric_quotients_phase_and_rotation(self, circle):
        # the deviation metric measures distance to the orbit band, so a
        # configuration on the curve at any phase -- or rigidly rotated
        # about the normal axis, as a precessing perturbation would be --
        # must measure as (nearly) zero
        from actionorbits.integrate import _CurveMetric

        model, result = circle
        metric = _CurveMetric(model, result.params, curve_samples=2048)
        rng = np.random.default_rng(6)
        for t in (0.0, 0.31, 2.17, 5.9):
            pos = ao.sample_positions(model, result.params, t)
            assert metric.distance(pos) < 1e-5
            ang = rng.uniform(0.0, TWO_PI)
            rot = np.array([[math.cos(ang), -math.sin(ang), 0.0],
                            [math.sin(ang), math.cos(ang), 0.0],
                            [0.0, 0.0, 1.0]])
            assert metric.distance(pos @ rot.T) < 1e-5

    def test_deviation_metric_sees_real_displacement(self, circle):
        from actionorbits.integrate import _CurveMetric

        model, result = circle
        metric = _CurveMetric(model, result.params, curve_samples=2048)
        pos = ao.sample_positions(model, result.params, 0.0)
        assert metric.distance(1.3 * pos) > 0.1
        out_of_plane = pos + np.array([0.0, 0.0, 0.2])
        assert metric.distance(out_of_plane) > 0.1


class TestWriteTrajectory:
    def test_round_trip_columns(self):
        state = _circle_state()
        traj = integrate(state, np.ones(2), PotentialSpec(),
                         dt=TWO_PI / 64, horizon=TWO_PI, record_stride=8)
        buf = io.StringIO()
        write_trajectory(traj, buf)
        lines = buf.getvalue().strip().split("\n")
        header = lines[0]
        assert header.startswith("# t ")
        assert "x1" in header and "vz2" in header and header.endswith("Jz")
        data = np.loadtxt(io.StringIO("\n".join(lines[1:])))
        # t + 6 columns per body + E + 3 angular momentum components
        assert data.shape[1] == 1 + 6 * 2 + 4
        assert np.allclose(data[:, 0], traj.times)
        assert np.allclose(data[0, 1:4], traj.positions[0, 0])
        assert np.allclose(data[:, -4], traj.energy)
