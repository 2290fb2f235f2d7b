"""Direct integration checks: does the Fourier orbit solve the ODE?

A classical fixed-step fourth-order Runge-Kutta integrator advances the
phase state (positions, velocities) under the same pair forces the action
uses.  It serves two purposes: measuring how well a converged orbit closes
after one period (return error), and tracking deliberately perturbed
initial conditions over many periods to probe stability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import COLLISION_THRESHOLD, forces, observables
from .errors import CollisionError, IntegrationError
from .potential import PotentialSpec
from .symmetry import OrbitModel, ReducedParams, sample_positions

TWO_PI = 2.0 * math.pi
DEFAULT_DT = TWO_PI * 1e-4


@dataclass(frozen=True)
class PhaseState:
    """Instantaneous positions and velocities of all bodies."""

    positions: np.ndarray    # (n, 3)
    velocities: np.ndarray   # (n, 3)
    t: float = 0.0

    def __post_init__(self):
        pos = np.array(self.positions, dtype=float)
        vel = np.array(self.velocities, dtype=float)
        if pos.ndim != 2 or pos.shape[1] != 3 or pos.shape != vel.shape:
            raise ValueError("phase state needs matching (n, 3) arrays")
        if not (np.all(np.isfinite(pos)) and np.all(np.isfinite(vel))):
            raise IntegrationError("phase state must be finite")
        pos.setflags(write=False)
        vel.setflags(write=False)
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "velocities", vel)


def extract_ics(model: OrbitModel, params: ReducedParams,
                t: float = 0.0) -> PhaseState:
    """Initial conditions read directly off the Fourier series at time t,
    at the physical (unnormalized) scale."""
    pos = sample_positions(model, params, float(t))
    vel = sample_positions(model, params, float(t), deriv=1)
    return PhaseState(pos, vel, float(t))


def _accelerations(spec: PotentialSpec, masses: np.ndarray, pos: np.ndarray,
                   t: float, collision_threshold: float) -> np.ndarray:
    F, _ = forces(spec, masses, pos, times=t,
                  collision_threshold=collision_threshold, context="integration")
    return F / masses[:, None]


def rk4_step(spec: PotentialSpec, masses: np.ndarray, pos: np.ndarray,
             vel: np.ndarray, t: float, dt: float,
             collision_threshold: float = COLLISION_THRESHOLD
             ) -> tuple[np.ndarray, np.ndarray]:
    """One classical Runge-Kutta step of size dt."""
    a1 = _accelerations(spec, masses, pos, t, collision_threshold)
    p2 = pos + 0.5 * dt * vel
    v2 = vel + 0.5 * dt * a1
    a2 = _accelerations(spec, masses, p2, t + 0.5 * dt, collision_threshold)
    p3 = pos + 0.5 * dt * v2
    v3 = vel + 0.5 * dt * a2
    a3 = _accelerations(spec, masses, p3, t + 0.5 * dt, collision_threshold)
    p4 = pos + dt * v3
    v4 = vel + dt * a3
    a4 = _accelerations(spec, masses, p4, t + dt, collision_threshold)
    new_pos = pos + (dt / 6.0) * (vel + 2.0 * v2 + 2.0 * v3 + v4)
    new_vel = vel + (dt / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
    return new_pos, new_vel


@dataclass(frozen=True)
class Trajectory:
    """Recorded integration samples with energy and angular momentum."""

    times: np.ndarray        # (M,)
    positions: np.ndarray    # (M, n, 3)
    velocities: np.ndarray   # (M, n, 3)
    energy: np.ndarray       # (M,)
    angular_momentum: np.ndarray  # (M, 3)


def integrate(state: PhaseState, masses, spec: PotentialSpec,
              dt: float = DEFAULT_DT, horizon: float = TWO_PI,
              record_stride: int = 1,
              collision_threshold: float = COLLISION_THRESHOLD) -> Trajectory:
    """Advance the state for ``horizon`` time units with fixed steps.

    Records every ``record_stride``-th step (plus the initial and final
    states).  Raises CollisionError if bodies approach below the threshold
    and IntegrationError on a non-finite state.
    """
    if dt <= 0.0 or horizon <= 0.0:
        raise ValueError("dt and horizon must be positive")
    n_steps = max(1, int(round(horizon / dt)))
    masses = np.asarray(masses, dtype=float)
    pos = np.array(state.positions)
    vel = np.array(state.velocities)
    times, positions, velocities, energies, angmom = [], [], [], [], []

    def record(t, p, v):
        obs = observables(spec, masses, p, v)
        times.append(t)
        positions.append(p.copy())
        velocities.append(v.copy())
        energies.append(obs.E)
        angmom.append(obs.J)

    record(state.t, pos, vel)
    for i in range(n_steps):
        t = state.t + i * dt
        pos, vel = rk4_step(spec, masses, pos, vel, t, dt, collision_threshold)
        if not (np.all(np.isfinite(pos)) and np.all(np.isfinite(vel))):
            raise IntegrationError(f"non-finite state at t={t + dt:.6f}")
        if (i + 1) % record_stride == 0 or i == n_steps - 1:
            record(state.t + (i + 1) * dt, pos, vel)
    return Trajectory(
        times=np.array(times),
        positions=np.array(positions),
        velocities=np.array(velocities),
        energy=np.array(energies),
        angular_momentum=np.array(angmom),
    )


def return_error(model: OrbitModel, params: ReducedParams,
                 dt: float = DEFAULT_DT,
                 collision_threshold: float = COLLISION_THRESHOLD) -> float:
    """Max-norm phase-space mismatch after integrating one full period."""
    state = extract_ics(model, params)
    traj = integrate(state, model.masses, model.potential, dt=dt,
                     horizon=TWO_PI, record_stride=max(1, int(round(TWO_PI / dt))),
                     collision_threshold=collision_threshold)
    dp = np.abs(traj.positions[-1] - state.positions).max()
    dv = np.abs(traj.velocities[-1] - state.velocities).max()
    return float(max(dp, dv))


BOUNDED = "bounded"
EXITED = "exited"


@dataclass(frozen=True)
class PerturbationReport:
    """Outcome of tracking perturbed initial conditions for many periods.

    ``verdict`` is 'bounded' when the largest deviation from the reference
    Fourier orbit stayed inside the envelope for the whole horizon, else
    'exited' (including runs cut short by collision or a non-finite state).
    ``section_points`` holds the sampled perturbed positions for plotting;
    ``z_extent`` is the largest |z| reached (out-of-plane growth probe).
    """

    deviation: np.ndarray
    n_periods: float
    envelope: float
    max_deviation: float
    verdict: str
    exit_time: float | None
    sample_times: np.ndarray
    section_points: np.ndarray
    z_extent: float


class _CurveMetric:
    """rms configuration distance to the nearest point of a reference orbit
    curve, minimized over a common reference phase.

    Perturbing a stable orbit typically shifts its period and angular
    momentum a little; the motion then drifts in phase and (for planar
    orbits) slowly precesses while staying on a tight band around the
    curve.  Both are neutral directions, not instabilities, so the metric
    quotients them out: phase by the min over curve samples, precession --
    for planar reference orbits only -- by the optimal rigid rotation about
    the normal axis (closed-form 2D Procrustes).  Any genuine departure
    from the band (escape, collision approach, out-of-plane growth) still
    registers at full size.
    """

    def __init__(self, model: OrbitModel, params: ReducedParams,
                 curve_samples: int):
        phases = np.arange(curve_samples) * (TWO_PI / curve_samples)
        self.curve = sample_positions(model, params, phases).transpose(1, 0, 2)
        self.n = self.curve.shape[1]
        self.planar = bool(np.abs(self.curve[:, :, 2]).max() < 1e-9)
        self.curve_sq = np.einsum("mic,mic->m", self.curve, self.curve)

    def _per_phase(self, pos: np.ndarray) -> np.ndarray:
        if self.planar:
            pos_sq = float(np.einsum("ic,ic->", pos, pos))
            dots = np.einsum("ic,mic->m", pos, self.curve)
            cross = np.einsum("i,mi->m",
                              pos[:, 0], self.curve[:, :, 1]) - \
                    np.einsum("i,mi->m", pos[:, 1], self.curve[:, :, 0])
            along = dots - np.einsum("i,mi->m", pos[:, 2], self.curve[:, :, 2])
            best = np.sqrt(along * along + cross * cross)
            sq = pos_sq + self.curve_sq - 2.0 * best
        else:
            diff = pos[None, :, :] - self.curve
            sq = np.einsum("mic,mic->m", diff, diff)
        return np.sqrt(np.maximum(sq, 0.0) / self.n)

    def distance(self, pos: np.ndarray) -> float:
        per_phase = self._per_phase(pos)
        j = int(np.argmin(per_phase))
        m = per_phase.shape[0]
        # parabolic refinement through the cyclic neighbors
        f0, f1, f2 = per_phase[j - 1], per_phase[j], per_phase[(j + 1) % m]
        denom = f0 - 2.0 * f1 + f2
        if denom > 0.0:
            offset = 0.5 * (f0 - f2) / denom
            refined = f1 - 0.25 * (f0 - f2) * offset
            return float(max(min(f1, refined), 0.0))
        return float(f1)


def perturb_and_track(model: OrbitModel, params: ReducedParams,
                      deviation, n_periods: float,
                      envelope: float | None = None,
                      dt: float = TWO_PI * 1e-3,
                      samples_per_period: int = 50,
                      stop_on_exit: bool = True,
                      collision_threshold: float = COLLISION_THRESHOLD,
                      curve_samples: int = 2048) -> PerturbationReport:
    """Integrate from displaced initial positions and watch the deviation.

    ``deviation`` is an (n, 3) array added to the initial positions.  The
    deviation at each sample time is the distance from the perturbed
    configuration to the unperturbed orbit band (see :class:`_CurveMetric`:
    phase drift and, for planar orbits, slow precession are quotiented out
    as neutral directions).  The default envelope is 100x the largest
    applied displacement.
    """
    dev = np.zeros((model.n_bodies, 3))
    dev += np.asarray(deviation, dtype=float)
    applied = float(np.abs(dev).max())
    if applied == 0.0:
        raise ValueError("perturbation must displace at least one body")
    if envelope is None:
        envelope = 100.0 * applied
    steps_per_period = max(samples_per_period, int(round(TWO_PI / dt)))
    steps_per_period -= steps_per_period % samples_per_period
    dt = TWO_PI / steps_per_period
    stride = steps_per_period // samples_per_period
    n_steps = int(round(n_periods * steps_per_period))

    metric = _CurveMetric(model, params, curve_samples)

    base = extract_ics(model, params)
    pos = base.positions + dev
    vel = np.array(base.velocities)
    masses = model.masses

    sample_times = [0.0]
    sections = [pos.copy()]
    deviations = [metric.distance(pos)]
    exit_time = None
    t = 0.0
    try:
        for i in range(n_steps):
            pos, vel = rk4_step(model.potential, masses, pos, vel, t, dt,
                                collision_threshold)
            t = (i + 1) * dt
            if not (np.all(np.isfinite(pos)) and np.all(np.isfinite(vel))):
                raise IntegrationError(f"non-finite state at t={t:.6f}")
            if (i + 1) % stride == 0:
                deviations.append(metric.distance(pos))
                sample_times.append(t)
                sections.append(pos.copy())
                if deviations[-1] > envelope:
                    exit_time = t
                    if stop_on_exit:
                        break
    except (CollisionError, IntegrationError):
        exit_time = t
    max_dev = float(max(deviations))
    verdict = EXITED if (exit_time is not None or max_dev > envelope) else BOUNDED
    sections_arr = np.array(sections)
    return PerturbationReport(
        deviation=dev,
        n_periods=float(n_periods),
        envelope=float(envelope),
        max_deviation=max_dev,
        verdict=verdict,
        exit_time=exit_time,
        sample_times=np.array(sample_times),
        section_points=sections_arr,
        z_extent=float(np.abs(sections_arr[:, :, 2]).max()),
    )


def write_trajectory(traj: Trajectory, stream) -> None:
    """Write samples as delimited text: t, then x y z vx vy vz per body,
    then E and the angular momentum components."""
    n = traj.positions.shape[1]
    header = ["t"]
    for i in range(1, n + 1):
        header += [f"x{i}", f"y{i}", f"z{i}", f"vx{i}", f"vy{i}", f"vz{i}"]
    header += ["E", "Jx", "Jy", "Jz"]
    stream.write("# " + " ".join(header) + "\n")
    for j, t in enumerate(traj.times):
        row = [t]
        for i in range(n):
            row.extend(traj.positions[j, i])
            row.extend(traj.velocities[j, i])
        row.append(traj.energy[j])
        row.extend(traj.angular_momentum[j])
        stream.write(" ".join(f"{v:.12e}" for v in row) + "\n")
