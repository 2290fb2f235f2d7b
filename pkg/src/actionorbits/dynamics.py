"""Forces, energies, conserved quantities, and the equations-of-motion residual.

All pair interactions follow the homogeneous law in :mod:`.potential`.
Positions may be a single configuration of shape (n, 3) or a batch of
shape (n, T, 3); forces and energies are evaluated vectorized over the
batch axis with a deterministic reduction order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CollisionError
from .potential import PotentialSpec
from .quadrature import QuadratureGrid
from .symmetry import OrbitModel, ReducedParams, sample_positions

COLLISION_THRESHOLD = 1e-8


def _pair_terms(spec: PotentialSpec, masses: np.ndarray, x: np.ndarray,
                times, collision_threshold: float, context: str):
    """Shared pairwise machinery: returns (i_idx, j_idx, d, r_soft, coupling).

    ``x`` has shape (n, T, 3).  Raises CollisionError when any true
    separation drops below the threshold.
    """
    n = x.shape[0]
    i_idx, j_idx = np.triu_indices(n, 1)
    d = x[i_idx] - x[j_idx]                       # (P, T, 3)
    r2 = np.einsum("ptc,ptc->pt", d, d)
    r = np.sqrt(r2)
    if collision_threshold > 0.0 and r.size and r.min() < collision_threshold:
        p, jt = np.unravel_index(np.argmin(r), r.shape)
        t = None if times is None else float(np.asarray(times).ravel()[jt])
        raise CollisionError((i_idx[p], j_idx[p]), t=t, distance=r[p, jt],
                             context=context)
    if spec.softening > 0.0:
        r = np.sqrt(r2 + spec.softening ** 2)
    coupling = np.array([spec.pair_coupling(masses[i], masses[j])
                         for i, j in zip(i_idx, j_idx)])
    return i_idx, j_idx, d, r, coupling


def _batched(positions: np.ndarray) -> tuple[np.ndarray, bool]:
    x = np.asarray(positions, dtype=float)
    if x.ndim == 2:
        return x[:, None, :], True
    if x.ndim == 3:
        return x, False
    raise ValueError(f"positions must have shape (n, 3) or (n, T, 3), got {x.shape}")


def potential_energy(spec: PotentialSpec, masses, positions, times=None,
                     collision_threshold: float = COLLISION_THRESHOLD,
                     context: str = "") -> np.ndarray | float:
    """Total pair potential; scalar for a single configuration, else (T,)."""
    x, single = _batched(positions)
    masses = np.asarray(masses, dtype=float)
    if x.shape[0] < 2:
        return 0.0 if single else np.zeros(x.shape[1])
    _, _, _, r, coupling = _pair_terms(spec, masses, x, times,
                                       collision_threshold, context)
    v = coupling @ (r ** spec.alpha)
    return float(v[0]) if single else v


def forces(spec: PotentialSpec, masses, positions, times=None,
           collision_threshold: float = COLLISION_THRESHOLD,
           context: str = "") -> tuple[np.ndarray, np.ndarray | float]:
    """Pairwise forces and total potential energy.

    Returns (F, V) with F matching the shape of ``positions``.  Newton's
    third law holds to machine precision because each pair contributes the
    same term with opposite signs.
    """
    x, single = _batched(positions)
    masses = np.asarray(masses, dtype=float)
    n, T = x.shape[0], x.shape[1]
    if n < 2:
        F = np.zeros_like(x)
        return (F[:, 0, :], 0.0) if single else (F, np.zeros(T))
    i_idx, j_idx, d, r, coupling = _pair_terms(spec, masses, x, times,
                                               collision_threshold, context)
    v = coupling @ (r ** spec.alpha)
    # F_i = -dV/dx_i = -c * alpha * r**(alpha-2) * (x_i - x_j) per pair
    mag = (-spec.alpha) * coupling[:, None] * r ** (spec.alpha - 2.0)
    pair_f = mag[:, :, None] * d                  # force on i from j, (P, T, 3)
    incidence = np.zeros((n, i_idx.size))
    incidence[i_idx, np.arange(i_idx.size)] = 1.0
    incidence[j_idx, np.arange(j_idx.size)] = -1.0
    F = np.tensordot(incidence, pair_f, axes=(1, 0))
    return (F[:, 0, :], float(v[0])) if single else (F, v)


def min_pair_distance(positions) -> float:
    """Smallest body separation over a configuration or batch."""
    x, _ = _batched(positions)
    if x.shape[0] < 2:
        return np.inf
    i_idx, j_idx = np.triu_indices(x.shape[0], 1)
    d = x[i_idx] - x[j_idx]
    return float(np.sqrt(np.einsum("ptc,ptc->pt", d, d).min()))


@dataclass(frozen=True)
class Observables:
    """Mechanical invariants of one configuration.

    I is the standard inertia tensor sum m (|x|^2 1 - x x^T); Q is the
    traceless quadrupole sum m (3 x x^T - |x|^2 1).  A body exactly at the
    origin contributes zero to both.
    """

    E: float
    kinetic: float
    potential: float
    J: np.ndarray          # angular momentum (3,)
    P: np.ndarray          # linear momentum (3,)
    I: np.ndarray          # inertia tensor (3, 3)
    Q: np.ndarray          # quadrupole tensor (3, 3)
    com: np.ndarray        # center of mass (3,)


def observables(spec: PotentialSpec, masses, positions, velocities) -> Observables:
    """Compute E, J, P, I, Q, and the center of mass for one configuration."""
    x = np.asarray(positions, dtype=float)
    v = np.asarray(velocities, dtype=float)
    m = np.asarray(masses, dtype=float)
    if x.ndim != 2 or x.shape != v.shape:
        raise ValueError("observables expects matching (n, 3) positions/velocities")
    kin = 0.5 * float(m @ np.einsum("ic,ic->i", v, v))
    pot = potential_energy(spec, m, x, collision_threshold=0.0)
    J = (m[:, None] * np.cross(x, v)).sum(axis=0)
    P = (m[:, None] * v).sum(axis=0)
    xxt = np.einsum("i,ic,id->cd", m, x, x)
    r2 = float(np.einsum("i,ic,ic->", m, x, x))
    I = r2 * np.eye(3) - xxt
    Q = 3.0 * xxt - r2 * np.eye(3)
    com = (m[:, None] * x).sum(axis=0) / m.sum()
    return Observables(E=kin + float(pot), kinetic=kin, potential=float(pot),
                       J=J, P=P, I=I, Q=Q, com=com)


def observables_series(model: OrbitModel, params: ReducedParams, times):
    """Observables along sampled times of a model trajectory."""
    t = times.nodes if isinstance(times, QuadratureGrid) else np.atleast_1d(
        np.asarray(times, dtype=float))
    pos = sample_positions(model, params, t)
    vel = sample_positions(model, params, t, deriv=1)
    return t, [observables(model.potential, model.masses, pos[:, j], vel[:, j])
               for j in range(t.size)]


@dataclass(frozen=True)
class ResidualReport:
    """How far sampled trajectories are from solving m x'' = F."""

    max_violation: float
    spectrum: np.ndarray       # per-harmonic amplitude of the violation
    worst_body: int
    worst_time: float


def residual(model: OrbitModel, params: ReducedParams,
             grid: QuadratureGrid | None = None,
             collision_threshold: float = COLLISION_THRESHOLD) -> ResidualReport:
    """Equations-of-motion defect max_{i,t} |m_i x_i''(t) - F_i(t)|.

    The spectrum entry at harmonic q is the largest one-sided Fourier
    amplitude of the defect over bodies and coordinates, which separates
    truncation-tail error (q > k_max) from genuine non-convergence.
    """
    if grid is None:
        grid = QuadratureGrid.for_kmax(model.k_max)
    grid.require(model.k_max)
    t = grid.nodes
    pos = sample_positions(model, params, t)
    acc = sample_positions(model, params, t, deriv=2)
    F, _ = forces(model.potential, model.masses, pos, times=t,
                  collision_threshold=collision_threshold, context="residual")
    defect = model.masses[:, None, None] * acc - F             # (n, T, 3)
    norms = np.sqrt(np.einsum("itc,itc->it", defect, defect))
    i, j = np.unravel_index(np.argmax(norms), norms.shape)
    spec = np.fft.rfft(defect, axis=1)
    amp = 2.0 * np.abs(spec) / grid.n
    amp[:, 0, :] *= 0.5
    if grid.n % 2 == 0:
        amp[:, -1, :] *= 0.5
    spectrum = amp.max(axis=(0, 2))
    return ResidualReport(
        max_violation=float(norms[i, j]),
        spectrum=spectrum,
        worst_body=int(i),
        worst_time=float(t[j]),
    )
