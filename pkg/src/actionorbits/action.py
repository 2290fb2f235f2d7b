"""Action functional and its gradient over reduced Fourier coefficients.

With the period fixed at 2*pi, the action of a candidate trajectory is

    S = int_0^{2pi} (K - V) dt,   K = sum_i (1/2) m_i |x_i'(t)|^2,

evaluated by uniform periodic quadrature.  Because every body coordinate
is linear in the reduced coefficients, the kinetic contribution to the
gradient is diagonal and exact:

    dS/dc = pi * k^2 * m_eff(c) * c  -  int (dV/dx) . (dx/dc) dt,

where m_eff is the slot's effective kinetic mass (mass-weighted count of
body coordinates the slot feeds; see :func:`..symmetry.compute_kinetic_mass`).
The orthogonality factor pi is kept explicit rather than folded into step
sizes, and the potential term is projected on the grid.  Zeros of this
gradient are exactly the Fourier-projected equations of motion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import COLLISION_THRESHOLD, forces, potential_energy
from .fourier import COS, SIN
from .quadrature import QuadratureGrid
from .symmetry import (OrbitModel, ReducedParams, ScalarGenerator,
                       channel_multiplicity, sample_positions)


def default_grid(model: OrbitModel) -> QuadratureGrid:
    return QuadratureGrid.for_kmax(model.k_max)


def _require_grid(model: OrbitModel, grid: QuadratureGrid | None) -> QuadratureGrid:
    grid = grid or default_grid(model)
    grid.require(model.k_max)
    return grid


class EvalKernel:
    """Cached linear maps from reduced values to sampled kinematics.

    Sampling is linear in the reduced vector, so positions, velocities, and
    accelerations on a fixed grid are matrix products with bases built once
    by sampling each unit slot.  Used by the descent loop; one-shot calls
    can let :func:`action` build a kernel on the fly.
    """

    def __init__(self, model: OrbitModel, params: ReducedParams,
                 grid: QuadratureGrid | None = None):
        self.model = model
        self.layout = params.layout
        self.grid = _require_grid(model, grid)
        n_slots = self.layout.n_slots
        shape = (n_slots, model.n_bodies, self.grid.n, 3)
        self.basis_pos = np.empty(shape)
        self.basis_vel = np.empty(shape)
        self.basis_acc = np.empty(shape)
        for s in range(n_slots):
            unit = np.zeros(n_slots)
            unit[s] = 1.0
            probe = params.with_values(unit)
            self.basis_pos[s] = sample_positions(model, probe, self.grid.nodes, 0)
            self.basis_vel[s] = sample_positions(model, probe, self.grid.nodes, 1)
            self.basis_acc[s] = sample_positions(model, probe, self.grid.nodes, 2)

    def positions(self, values: np.ndarray) -> np.ndarray:
        return np.tensordot(values, self.basis_pos, axes=1)

    def velocities(self, values: np.ndarray) -> np.ndarray:
        return np.tensordot(values, self.basis_vel, axes=1)

    def accelerations(self, values: np.ndarray) -> np.ndarray:
        return np.tensordot(values, self.basis_acc, axes=1)

    def project_forces(self, F: np.ndarray) -> np.ndarray:
        """Quadrature of F . (dx/dc) for every slot."""
        return self.grid.weight * np.einsum("itc,sitc->s", F, self.basis_pos)


@dataclass(frozen=True)
class ActionReport:
    """Action value split into its kinetic and potential integrals."""

    S: float
    kinetic: float
    potential: float
    gradient: np.ndarray | None = None

    @property
    def grad_norm(self) -> float | None:
        if self.gradient is None:
            return None
        return float(np.max(np.abs(self.gradient)))


def action(model: OrbitModel, params: ReducedParams,
           grid: QuadratureGrid | None = None,
           collision_threshold: float = COLLISION_THRESHOLD) -> ActionReport:
    """Evaluate S = int (K - V) dt on the grid."""
    grid = _require_grid(model, grid)
    vel = sample_positions(model, params, grid.nodes, deriv=1)
    pos = sample_positions(model, params, grid.nodes)
    return _report(model, grid, pos, vel, collision_threshold)


def _report(model, grid, pos, vel, collision_threshold) -> ActionReport:
    masses = model.masses
    k_samples = 0.5 * np.einsum("i,itc,itc->t", masses, vel, vel)
    v_samples = potential_energy(model.potential, masses, pos, times=grid.nodes,
                                 collision_threshold=collision_threshold,
                                 context="action")
    if np.isscalar(v_samples):
        v_samples = np.full(grid.n, float(v_samples))
    kin = grid.integrate(k_samples)
    pot = grid.integrate(v_samples)
    return ActionReport(S=float(kin - pot), kinetic=float(kin), potential=float(pot))


def action_with_gradient(model: OrbitModel, params: ReducedParams,
                         grid: QuadratureGrid | None = None,
                         kernel: EvalKernel | None = None,
                         collision_threshold: float = COLLISION_THRESHOLD
                         ) -> ActionReport:
    """Action plus its reduced gradient in one force evaluation."""
    if kernel is None:
        kernel = EvalKernel(model, params, grid)
    grid = kernel.grid
    v = params.values
    pos = kernel.positions(v)
    vel = kernel.velocities(v)
    F, _ = forces(model.potential, model.masses, pos, times=grid.nodes,
                  collision_threshold=collision_threshold, context="gradient")
    base = _report(model, grid, pos, vel, collision_threshold)
    # dS/dc = pi k^2 m_eff c + int F . dx/dc dt  (the potential term carries
    # +F because F = -dV/dx).
    k = kernel.layout.slot_k.astype(float)
    grad = math.pi * k * k * kernel.layout.kinetic_mass * v + kernel.project_forces(F)
    return ActionReport(S=base.S, kinetic=base.kinetic, potential=base.potential,
                        gradient=grad)


def gradient(model: OrbitModel, params: ReducedParams,
             grid: QuadratureGrid | None = None,
             kernel: EvalKernel | None = None) -> np.ndarray:
    """Reduced gradient dS/dc (infinity-norm-ready 1-D array)."""
    return action_with_gradient(model, params, grid, kernel).gradient


def fd_gradient_oracle(model: OrbitModel, params: ReducedParams,
                       grid: QuadratureGrid | None = None,
                       h: float = 1e-6) -> np.ndarray:
    """Central finite differences of the quadrature action, slot by slot.

    An independent check of the analytic gradient; h must be positive.
    """
    if not (h > 0.0 and math.isfinite(h)):
        raise ValueError(f"finite-difference step must be positive, got {h}")
    grid = _require_grid(model, grid)
    base = np.asarray(params.values, dtype=float)
    out = np.empty_like(base)
    for s in range(base.size):
        bump = np.zeros_like(base)
        bump[s] = h
        s_plus = action(model, params.with_values(base + bump), grid).S
        s_minus = action(model, params.with_values(base - bump), grid).S
        out[s] = (s_plus - s_minus) / (2.0 * h)
    return out


def full_gradient(model: OrbitModel, params: ReducedParams,
                  grid: QuadratureGrid | None = None) -> list[np.ndarray]:
    """Gradient over the complete coefficient lattice, one table per generator.

    Covers every (channel, basis, harmonic) up to the model's k_max --
    including coefficients outside the reduced layout -- so tests can verify
    that descent directions never leak out of the symmetric subspace.
    Returns tables shaped (n_channels, 2, k_max+1) with axis 1 = (sin, cos).
    """
    grid = _require_grid(model, grid)
    t = grid.nodes
    k_max = model.k_max
    ks = np.arange(k_max + 1, dtype=float)
    pos = sample_positions(model, params, t)
    F, _ = forces(model.potential, model.masses, pos, times=t,
                  context="full gradient")
    tables = params.layout.expand(params.values)
    out = []
    for g_idx, gen in enumerate(model.generators):
        table = np.zeros((gen.n_channels, 2, k_max + 1))
        # Exact kinetic part: pi * multiplicity * k^2 * coefficient.
        for ch in range(gen.n_channels):
            mult = channel_multiplicity(model, g_idx, ch)
            table[ch] += math.pi * mult * ks * ks * tables[g_idx][ch]
        # Potential part: + int F . dx/dcoeff dt on the grid.
        for i, b in enumerate(model.bindings):
            if b.generator != g_idx:
                continue
            rotated = F[i] @ b.transform.matrix      # (T, 3); column c pairs
            if isinstance(gen, ScalarGenerator):     # with basis at offset c
                for c, off in enumerate(gen.offsets):
                    ang = np.multiply.outer(ks, t + b.phase + off)
                    table[0, 0] += grid.weight * (np.sin(ang) @ rotated[:, c])
                    table[0, 1] += grid.weight * (np.cos(ang) @ rotated[:, c])
            else:
                ang = np.multiply.outer(ks, t + b.phase)
                sin_m, cos_m = np.sin(ang), np.cos(ang)
                for ch in range(3):
                    table[ch, 0] += grid.weight * (sin_m @ rotated[:, ch])
                    table[ch, 1] += grid.weight * (cos_m @ rotated[:, ch])
        table[:, 0, 0] = 0.0   # sine basis has no k=0 member
        out.append(table)
    return out
