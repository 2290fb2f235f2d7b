"""Tests for the action functional and its analytic gradient."""

import math

import numpy as np
import pytest

import actionorbits as ao
from actionorbits import (
    EvalKernel,
    PotentialSpec,
    QuadratureGrid,
    action,
    action_with_gradient,
    build_choreography,
    build_crisscross,
    build_cubic_family,
    fd_gradient_oracle,
    full_gradient,
    gradient,
    sample_positions,
)

TWO_PI = 2.0 * math.pi


def _two_body_circle(a=1.0, k_max=9):
    """Two unit masses on a radius-a circle: S(a) = 2 pi a^2 + pi / a."""
    return build_choreography(2, seed={("x", "sin", 1): a, ("y", "cos", 1): a},
                              k_max=k_max)


class TestActionValues:
    @pytest.mark.parametrize("a", [0.5, 0.63, 1.0, 1.3])
    def test_two_body_circle_closed_form(self, a):
        # kinetic: 2 * (1/2) * a^2 over a period = 2 pi a^2; the pair
        # distance is the constant 2a sin(pi/2)... i.e. separation is
        # constant |x1 - x2| = 2a sin(pi * 1/2) = 2a; V = -1/(2a) always,
        # so -int V dt = pi / a.
        model, params = _two_body_circle(a)
        rep = action(model, params)
        assert rep.kinetic == pytest.approx(TWO_PI * a * a, rel=1e-12)
        assert rep.potential == pytest.approx(-math.pi / a, rel=1e-12)
        assert rep.S == pytest.approx(TWO_PI * a * a + math.pi / a, rel=1e-12)

    def test_report_decomposition(self):
        model, params = _two_body_circle(0.8)
        rep = action(model, params)
        assert rep.S == pytest.approx(rep.kinetic - rep.potential)
        assert rep.gradient is None
        assert rep.grad_norm is None

    def test_kinetic_only_action(self):
        model, params = _two_body_circle(1.0)
        free = ao.OrbitModel(
            generators=model.generators,
            bindings=model.bindings,
            potential=PotentialSpec(G=0.0),
            family=model.family,
            symmetries=model.symmetries,
        )
        rep = action(free, params)
        assert rep.potential == 0.0
        assert rep.S == pytest.approx(TWO_PI)

    def test_minimum_matches_scaling_prediction(self, circle):
        # S(a) = 2 pi a^2 + pi/a is minimized at a = 2**(-2/3)
        model, result = circle
        a_min = 2.0 ** (-2.0 / 3.0)
        s_min = TWO_PI * a_min**2 + math.pi / a_min
        rep = action(model, result.params)
        assert rep.S == pytest.approx(s_min, abs=1e-9)


class TestGradient:
    def test_circle_gradient_hand_value(self):
        # dS/da at a = 1 along either k=1 slot: d(2 pi a^2)/da = 4 pi a
        # splits evenly between the x-sine and y-cosine slots (2 pi each),
        # and d(pi/a)/da = -pi/a^2 splits as -pi/2 each: total 3 pi / 2.
        model, params = _two_body_circle(1.0)
        g = gradient(model, params)
        k1_slots = [i for i, s in enumerate(params.layout.slots) if s.k == 1]
        for i in k1_slots:
            assert g[i] == pytest.approx(1.5 * math.pi, rel=1e-12)

    def test_kinetic_only_gradient_is_exactly_diagonal(self):
        model, params = build_crisscross((1.0, 2.0, 3.0), k_max=9)
        free = ao.OrbitModel(
            generators=model.generators,
            bindings=model.bindings,
            potential=PotentialSpec(G=0.0),
            family=model.family,
            symmetries=model.symmetries,
        )
        rng = np.random.default_rng(8)
        params = params.with_values(rng.normal(size=len(params)))
        g = gradient(free, params)
        layout = params.layout
        expected = math.pi * layout.slot_k**2 * layout.kinetic_mass * params.values
        assert np.allclose(g, expected, rtol=1e-12, atol=1e-12)

    @pytest.mark.parametrize("builder", [
        lambda: build_cubic_family(1, k_max=9),
        lambda: build_crisscross(k_max=9),
        lambda: build_crisscross((1.0, 2.0, 3.0), k_max=9),
        lambda: build_choreography(3, k_max=9),
    ])
    def test_matches_finite_differences(self, builder):
        model, params = builder()
        rng = np.random.default_rng(17)
        grid = QuadratureGrid.for_kmax(model.k_max)
        checked = 0
        for trial in range(8):
            noise = 0.2 * rng.normal(size=len(params))
            probe = params.with_values(params.values + noise)
            pos = sample_positions(model, probe, grid)
            if ao.min_pair_distance(pos) < 0.2:
                continue  # FD truncation error blows up near collisions
            g = gradient(model, probe)
            fd = fd_gradient_oracle(model, probe)
            assert np.max(np.abs(g - fd)) < 1e-6
            checked += 1
        assert checked >= 3

    def test_fd_oracle_rejects_bad_step(self):
        model, params = _two_body_circle()
        with pytest.raises(ValueError):
            fd_gradient_oracle(model, params, h=0.0)
        with pytest.raises(ValueError):
            fd_gradient_oracle(model, params, h=-1e-6)

    def test_gradient_vanishes_at_the_minimum(self, circle):
        model, result = circle
        g = gradient(model, result.params)
        assert np.max(np.abs(g)) < 1e-9


class TestEvalKernel:
    def test_kernel_matches_direct_sampling(self):
        model, params = build_crisscross(k_max=9)
        rng = np.random.default_rng(23)
        params = params.with_values(rng.normal(size=len(params)))
        kernel = EvalKernel(model, params)
        t = kernel.grid.nodes
        assert np.allclose(kernel.positions(params.values),
                           sample_positions(model, params, t))
        assert np.allclose(kernel.velocities(params.values),
                           sample_positions(model, params, t, deriv=1))
        assert np.allclose(kernel.accelerations(params.values),
                           sample_positions(model, params, t, deriv=2))

    def test_kernel_reuse_gives_same_gradient(self):
        model, params = _two_body_circle(0.9)
        kernel = EvalKernel(model, params)
        rep_direct = action_with_gradient(model, params)
        rep_cached = action_with_gradient(model, params, kernel=kernel)
        assert rep_direct.S == pytest.approx(rep_cached.S)
        assert np.allclose(rep_direct.gradient, rep_cached.gradient)

    def test_coarse_grid_rejected(self):
        model, params = _two_body_circle(1.0, k_max=9)
        with pytest.raises(ValueError):
            EvalKernel(model, params, QuadratureGrid(8))


class TestFullGradient:
    def test_agrees_with_reduced_gradient_via_projection(self):
        for builder in (lambda: build_cubic_family(1, k_max=9),
                        lambda: build_crisscross(k_max=9)):
            model, params = builder()
            rng = np.random.default_rng(5)
            probe = params.with_values(params.values
                                       + 0.1 * rng.normal(size=len(params)))
            tables = full_gradient(model, probe)
            projected = probe.layout.project(tables)
            assert np.allclose(projected, gradient(model, probe),
                               rtol=1e-9, atol=1e-9)

    def test_no_leakage_at_the_reduced_minimum(self, crisscross):
        # symmetric criticality: at a minimum over the symmetric subspace
        # the gradient over the complete coefficient lattice also vanishes
        model, result = crisscross
        tables = full_gradient(model, result.params)
        worst = max(float(np.max(np.abs(t))) for t in tables)
        assert worst < 1e-8

    def test_no_leakage_for_cubic(self, cubic1):
        model, result = cubic1
        tables = full_gradient(model, result.params)
        worst = max(float(np.max(np.abs(t))) for t in tables)
        assert worst < 1e-8
