"""Acceptance suite: one test and one printed verdict line per criterion.

Each criterion is checked at its stated tolerance against the frozen
values in :mod:`reference_values`; the PASS/FAIL line is printed outside
pytest capture so a full run always shows all eight verdicts.
"""

import math

import numpy as np
import pytest

import actionorbits as ao
import reference_values as ref

TWO_PI = 2.0 * math.pi


def _verdict(capsys, number, name, checks):
    """checks: list of (label, ok, detail) triples."""
    ok = all(c[1] for c in checks)
    with capsys.disabled():
        print(f"\nACCEPTANCE {number} {name}: {'PASS' if ok else 'FAIL'}")
    failed = [f"{label}: {detail}" for label, good, detail in checks if not good]
    assert ok, f"criterion {number} ({name}) failed -> " + "; ".join(failed)


def test_criterion_1_two_body_circular_oracle(capsys):
    # seed the circle 10% off the analytic radius and descend
    a_seed = 1.1 * ref.TWO_BODY_RADIUS
    model, params = ao.build_choreography(
        2, seed={("x", "sin", 1): a_seed, ("y", "cos", 1): a_seed}, k_max=27)
    result = ao.run(model, params)
    a = abs(result.params.values[0])
    checks = [
        ("converged", result.outcome == ao.CONVERGED, result.outcome),
        ("radius", abs(a - ref.TWO_BODY_RADIUS) <= 1e-4,
         f"a_1={a:.6f} vs {ref.TWO_BODY_RADIUS:.6f}"),
        ("residual", result.residual is not None and result.residual <= 1e-8,
         f"residual={result.residual}"),
    ]
    _verdict(capsys, 1, "two-body circular oracle", checks)


def _normalized_cubic(result):
    values = result.params.values
    return values / values[0], result.params.layout.slot_k


def test_criterion_2_cubic_m1_table(capsys, cubic1):
    model, result = cubic1
    norm, ks = _normalized_cubic(result)
    table = ref.CUBIC_TABLES[1]
    checks = [("converged", result.outcome == ao.CONVERGED, result.outcome)]
    for k, expected in table.items():
        got = float(norm[list(ks).index(k)])
        checks.append((f"a_{k}", abs(got - expected) <= ref.CUBIC_TABLE_TOL,
                       f"{got:.5f} vs {expected:.5f}"))
    checks.append(("residual", result.residual <= 1e-5,
                   f"{result.residual:.3e}"))
    _verdict(capsys, 2, "cubic m=1 normalized table", checks)


def test_criterion_3_initial_state_cross_check(capsys, cubic1):
    model, result = cubic1
    state = ao.extract_ics(model, result.params)
    p_ref = np.array(ref.EQ_STATE_POSITION)
    v_ref = np.array(ref.EQ_STATE_VELOCITY)
    best = math.inf
    for transform in ao.all_signed_permutations():
        for i in range(model.n_bodies):
            dp = np.abs(transform.apply(state.positions[i]) - p_ref).max()
            dv = np.abs(transform.apply(state.velocities[i]) - v_ref).max()
            best = min(best, max(dp, dv))
    # independent consistency: recover the physical scale from the
    # reference x-velocity and the normalized slope f'(0) = sum k a_k,
    # then predict |y(0)| = scale * |f_norm(2*pi/3)|
    norm, ks = _normalized_cubic(result)
    slope = float(np.sum(ks * norm))
    scale = abs(v_ref[0]) / slope
    f_norm = float(np.sum(norm * np.sin(ks * TWO_PI / 3.0)))
    derived_y0 = abs(scale * f_norm)
    checks = [
        ("state match", best <= ref.EQ_STATE_TOL,
         f"best transform error {best:.2e}"),
        ("derived |y(0)|", abs(derived_y0 - abs(p_ref[1])) <= 1e-4,
         f"{derived_y0:.5f} vs {abs(p_ref[1]):.5f}"),
    ]
    _verdict(capsys, 3, "initial-state cross-check", checks)


def test_criterion_4_conservation_suite(capsys, cubic1, cubic3):
    checks = []
    grid = ao.QuadratureGrid(64)
    for label, (model, result) in (("m=1", cubic1), ("m=3", cubic3)):
        _, series = ao.observables_series(model, result.params, grid)
        j_max = max(float(np.abs(o.J).max()) for o in series)
        checks.append((f"J=0 ({label})", j_max <= 1e-10, f"|J|={j_max:.2e}"))
    model3, result3 = cubic3
    _, series3 = ao.observables_series(model3, result3.params, grid)
    q_max = max(float(np.abs(o.Q).max()) for o in series3)
    spread = 0.0
    for o in series3:
        eigs = np.linalg.eigvalsh(o.I)
        spread = max(spread, float(np.ptp(eigs) / np.mean(eigs)))
    inertia = np.array([np.trace(o.I) / 2.0 for o in series3])
    variation = float(np.ptp(inertia) / np.mean(inertia))
    checks += [
        ("Q=0 (m=3)", q_max <= 1e-8, f"|Q|={q_max:.2e}"),
        ("I isotropic (m=3)", spread <= 1e-8, f"eig spread {spread:.2e}"),
        ("I varies (m=3)", variation >= 1e-3, f"variation {variation:.2e}"),
    ]
    _verdict(capsys, 4, "conservation and symmetry suite", checks)


def test_criterion_5_cubic_m5_m7_tables(capsys, cubic3, cubic5, cubic7):
    checks = []
    a3 = {}
    for m, fixture in ((3, cubic3), (5, cubic5), (7, cubic7)):
        model, result = fixture
        norm, ks = _normalized_cubic(result)
        k_list = list(ks)
        a3[m] = float(norm[k_list.index(3)])
        if m == 3:
            continue  # m=3 values already checked via criterion 4 fixtures
        for k, expected in ref.CUBIC_TABLES[m].items():
            got = float(norm[k_list.index(k)])
            checks.append((f"m={m} a_{k}",
                           abs(got - expected) <= ref.CUBIC_TABLE_TOL,
                           f"{got:.5f} vs {expected:.5f}"))
    monotone = a3[3] < a3[5] < a3[7] < ref.A3_BAND
    checks.append(("a_3 monotone toward band", monotone,
                   f"{a3[3]:.5f} < {a3[5]:.5f} < {a3[7]:.5f} < {ref.A3_BAND}"))
    _verdict(capsys, 5, "cubic m=5,7 tables and a_3 trend", checks)


def test_criterion_6_crisscross_table(capsys, crisscross, crisscross123):
    model, result = crisscross
    layout = result.params.layout
    index = {(s.gen, s.channel, s.basis, s.k): i
             for i, s in enumerate(layout.slots)}
    values = result.params.values
    checks = [("converged", result.outcome == ao.CONVERGED, result.outcome)]
    for k, (a1, b1, a3) in ref.CRISSCROSS_TABLE.items():
        for label, key, expected in (
                (f"a_1,{k}", (0, 0, "cos", k), a1),
                (f"b_1,{k}", (0, 1, "sin", k), b1),
                (f"a_3,{k}", (2, 0, "cos", k), a3)):
            got = float(values[index[key]])
            checks.append((label,
                           abs(got - expected) <= ref.CRISSCROSS_TABLE_TOL,
                           f"{got:.5f} vs {expected:.5f}"))
    x1 = sum(float(values[i]) for (g, c, b, _k), i in index.items()
             if (g, c, b) == (0, 0, "cos"))
    checks.append(("sum a_1k", abs(x1 - ref.CRISSCROSS_X1_SUM)
                   <= ref.CRISSCROSS_X1_TOL,
                   f"{x1:.5f} vs {ref.CRISSCROSS_X1_SUM}"))
    model123, result123 = crisscross123
    checks.append(("1:2:3 converges", result123.outcome == ao.CONVERGED,
                   result123.outcome))
    checks.append(("1:2:3 no collision", result123.collision_pair is None,
                   str(result123.collision_pair)))
    _verdict(capsys, 6, "criss-cross table and unequal masses", checks)


def test_criterion_7_stability_experiments(capsys, crisscross, cubic1):
    model, result = crisscross
    checks = []
    for label, (dx, dz) in (("crisscross dx=0.001", (0.001, 0.0)),
                            ("crisscross dx=0.005", (0.005, 0.0)),
                            ("crisscross dz=0.005", (0.0, 0.005))):
        dev = np.zeros((model.n_bodies, 3))
        dev[0] = (dx, 0.0, dz)
        rep = ao.perturb_and_track(model, result.params, dev, n_periods=40.0)
        checks.append((label, rep.verdict == ao.BOUNDED,
                       f"max_dev={rep.max_deviation:.3e} "
                       f"envelope={rep.envelope:.1e} verdict={rep.verdict}"))
    cubic_model, cubic_result = cubic1
    dev = np.zeros((cubic_model.n_bodies, 3))
    dev[0, 0] = 0.001
    rep = ao.perturb_and_track(cubic_model, cubic_result.params, dev,
                               n_periods=10.0)
    exited_fast = rep.verdict == ao.EXITED and rep.exit_time is not None \
        and rep.exit_time <= 10.0 * TWO_PI
    checks.append(("cubic m=1 dx=0.001 exits", exited_fast,
                   f"verdict={rep.verdict} exit_time={rep.exit_time}"))
    _verdict(capsys, 7, "perturbation stability experiments", checks)


def test_criterion_8_property_suite(capsys, circle):
    checks = []

    # analytic vs finite-difference action gradient on 100 random
    # reduced-coefficient configurations across all families
    builders = [lambda: ao.build_cubic_family(1, k_max=5),
                lambda: ao.build_crisscross(k_max=5),
                lambda: ao.build_crisscross((1.0, 2.0, 3.0), k_max=5),
                lambda: ao.build_choreography(3, k_max=5)]
    rng = np.random.default_rng(2024)
    worst_rel = 0.0
    accepted = 0
    attempts = 0
    while accepted < 100 and attempts < 1000:
        attempts += 1
        model, params = builders[attempts % len(builders)]()
        probe = params.with_values(params.values
                                   + 0.3 * rng.normal(size=len(params)))
        grid = ao.QuadratureGrid.for_kmax(model.k_max)
        if ao.min_pair_distance(ao.sample_positions(model, probe, grid)) < 0.2:
            continue
        g = ao.gradient(model, probe)
        fd = ao.fd_gradient_oracle(model, probe)
        rel = float(np.max(np.abs(g - fd)) / max(1.0, np.max(np.abs(g))))
        worst_rel = max(worst_rel, rel)
        accepted += 1
    checks.append(("gradient vs FD x100",
                   accepted == 100 and worst_rel <= 1e-6,
                   f"{accepted} configs, worst rel err {worst_rel:.2e}"))

    # RK4 order: halving the step scales the one-period error ~2^4
    model, result = circle
    state = ao.extract_ics(model, result.params)
    errs = []
    for n in (256, 512):
        traj = ao.integrate(state, model.masses, model.potential,
                            dt=TWO_PI / n, horizon=TWO_PI, record_stride=n)
        errs.append(float(np.abs(traj.positions[-1] - state.positions).max()))
    ratio = errs[0] / errs[1]
    checks.append(("RK4 order ratio", 12.0 <= ratio <= 20.0,
                   f"ratio={ratio:.2f}"))

    # energy drift over one period at the default integration step
    traj = ao.integrate(state, model.masses, model.potential,
                        dt=ao.DEFAULT_DT, horizon=TWO_PI, record_stride=100)
    drift = float(np.ptp(traj.energy))
    checks.append(("energy drift/period", drift <= 1e-9, f"{drift:.2e}"))

    # zig-zag instability: present above the naive step bound, absent below
    n_t = 64
    t = np.arange(n_t) * TWO_PI / n_t
    base = np.stack([np.cos(t), np.sin(t), np.zeros_like(t)], axis=-1)
    paths = np.stack([base, -base])
    signs = np.where(np.arange(n_t) % 2 == 0, 1.0, -1.0)
    paths[0, :, 0] += 1e-6 * signs
    bound = ao.naive_stability_bound(n_t, 1.0)
    _, below = ao.naive_time_descent(paths, np.ones(2), ao.PotentialSpec(),
                                     0.9 * bound, iters=200)
    _, above = ao.naive_time_descent(paths, np.ones(2), ao.PotentialSpec(),
                                     1.1 * bound, iters=200)
    checks.append(("zig-zag below bound decays", not below.growing,
                   f"growth={below.growth_factor:.2e}"))
    checks.append(("zig-zag above bound grows", above.growth_factor > 1e3,
                   f"growth={above.growth_factor:.2e}"))

    # symmetry preserved at every descent iteration
    model_cc, params_cc = ao.build_crisscross(k_max=9)
    worst_sym = 0.0

    def watch(iteration, current, S, grad_norm):
        nonlocal worst_sym
        report = ao.verify_symmetry(model_cc, current, tol=1e-12)
        worst_sym = max(worst_sym, report.max_error)

    ao.run(model_cc, params_cc, stop=ao.StopRule(max_iters=30), callback=watch)
    checks.append(("symmetry per iteration", worst_sym <= 1e-12,
                   f"worst={worst_sym:.2e}"))

    _verdict(capsys, 8, "always-on property suite", checks)
