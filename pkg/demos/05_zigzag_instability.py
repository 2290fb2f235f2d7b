"""Why descend in coefficient space: the zig-zag instability, live.

Gradient descent on raw sampled positions x(t_j) uses a three-point
second difference for the acceleration.  That operator's eigenvalue at
the alternating (Nyquist) mode is -4/h^2 with h the sample spacing, so
the explicit update is stable only for dtau < h^2 / (2 m) -- a bound
that collapses quadratically as the time grid is refined.  Just above
it, a sawtooth component doubles every few iterations and shreds the
path; everything below the Nyquist frequency looks fine until it is
far too late.

Descending on Fourier coefficients with per-harmonic steps
dtau_k = delta / (m k^2) removes the problem: each mode contracts at
the same rate and the stability bound no longer depends on the
truncation order at all.
"""

import math

import numpy as np

import actionorbits as ao

TWO_PI = 2.0 * math.pi


def seeded_paths(n_t, wobble):
    t = np.arange(n_t) * TWO_PI / n_t
    base = np.stack([np.cos(t), np.sin(t), np.zeros_like(t)], axis=-1)
    paths = np.stack([base, -base])
    signs = np.where(np.arange(n_t) % 2 == 0, 1.0, -1.0)
    paths[0, :, 0] += wobble * signs
    return paths


def main():
    n_t = 64
    bound = ao.naive_stability_bound(n_t, 1.0)
    print(f"{n_t} samples -> naive stability bound dtau < {bound:.3e}")
    print("seeding a 1e-6 sawtooth on a circular two-body path...\n")

    for margin in (0.5, 0.9, 1.1, 1.5):
        paths = seeded_paths(n_t, 1e-6)
        _, diag = ao.naive_time_descent(paths, np.ones(2), ao.PotentialSpec(),
                                        margin * bound, iters=200)
        trend = "decays" if not diag.growing else "GROWS"
        print(f"  dtau = {margin:4.1f} x bound: Nyquist amplitude {trend} "
              f"by {diag.growth_factor:.2e} over 200 iterations")

    print("\nrefining the grid makes it worse: the bound itself shrinks")
    for n in (64, 128, 256):
        print(f"  {n:4d} samples -> bound {ao.naive_stability_bound(n, 1.0):.3e}")

    print("\nthe preconditioned coefficient-space schedule has no such")
    print("truncation dependence (bound delta < 2/pi from kinetic curvature")
    print("alone; an attractive r^alpha potential tightens it to")
    print("2/((2 - alpha) pi) via the scale mode -- 0.212 for alpha = -1):")
    for k_max in (9, 27, 81):
        b = ao.stability_bound(ao.DescentSchedule.preconditioned(), k_max, 1.0)
        print(f"  k_max = {k_max:3d} -> kinetic bound {b:.4f}")

    print("\nsame descent, run in coefficient space at delta = 0.15:")
    model, params = ao.build_choreography(2, k_max=27)
    result = ao.run(model, params)
    print(f"  outcome = {result.outcome} in {result.iterations} iterations, "
          f"residual = {result.residual:.1e}")


if __name__ == "__main__":
    main()
