"""The planar criss-cross orbit: two bodies waltz, a third circles retrograde.

Each body moves in the xy plane with x even and y odd in time (odd
harmonics only):

    x_i(t) = sum_k a_ik cos(k t),    y_i(t) = sum_k b_ik sin(k t).

For equal masses a sign-coupling ties body 2 to body 1 and y_3 to x_3,
leaving three free coefficients per harmonic; the crossing-pattern seed
(a_11, b_11, a_31) = (1, 0, -1) flows straight to the orbit.  Unequal
masses keep every coefficient free, with the same seed minus its
center-of-mass component.

The table here is at physical scale (no normalization); x_1(0) is the
plain sum of body 1's cosine coefficients.
"""

import numpy as np

import actionorbits as ao


def main():
    print("=== equal masses ===")
    model, params = ao.build_crisscross(k_max=35)
    result = ao.run(model, params)
    print(f"outcome = {result.outcome} after {result.iterations} iterations, "
          f"residual = {result.residual:.3e}")

    layout = result.params.layout
    values = result.params.values
    col = {}
    for slot, v in zip(layout.slots, values):
        col.setdefault((slot.gen, slot.basis), {})[slot.k] = v
    print("    k       a_1k      b_1k      a_3k")
    for k in range(1, 16, 2):
        a1 = col[(0, "cos")][k]
        b1 = col[(0, "sin")][k]
        a3 = col[(2, "cos")][k]
        print(f"  {k:3d}   {a1:9.5f} {b1:9.5f} {a3:9.5f}")
    x1 = sum(col[(0, "cos")].values())
    print(f"x_1(0) = sum_k a_1k = {x1:.5f}")

    print("\nthe sign couplings alternate with k (body 2 mirrors body 1):")
    for k in (1, 3, 5, 7):
        print(f"  k = {k}: a_2k = {ao.crisscross_coupling_sign(k):+.0f} * b_1k")

    print("\n=== unequal masses 1 : 2 : 3 ===")
    model_u, params_u = ao.build_crisscross((1.0, 2.0, 3.0), k_max=45)
    result_u = ao.run(model_u, params_u)
    print(f"outcome = {result_u.outcome} after {result_u.iterations} "
          f"iterations, residual = {result_u.residual:.3e}")
    t0 = ao.extract_ics(model_u, result_u.params)
    masses = model_u.masses
    com = masses @ t0.positions / masses.sum()
    print(f"initial positions (x, y):")
    for i, p in enumerate(t0.positions):
        print(f"  body {i} (mass {masses[i]:g}): ({p[0]:+.5f}, {p[1]:+.5f})")
    print(f"center of mass stays pinned at {np.round(com, 12)}")


if __name__ == "__main__":
    main()
