"""Frozen reference values used across the test suite.

Normalized Fourier tables and initial-condition constants for the two
reproduced orbit families, plus hand-derived oracles for the two-body
circular orbit.  All values were fixed before the implementation was
written; tests compare against them at the stated tolerances.
"""

import math

# --- two-body circular orbit (hand-derived force-balance oracle) --------
# Two unit masses on one circle of radius a, period 2*pi: centripetal
# acceleration a must equal G m / (2a)^2, so a^3 = 1/4.
TWO_BODY_RADIUS = 2.0 ** (-2.0 / 3.0)          # 0.629961...
# S(a) = 2*pi*a^2 + pi/a at the minimum
TWO_BODY_ACTION = 6.0 * math.pi * 2.0 ** (-4.0 / 3.0)

# --- cubic family, normalized coefficient tables (a_1 = 1) --------------
CUBIC_TABLE_TOL = 2e-3
CUBIC_TABLES = {
    1: {3: 0.03282, 5: -0.00098, 7: -0.00036, 9: -0.00003},
    3: {3: -0.04629, 5: -0.00472, 7: -0.00269, 9: 0.00056,
        11: 0.00010, 13: 0.00007, 15: -0.00002},
    5: {3: -0.03991, 5: 0.00359, 7: 0.00161, 9: -0.00168, 11: -0.00043,
        13: -0.00028, 15: 0.00012, 17: 0.00001, 19: 0.00001},
    7: {3: -0.03335, 5: 0.00885, 7: 0.00445, 9: -0.00334, 11: -0.00039,
        13: -0.00028, 15: -0.00013, 17: -0.00011, 19: -0.00008,
        21: -0.00005},
}
# large-m asymptote of the normalized a_3 column; a_3(m) for m = 3, 5, 7
# must be monotone increasing toward (but still below) this band
A3_BAND = -0.022

# --- cubic m=1 initial-state cross-check ---------------------------------
# body state at t = 0, defined up to a signed coordinate permutation
EQ_STATE_POSITION = (0.0, -0.69548, 0.69548)
EQ_STATE_VELOCITY = (0.87546, -0.31950, -0.31950)
EQ_STATE_TOL = 1e-4

# --- criss-cross family: coefficients at physical scale ------------------
# columns: a_{1,k} (body-1 x cosines), b_{1,k} (body-1 y sines),
#          a_{3,k} (body-3 x cosines)
CRISSCROSS_TABLE_TOL = 1e-3
CRISSCROSS_TABLE = {
    1: (1.09764, 0.10896, -0.98868),
    3: (-0.02809, 0.03251, -0.00442),
    5: (0.00724, -0.00376, -0.01100),
    7: (-0.00121, 0.00131, -0.00010),
    9: (0.00040, -0.00029, -0.00069),
    11: (-0.00010, 0.00010, -0.00001),
    13: (0.00003, -0.00003, -0.00006),
    15: (-0.00001, 0.00001, 0.00000),
}
# x_1(0) = sum_k a_{1,k}
CRISSCROSS_X1_SUM = 1.07590
CRISSCROSS_X1_TOL = 1e-4
