"""Pure-numpy interior stencil (reference path, always available)."""

import numpy as np


def step_interior(u_prev, u_curr, u_next, cfac):
    # Same association order as the compiled kernel so the two paths agree
    # to the last few ulps.
    lap = (u_curr[2:, 1:-1] + u_curr[:-2, 1:-1]
           + u_curr[1:-1, 2:] + u_curr[1:-1, :-2]
           - 4.0 * u_curr[1:-1, 1:-1])
    np.multiply(cfac[1:-1, 1:-1], lap, out=lap)
    u_next[1:-1, 1:-1] = 2.0 * u_curr[1:-1, 1:-1] - u_prev[1:-1, 1:-1] + lap
