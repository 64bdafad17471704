"""Compiled interior stencil (hot path)."""

from numba import njit


@njit(cache=True)
def step_interior(u_prev, u_curr, u_next, cfac):
    nx, ny = u_curr.shape
    for j in range(1, nx - 1):
        for l in range(1, ny - 1):
            u_next[j, l] = (2.0 * u_curr[j, l] - u_prev[j, l]
                            + cfac[j, l] * (u_curr[j + 1, l] + u_curr[j - 1, l]
                                            + u_curr[j, l + 1] + u_curr[j, l - 1]
                                            - 4.0 * u_curr[j, l]))
