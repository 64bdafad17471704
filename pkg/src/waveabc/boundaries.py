"""Absorbing conditions for the vertical boundaries of the waveguide.

Two families are provided.

The Tappert condition is the time-integrated one-way equation for waves
leaving through the boundary.  On the left side (outgoing waves move toward
-x) it reads

    u_x - (1/c) u_t + (1/4)(c_yy - c_y^2/c) I[u] + (1/2) I[(c u_y)_y] = 0,

where I[w] = integral of w(t - s) over s >= 0 and all coefficients are
functions of depth evaluated at the boundary coordinate.  The time integrals
are accumulated one sample per step (cost per step is flat), and the
condition is discretized with Crank-Nicolson centering between the first two
columns and the two newest time levels, leaving a single unknown per row:
the boundary value at the new level.  At constant c it reduces to the
time-integrated second-order Engquist-Majda condition.

The Higdon condition of order J is the product of J one-way transport
factors, prod_j (d/dt + C_j d/dn), discretized with a backward time
difference and an inward space difference and expanded over a
(J+1) x (J+1) stencil of past levels and inward columns.  Each factor
exactly annihilates outgoing plane waves of speed C_j at normal incidence.

Rows decouple in the Higdon update; the Tappert depth-flux term couples
neighbors but is computed from frozen accumulators, so both updates write
the boundary column in one vectorized pass.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, ContractViolation
from .solver import Grid, WaveState

VERTICAL_SIDES = ("left", "right")
BOUNDARY_KINDS = ("hard_wall", "tappert", "higdon")


@dataclass(frozen=True)
class BoundarySpec:
    """Which condition closes one vertical side of the domain."""

    side: str = "left"
    kind: str = "tappert"
    order: int | None = None            # Higdon only
    speeds: tuple[float, ...] | None = None  # Higdon only; None = fill later
    # Tappert only: accumulate mixed-level column pairs and use the expanded
    # (non-conservative) depth flux; kept for comparison with the default
    # conservative form.
    legacy_sums: bool = False

    def __post_init__(self):
        if self.side not in VERTICAL_SIDES:
            raise ConfigError(f"boundary side must be left or right, got {self.side!r}")
        if self.kind not in BOUNDARY_KINDS:
            raise ConfigError(f"unknown boundary kind {self.kind!r}")
        if self.kind == "higdon":
            if self.order is None or self.order < 1:
                raise ConfigError("higdon boundary needs order >= 1")
            if self.speeds is not None:
                if len(self.speeds) != self.order:
                    raise ConfigError(
                        f"higdon needs {self.order} speeds, got {len(self.speeds)}")
                if any(c <= 0.0 for c in self.speeds):
                    raise ConfigError("higdon speeds must be positive")


def _side_geometry(grid: Grid, side: str):
    if side == "left":
        return 0, +1
    if side == "right":
        return grid.nx - 1, -1
    raise ConfigError(f"absorbing boundaries apply to vertical sides only, got {side!r}")


class TappertBoundary:
    """State and update for the Tappert condition on one vertical side.

    Exposes ``coef_a`` = (1/4)(c_yy - c_y^2/c) and ``coef_c`` = c per row at
    the boundary coordinate, plus the running integrals ``acc_a`` (zeroth
    order term) and ``acc_d`` (conservative depth flux).  Accumulators start
    at zero: the field vanishes at the boundary for t <= 0 whenever the
    run's initial data keeps clear of it.
    """

    def __init__(self, grid: Grid, model, side: str = "left",
                 legacy_sums: bool = False):
        self.grid = grid
        self.side = side
        self.legacy_sums = legacy_sums
        self.col0, self.inw = _side_geometry(grid, side)
        xb = grid.boundary_x(side)
        ys = grid.y_coords()
        c, c_y, c_yy = model.sample(xb, ys)
        c = np.asarray(c, dtype=float)
        if not np.isfinite(c).all() or c.min() <= 0.0:
            raise ConfigError("boundary speed must be finite and positive")
        self.coef_c = c
        self.coef_cy = np.asarray(c_y, dtype=float)
        self.coef_a = 0.25 * (np.asarray(c_yy, dtype=float) - self.coef_cy**2 / c)
        # Speeds at the depth midpoints between rows, for the conservative flux.
        self.edge_c = np.asarray(model.speed(xb, ys[:-1] + grid.h / 2.0), dtype=float)
        self.acc_a = np.zeros(grid.ny)
        self.acc_d = np.zeros(grid.ny)
        self.acc_pairs = np.zeros(grid.ny)  # literal mode only
        self._acc_step = 0

    def _flux(self, v: np.ndarray) -> np.ndarray:
        """Conservative (c v_y)_y with mirror ghosts at the channel walls."""
        h2 = self.grid.h ** 2
        d = self.edge_c * (v[1:] - v[:-1])
        out = np.empty_like(v)
        out[1:-1] = (d[1:] - d[:-1]) / h2
        out[0] = 2.0 * d[0] / h2
        out[-1] = -2.0 * d[-1] / h2
        return out

    def _lap(self, v: np.ndarray) -> np.ndarray:
        """Plain second depth difference with mirror ghosts (literal mode)."""
        h2 = self.grid.h ** 2
        out = np.empty_like(v)
        out[1:-1] = (v[2:] - 2.0 * v[1:-1] + v[:-2]) / h2
        out[0] = 2.0 * (v[1] - v[0]) / h2
        out[-1] = 2.0 * (v[-2] - v[-1]) / h2
        return out

    def apply(self, state: WaveState) -> None:
        """Solve the boundary column of u_next row by row.

        Transport terms center between the boundary column and its inward
        neighbor at the half time level; the running integrals supply the
        nonlocal terms.  The pivot 1/(2h) + 1/(2 c tau) never vanishes.
        """
        if not state._interior_done:
            raise ContractViolation("tappert apply called before step_interior")
        if state.step_index != self._acc_step:
            raise ContractViolation(
                f"tappert accumulators at step {self._acc_step}, state at "
                f"{state.step_index}")
        h, tau = self.grid.h, state.tau
        c = self.coef_c
        b, i1 = self.col0, self.col0 + self.inw
        u0n = state.u_curr[b, :]
        u1n = state.u_curr[i1, :]
        u1p = state.u_next[i1, :]
        if self.legacy_sums:
            pairs = self.acc_pairs + u0n + u1p
            lap = self._lap(pairs)
            integrals = (tau / 2.0) * self.coef_a * pairs \
                + (tau / 8.0) * self.coef_cy * lap \
                + (tau / 4.0) * c * lap
        else:
            integrals = self.coef_a * self.acc_a + 0.5 * self.acc_d
        rhs = ((u1n + u1p - u0n) / (2.0 * h)
               + (u0n + u1n - u1p) / (2.0 * c * tau)
               + integrals)
        pivot = 1.0 / (2.0 * h) + 1.0 / (2.0 * c * tau)
        state.u_next[b, :] = rhs / pivot
        state._sides_done.add(self.side)

    def after_advance(self, state: WaveState) -> None:
        """Extend the running integrals by the newly completed level."""
        if state.step_index != self._acc_step + 1:
            raise ContractViolation(
                "tappert accumulation must run exactly once after each advance")
        uc = state.u_curr
        v = 0.5 * (uc[self.col0, :] + uc[self.col0 + self.inw, :])
        self.acc_a += state.tau * v
        self.acc_d += state.tau * self._flux(v)
        if self.legacy_sums:
            self.acc_pairs += state.u_prev[self.col0, :] + uc[self.col0 + self.inw, :]
        self._acc_step += 1


@dataclass(frozen=True)
class HigdonStencil:
    """Expanded weights of the order-J product on the space-time lattice.

    ``weights[m, k]`` multiplies the field m levels back and k columns inward
    from the boundary; ``pivot`` = weights[0, 0] = prod(1/tau + C_j/h) > 0
    is the coefficient of the single unknown.
    """

    weights: np.ndarray
    pivot: float
    order: int
    side: str


def higdon_stencil(order: int, speeds, tau: float, h: float,
                   side: str = "left") -> HigdonStencil:
    """Expand prod_j [(1 - S_t)/tau - C_j (S_in - 1)/h] over the lattice,
    where S_t shifts one level back and S_in one column inward."""
    if not isinstance(order, (int, np.integer)) or order < 1:
        raise ConfigError(f"higdon order must be a positive integer, got {order}")
    speeds = tuple(float(c) for c in speeds)
    if len(speeds) != order:
        raise ConfigError(f"need {order} speeds, got {len(speeds)}")
    if any(c <= 0.0 for c in speeds):
        raise ConfigError("higdon speeds must be positive")
    if tau <= 0.0 or h <= 0.0:
        raise ConfigError("tau and h must be positive")
    w = np.zeros((order + 1, order + 1))
    w[0, 0] = 1.0
    for cj in speeds:
        nw = (1.0 / tau + cj / h) * w
        nw[1:, :] -= w[:-1, :] / tau
        nw[:, 1:] -= w[:, :-1] * (cj / h)
        w = nw
    return HigdonStencil(weights=w, pivot=float(w[0, 0]), order=order, side=side)


class HigdonBoundary:
    """Order-J Higdon update with its retained history of boundary slabs.

    Keeps the last J levels of the first J+1 columns; rows are independent.
    """

    def __init__(self, grid: Grid, spec: BoundarySpec, state: WaveState):
        if spec.kind != "higdon":
            raise ConfigError("HigdonBoundary needs a higdon BoundarySpec")
        if spec.speeds is None:
            raise ConfigError("higdon speeds must be resolved before use")
        self.grid = grid
        self.side = spec.side
        self.order = spec.order
        self.col0, self.inw = _side_geometry(grid, spec.side)
        if self.order + 1 > grid.nx:
            raise ConfigError("grid too narrow for the requested higdon order")
        self.stencil = higdon_stencil(spec.order, spec.speeds, grid.tau, grid.h,
                                      spec.side)
        self.cols = self.col0 + self.inw * np.arange(self.order + 1)
        slabs = [self._slab(state.u_curr), self._slab(state.u_prev)]
        while len(slabs) < self.order:
            slabs.append(np.zeros((self.order + 1, grid.ny)))
        self.slabs = deque(slabs[:self.order], maxlen=self.order)
        self._acc_step = state.step_index

    def _slab(self, u: np.ndarray) -> np.ndarray:
        return u[self.cols, :].copy()

    def apply(self, state: WaveState) -> None:
        if not state._interior_done:
            raise ContractViolation("higdon apply called before step_interior")
        if state.step_index != self._acc_step:
            raise ContractViolation("higdon history out of sync with the state")
        if len(self.slabs) != self.order:
            raise ContractViolation("insufficient higdon history retained")
        w = self.stencil.weights
        un = state.u_next
        acc = np.zeros(self.grid.ny)
        for k in range(1, self.order + 1):
            acc += w[0, k] * un[self.cols[k], :]
        for m in range(1, self.order + 1):
            slab = self.slabs[m - 1]
            for k in range(0, self.order + 1 - m):
                acc += w[m, k] * slab[k, :]
        un[self.col0, :] = -acc / self.stencil.pivot
        state._sides_done.add(self.side)

    def after_advance(self, state: WaveState) -> None:
        if state.step_index != self._acc_step + 1:
            raise ContractViolation(
                "higdon history must be pushed exactly once after each advance")
        self.slabs.appendleft(self._slab(state.u_curr))
        self._acc_step += 1


def make_boundary(spec: BoundarySpec, grid: Grid, model, state: WaveState):
    """Instantiate the absorbing condition for a spec; None for hard walls."""
    if spec.kind == "hard_wall":
        return None
    if spec.kind == "tappert":
        return TappertBoundary(grid, model, spec.side, spec.legacy_sums)
    return HigdonBoundary(grid, spec, state)
