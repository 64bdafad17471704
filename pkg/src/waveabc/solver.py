"""Uniform grid, field storage, and the explicit second-order time step.

Grid convention: columns sit at x = x_offset + (j + 1/2) h for j = 0..nx-1
(staggered half a cell off the vertical boundaries) and rows at
y = (l + 1) h for l = 0..ny-1.  Column/row indexing of all field arrays is
``u[j, l]``.  Extended domains start at negative x_offset; coordinates are
always computed on the global lattice so that overlapping nodes of two grids
get bit-identical positions.

Hard walls are zero-Neumann: the ghost value outside a wall node mirrors the
first interior neighbor.  Where two hard walls meet, both ghosts mirror
(double mirroring); a corner adjacent to an absorbing side is overwritten by
that side's update, which runs last.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import ConfigError, ContractViolation

SQRT2 = math.sqrt(2.0)

ALL_SIDES = frozenset({"left", "right", "bottom", "top"})


@dataclass(frozen=True)
class Grid:
    """Uniform staggered grid.  Construct through :func:`make_grid`, which
    also enforces the stability bound; direct construction is allowed for
    special cases (e.g. 1D tests at unit Courant number)."""

    Lx: float
    Ly: float
    h: float
    tau: float
    nx: int
    ny: int
    x_offset: float = 0.0

    @property
    def col0(self) -> int:
        """Global lattice index of the first column."""
        return int(round(self.x_offset / self.h))

    def x_coords(self) -> np.ndarray:
        return (self.col0 + np.arange(self.nx) + 0.5) * self.h

    def y_coords(self) -> np.ndarray:
        return (np.arange(self.ny) + 1.0) * self.h

    def x_index(self, x: float) -> int:
        """Nearest column to x; snapping is offset-independent so the same
        physical node is chosen on truncated and extended grids."""
        return int(round(x / self.h - 0.5)) - self.col0

    def y_index(self, y: float) -> int:
        return int(round(y / self.h)) - 1

    def boundary_x(self, side: str) -> float:
        """Physical coordinate of a vertical domain boundary."""
        if side == "left":
            return self.col0 * self.h
        if side == "right":
            return (self.col0 + self.nx) * self.h
        raise ConfigError(f"no vertical boundary named {side!r}")


def make_grid(Lx: float, Ly: float, h: float, cfl_number: float = 0.9,
              c_max: float = 1.0, x_offset: float = 0.0) -> Grid:
    """Build a grid with tau = cfl_number * h / (c_max * sqrt(2))."""
    if Lx <= 0.0 or Ly <= 0.0 or h <= 0.0:
        raise ConfigError("Lx, Ly, h must be positive")
    if not (0.0 < cfl_number <= 1.0):
        raise ConfigError(f"cfl_number must lie in (0, 1], got {cfl_number}")
    if c_max <= 0.0:
        raise ConfigError("c_max must be positive")
    nx = int(round(Lx / h))
    ny = int(round(Ly / h))
    if nx < 3 or ny < 3:
        raise ConfigError("grid must be at least 3x3")
    if abs(nx * h - Lx) > 1e-9 * max(1.0, abs(Lx)):
        raise ConfigError(f"Lx={Lx} is not a multiple of h={h}")
    if abs(ny * h - Ly) > 1e-9 * max(1.0, abs(Ly)):
        raise ConfigError(f"Ly={Ly} is not a multiple of h={h}")
    col0 = round(x_offset / h)
    if abs(col0 * h - x_offset) > 1e-9 * max(1.0, abs(x_offset)):
        raise ConfigError(f"x_offset={x_offset} is not a multiple of h={h}")
    tau = cfl_number * h / (c_max * SQRT2)
    return Grid(Lx=Lx, Ly=Ly, h=h, tau=tau, nx=nx, ny=ny, x_offset=col0 * h)


@dataclass
class WaveState:
    """Three consecutive time levels of the field.

    ``u_curr`` holds level i (time = step_index * tau), ``u_prev`` level i-1,
    and ``u_next`` is the level i+1 under construction.  The bookkeeping
    flags enforce the step protocol: interior update, then every boundary,
    then :func:`advance`.
    """

    u_prev: np.ndarray
    u_curr: np.ndarray
    u_next: np.ndarray
    tau: float
    step_index: int = 0
    time: float = 0.0
    _interior_done: bool = False
    _sides_done: set = field(default_factory=set)

    @classmethod
    def zeros(cls, grid: Grid) -> "WaveState":
        shape = (grid.nx, grid.ny)
        return cls(u_prev=np.zeros(shape), u_curr=np.zeros(shape),
                   u_next=np.zeros(shape), tau=grid.tau)


def speed_field(model, grid: Grid) -> np.ndarray:
    """c evaluated once per node, cached as an array."""
    x = grid.x_coords()[:, None]
    y = grid.y_coords()[None, :]
    c = np.asarray(model.speed(x, y), dtype=float)
    if not np.isfinite(c).all() or c.min() <= 0.0:
        raise ConfigError("speed field must be finite and positive on the grid")
    return c


def courant_factors(model, grid: Grid) -> np.ndarray:
    """(c tau / h)^2 per node; the stencil's only medium dependence."""
    c = speed_field(model, grid)
    return (c * grid.tau / grid.h) ** 2


def step_interior(state: WaveState, cfac: np.ndarray) -> None:
    """Fill u_next at interior nodes from the five-point stencil."""
    kernels.step_interior(state.u_prev, state.u_curr, state.u_next, cfac)
    state._interior_done = True
    state._sides_done.clear()


def apply_hard_wall(state: WaveState, sides, cfac: np.ndarray) -> None:
    """Update boundary nodes on the given sides with mirror ghosts."""
    if not state._interior_done:
        raise ContractViolation("apply_hard_wall called before step_interior")
    up, uc, un = state.u_prev, state.u_curr, state.u_next
    nx, ny = uc.shape
    for side in sides:
        if side == "bottom" or side == "top":
            l = 0 if side == "bottom" else ny - 1
            li = 1 if side == "bottom" else ny - 2
            xsum = np.empty(nx)
            xsum[1:-1] = uc[2:, l] + uc[:-2, l]
            xsum[0] = 2.0 * uc[1, l]
            xsum[-1] = 2.0 * uc[-2, l]
            un[:, l] = (2.0 * uc[:, l] - up[:, l]
                        + cfac[:, l] * (xsum + 2.0 * uc[:, li] - 4.0 * uc[:, l]))
        elif side == "left" or side == "right":
            j = 0 if side == "left" else nx - 1
            ji = 1 if side == "left" else nx - 2
            ysum = np.empty(ny)
            ysum[1:-1] = uc[j, 2:] + uc[j, :-2]
            ysum[0] = 2.0 * uc[j, 1]
            ysum[-1] = 2.0 * uc[j, -2]
            un[j, :] = (2.0 * uc[j, :] - up[j, :]
                        + cfac[j, :] * (ysum + 2.0 * uc[ji, :] - 4.0 * uc[j, :]))
        else:
            raise ConfigError(f"unknown side {side!r}")
        state._sides_done.add(side)


def advance(state: WaveState) -> None:
    """Rotate time levels and move the clock one step."""
    if not state._interior_done or state._sides_done != ALL_SIDES:
        missing = ALL_SIDES - state._sides_done
        raise ContractViolation(
            f"advance called before u_next was completed (missing: {sorted(missing)})")
    state.u_prev, state.u_curr, state.u_next = state.u_curr, state.u_next, state.u_prev
    state.step_index += 1
    state.time = state.step_index * state.tau
    state._interior_done = False
    state._sides_done = set()


def discrete_energy(state: WaveState, c_sq: np.ndarray, grid: Grid) -> float:
    """Leapfrog energy of the closed box, exactly conserved by the scheme.

    Sum of (1/c^2) ((u_curr - u_prev)/tau)^2 over nodes plus the half-level
    gradient product grad(u_curr) . grad(u_prev) over cell edges, times h^2.
    Nodes (and the transverse weight of edges) on a wall count with weight
    1/2, corners 1/4, matching the mirror-ghost wall treatment.
    """
    up, uc = state.u_prev, state.u_curr
    nx, ny = uc.shape
    h, tau = grid.h, state.tau
    mx = np.ones(nx)
    mx[0] = mx[-1] = 0.5
    my = np.ones(ny)
    my[0] = my[-1] = 0.5
    kin = np.sum((mx[:, None] * my[None, :]) * (uc - up) ** 2 / c_sq) / tau**2
    pot_x = np.sum((uc[1:, :] - uc[:-1, :]) * (up[1:, :] - up[:-1, :]) * my[None, :]) / h**2
    pot_y = np.sum((uc[:, 1:] - uc[:, :-1]) * (up[:, 1:] - up[:, :-1]) * mx[:, None]) / h**2
    return float((kin + pot_x + pot_y) * h * h)


def write_snapshot(path, u: np.ndarray, t: float) -> None:
    """Dump a field as text: header ``nx ny t``, then nx*ny values row-major
    (y fastest), 17 significant digits.  Written atomically."""
    path = os.fspath(path)
    tmp = path + ".tmp"
    nx, ny = u.shape
    with open(tmp, "w") as f:
        f.write(f"{nx} {ny} {t:.17g}\n")
        u.reshape(-1).tofile(f, sep="\n", format="%.17g")
        f.write("\n")
    os.replace(tmp, path)


def read_snapshot(path):
    with open(path) as f:
        tokens = f.read().split()
    nx, ny = int(tokens[0]), int(tokens[1])
    t = float(tokens[2])
    u = np.array([float(v) for v in tokens[3:]]).reshape(nx, ny)
    return u, t
