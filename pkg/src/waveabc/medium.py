"""Sound-speed fields for stratified and range-dependent waveguides.

All quantities are nondimensional.  A model supplies the local speed c
together with its first and second depth derivatives, which the depth-aware
boundary condition needs.  Analytic kinds return closed-form derivatives;
tabulated media return second-order finite differences of the table.

Models are immutable after construction and safe to share between workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.special import erf

from .errors import ConfigError, DomainError

_trapz = getattr(np, "trapezoid", None) or np.trapz

_SQRT_PI = float(np.sqrt(np.pi))


@dataclass(frozen=True)
class SpeedSample:
    """Speed and its depth derivatives at one point."""

    c: float
    c_y: float
    c_yy: float


def _broadcast(x, y):
    xb, yb = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    return xb, yb


class SoundSpeedModel:
    """Base class for c(x, y) fields.

    Subclasses implement :meth:`sample`, returning ``(c, c_y, c_yy)`` arrays
    broadcast over the inputs, and :meth:`max_speed`, an upper bound on c
    used for time-step selection.
    """

    def sample(self, x, y):
        raise NotImplementedError

    def speed(self, x, y):
        return self.sample(x, y)[0]

    def eval(self, x, y) -> SpeedSample:
        """Point evaluation with validity checks (scalar interface)."""
        c, c_y, c_yy = self.sample(x, y)
        out = SpeedSample(float(c), float(c_y), float(c_yy))
        if not np.isfinite([out.c, out.c_y, out.c_yy]).all():
            raise DomainError(f"non-finite speed sample at ({x}, {y})")
        if out.c <= 0.0:
            raise DomainError(f"non-positive speed {out.c} at ({x}, {y})")
        return out

    def max_speed(self) -> float:
        raise NotImplementedError


@dataclass(frozen=True)
class Constant(SoundSpeedModel):
    """Homogeneous medium."""

    c: float = 1.0

    def __post_init__(self):
        if self.c <= 0.0:
            raise ConfigError(f"constant speed must be positive, got {self.c}")

    def sample(self, x, y):
        xb, _ = _broadcast(x, y)
        c = np.full(xb.shape, self.c)
        z = np.zeros(xb.shape)
        return c, z, z.copy()

    def max_speed(self) -> float:
        return self.c


@dataclass(frozen=True)
class GaussianDuct(SoundSpeedModel):
    """Depth profile with a Gaussian slow-speed duct at mid channel.

    c(y) = base - amplitude * exp(-(y - Ly/2)^2 / width)
    """

    Ly: float = 10.0
    amplitude: float = 0.5
    width: float = 3.0
    base: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.amplitude < self.base):
            raise ConfigError("duct amplitude must lie in (0, base) to keep c positive")
        if self.width <= 0.0 or self.Ly <= 0.0:
            raise ConfigError("duct width and Ly must be positive")

    def sample(self, x, y):
        xb, yb = _broadcast(x, y)
        dy = yb - 0.5 * self.Ly
        g = np.exp(-(dy * dy) / self.width)
        c = self.base - self.amplitude * g
        c_y = self.amplitude * (2.0 * dy / self.width) * g
        c_yy = self.amplitude * (2.0 / self.width - 4.0 * dy * dy / self.width**2) * g
        return c, c_y, c_yy

    def max_speed(self) -> float:
        return self.base


@dataclass(frozen=True)
class ErfStep(SoundSpeedModel):
    """Smoothed step from a fast lower layer to a slow upper layer.

    c(y) = base - (drop / sqrt(pi)) * integral_{-inf}^{y} exp(-(s - center)^2) ds
         = (base - drop/2) - (drop/2) * erf(y - center)
    """

    Ly: float = 10.0
    base: float = 4.0
    drop: float = 3.0
    center: float | None = None

    def __post_init__(self):
        if not (0.0 < self.drop < self.base):
            raise ConfigError("step drop must lie in (0, base) to keep c positive")
        if self.center is None:
            object.__setattr__(self, "center", self.Ly / 5.0)

    def sample(self, x, y):
        xb, yb = _broadcast(x, y)
        u = yb - self.center
        g = np.exp(-u * u)
        c = (self.base - 0.5 * self.drop) - 0.5 * self.drop * erf(u)
        c_y = -(self.drop / _SQRT_PI) * g
        c_yy = (2.0 * self.drop / _SQRT_PI) * u * g
        return c, c_y, c_yy

    def max_speed(self) -> float:
        return self.base


@dataclass(frozen=True)
class RangeGaussian(SoundSpeedModel):
    """Range-dependent profile: a Gaussian slow region in x, uniform in depth.

    c(x) = base - amplitude * exp(-(x - center)^2 / width)
    """

    Lx: float = 10.0
    amplitude: float = 0.5
    width: float = 3.0
    base: float = 1.0
    center: float | None = None

    def __post_init__(self):
        if not (0.0 < self.amplitude < self.base):
            raise ConfigError("amplitude must lie in (0, base) to keep c positive")
        if self.center is None:
            object.__setattr__(self, "center", 0.7 * self.Lx)

    def sample(self, x, y):
        xb, yb = _broadcast(x, y)
        dx = xb - self.center
        c = self.base - self.amplitude * np.exp(-(dx * dx) / self.width)
        z = np.zeros(xb.shape)
        return c, z, z.copy()

    def max_speed(self) -> float:
        return self.base


@dataclass(frozen=True)
class Tabulated(SoundSpeedModel):
    """Sampled c values on a uniform grid, bilinearly interpolated.

    Depth derivatives are centered second-order differences of the table
    (one-sided second-order at the table edges), interpolated the same way.
    Queries outside the table raise :class:`DomainError`; the table must
    cover the full simulation domain.
    """

    x0: float
    y0: float
    dx: float
    dy: float
    values: np.ndarray  # shape (nx, ny), y varying fastest
    _d1: np.ndarray = field(init=False, repr=False)
    _d2: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2 or v.shape[0] < 2 or v.shape[1] < 4:
            raise ConfigError("table must be 2D with at least 2 x-samples and 4 y-samples")
        if self.dx <= 0.0 or self.dy <= 0.0:
            raise ConfigError("table steps must be positive")
        if not np.isfinite(v).all() or v.min() <= 0.0:
            raise ConfigError("table must contain finite positive speeds")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "_d1", np.gradient(v, self.dy, axis=1, edge_order=2))
        d2 = np.empty_like(v)
        d2[:, 1:-1] = (v[:, 2:] - 2.0 * v[:, 1:-1] + v[:, :-2]) / self.dy**2
        d2[:, 0] = (2.0 * v[:, 0] - 5.0 * v[:, 1] + 4.0 * v[:, 2] - v[:, 3]) / self.dy**2
        d2[:, -1] = (2.0 * v[:, -1] - 5.0 * v[:, -2] + 4.0 * v[:, -3] - v[:, -4]) / self.dy**2
        object.__setattr__(self, "_d2", d2)

    def _locate(self, q, q0, dq, n):
        f = (np.asarray(q, dtype=float) - q0) / dq
        span = n - 1.0
        eps = 1e-9 * max(span, 1.0)
        if np.any(f < -eps) or np.any(f > span + eps):
            raise DomainError("query outside the tabulated domain (no extrapolation)")
        f = np.clip(f, 0.0, span)
        i0 = np.minimum(f.astype(int), n - 2)
        return i0, f - i0

    def _interp(self, table, i0, wx, j0, wy):
        return ((1.0 - wx) * (1.0 - wy) * table[i0, j0]
                + wx * (1.0 - wy) * table[i0 + 1, j0]
                + (1.0 - wx) * wy * table[i0, j0 + 1]
                + wx * wy * table[i0 + 1, j0 + 1])

    def sample(self, x, y):
        xb, yb = _broadcast(x, y)
        nx, ny = self.values.shape
        i0, wx = self._locate(xb, self.x0, self.dx, nx)
        j0, wy = self._locate(yb, self.y0, self.dy, ny)
        c = self._interp(self.values, i0, wx, j0, wy)
        c_y = self._interp(self._d1, i0, wx, j0, wy)
        c_yy = self._interp(self._d2, i0, wx, j0, wy)
        return c, c_y, c_yy

    def max_speed(self) -> float:
        return float(self.values.max())

    @classmethod
    def from_model(cls, model: SoundSpeedModel, x0: float, y0: float,
                   Lx: float, Ly: float, step: float) -> "Tabulated":
        """Sample an analytic model onto a table (testing convenience)."""
        nx = int(round(Lx / step)) + 1
        ny = int(round(Ly / step)) + 1
        xs = x0 + step * np.arange(nx)
        ys = y0 + step * np.arange(ny)
        vals = model.speed(xs[:, None], ys[None, :])
        return cls(x0=x0, y0=y0, dx=step, dy=step, values=vals)


def load_speed_table(path) -> Tabulated:
    """Read a tabulated model from a plain-text file.

    Format: first line ``nx ny x0 y0 dx dy``, then nx*ny whitespace-separated
    speed values, row-major with y varying fastest.
    """
    text = Path(path).read_text().split()
    if len(text) < 6:
        raise ConfigError(f"speed table {path}: missing header fields")
    nx, ny = int(text[0]), int(text[1])
    x0, y0, dx, dy = (float(t) for t in text[2:6])
    vals = np.array([float(t) for t in text[6:]])
    if vals.size != nx * ny:
        raise ConfigError(f"speed table {path}: expected {nx * ny} values, got {vals.size}")
    return Tabulated(x0=x0, y0=y0, dx=dx, dy=dy, values=vals.reshape(nx, ny))


def depth_average(model: SoundSpeedModel, x: float, Ly: float,
                  step: float | None = None) -> float:
    """Depth mean of c over [0, Ly] at fixed range x (composite trapezoid).

    ``step`` bounds the quadrature spacing; callers typically pass h/10.
    """
    if step is None:
        step = Ly / 4096.0
    n = max(int(np.ceil(Ly / step)), 8)
    ys = np.linspace(0.0, Ly, n + 1)
    cs = model.speed(x, ys)
    return float(_trapz(cs, dx=Ly / n) / Ly)
