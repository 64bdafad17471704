"""Truncated-vs-extended experiment pairs and the error measures.

A benchmark pair runs the same problem twice: once on the truncated window
[0, Lx] x [0, Ly] with the absorbing condition on the left side, and once on
a domain extended leftward far enough that no wave reaches its outer wall
within the simulated time.  The extended run, restricted to the window, is
the reference; the per-snapshot error measures are

    E(t) = sum |u - u_E| / sum |u_E|      (relative L1)
    e(t) = max |u - u_E|                  (max-abs)

over all window nodes.
"""

from __future__ import annotations

import time as _time
from dataclasses import dataclass, replace

import numpy as np

from .boundaries import BoundarySpec, make_boundary
from .errors import ConfigError, StabilityError
from .medium import (Constant, ErfStep, GaussianDuct, RangeGaussian,
                     SoundSpeedModel, depth_average)
from .solver import (ALL_SIDES, Grid, WaveState, advance, apply_hard_wall,
                     courant_factors, make_grid, step_interior)
from .source import SourceSpec, make_initial


@dataclass(frozen=True)
class ExperimentSpec:
    """Everything needed to run one benchmark pair."""

    name: str
    medium: SoundSpeedModel
    source: SourceSpec
    boundary: BoundarySpec
    Lx: float = 10.0
    Ly: float = 10.0
    h: float = 0.1
    cfl_number: float = 0.9
    T_final: float = 20.0
    extension: float | None = None  # None: auto from the no-reach invariant
    snapshot_stride: int = 10
    inject_in_main: bool = False    # force the source inside the variable-c run

    def c_max(self) -> float:
        return self.medium.max_speed()

    def resolved_source(self) -> SourceSpec:
        if self.source.c0 is not None:
            return self.source
        c0 = float(self.medium.speed(self.source.x, self.source.y))
        return replace(self.source, c0=c0)

    def resolved_extension(self) -> float:
        """Leftward extension: waves must not reach the outer wall, so it
        covers c_max * T_final plus the source footprint."""
        if self.extension is not None:
            ext = self.extension
        else:
            src = self.resolved_source()
            ext = self.c_max() * self.T_final + src.c0 * src.duration + self.h
        return np.ceil(ext / self.h - 1e-9) * self.h

    def make_grid(self, truncated: bool = True) -> Grid:
        if truncated:
            return make_grid(self.Lx, self.Ly, self.h, self.cfl_number,
                             self.c_max(), x_offset=0.0)
        ext = self.resolved_extension()
        return make_grid(self.Lx + ext, self.Ly, self.h, self.cfl_number,
                         self.c_max(), x_offset=-ext)

    def resolved_boundary(self) -> BoundarySpec:
        """Fill Higdon speeds with the depth-averaged sound speed."""
        b = self.boundary
        if b.kind == "higdon" and b.speeds is None:
            cbar = depth_average(self.medium, 0.0, self.Ly, step=self.h / 10.0)
            b = replace(b, speeds=(cbar,) * b.order)
        return b


@dataclass
class RunResult:
    spec: ExperimentSpec
    truncated: bool
    grid: Grid
    steps: np.ndarray          # recorded step indices
    times: np.ndarray          # recorded times
    fields: list | None        # window-restricted copies, or None
    max_abs: np.ndarray        # max |u| at recorded steps
    n_steps: int
    step_seconds: np.ndarray | None = None
    boundary_seconds: np.ndarray | None = None


def run(spec: ExperimentSpec, truncated: bool = True, *, n_steps: int | None = None,
        collect_fields: bool = True, instrument: bool = False) -> RunResult:
    """March one simulation to T_final, recording window snapshots.

    Per step: interior update, hard walls, the absorbing side last (it owns
    its corners), advance, then the boundary's accumulator update.  Aborts
    with :class:`StabilityError` if the field stops being finite.
    """
    grid = spec.make_grid(truncated)
    cfac = courant_factors(spec.medium, grid)
    src = spec.resolved_source()

    if spec.inject_in_main:
        state = WaveState.zeros(grid)
        c_src = float(spec.medium.speed(src.x, src.y))
        inject = grid.tau**2 * c_src**2 * src.amplitude / grid.h**2
        js, ls = grid.x_index(src.x), grid.y_index(src.y)
        if not (1 <= js <= grid.nx - 2 and 1 <= ls <= grid.ny - 2):
            raise ConfigError("source node is not strictly inside the grid")
    else:
        state = make_initial(grid, src)

    bspec = spec.resolved_boundary() if truncated else None
    abc = make_boundary(bspec, grid, spec.medium, state) if bspec is not None else None
    hw_sides = set(ALL_SIDES)
    if abc is not None:
        hw_sides.discard(bspec.side)

    # Window: the columns of the truncated domain (global lattice indices
    # 0 .. Lx/h - 1), full depth.
    nx_window = int(round(spec.Lx / spec.h))
    j_lo = -grid.col0
    window = np.s_[j_lo:j_lo + nx_window, :]

    if n_steps is None:
        n_steps = int(np.ceil(spec.T_final / grid.tau - 1e-12))
    stride = max(int(spec.snapshot_stride), 1)

    steps, times, fields, max_abs = [0], [0.0], [], [float(np.abs(state.u_curr).max())]
    if collect_fields:
        fields.append(state.u_curr[window].copy())
    step_sec = np.zeros(n_steps) if instrument else None
    bnd_sec = np.zeros(n_steps) if instrument else None

    for n in range(1, n_steps + 1):
        t0 = _time.perf_counter() if instrument else 0.0
        step_interior(state, cfac)
        if spec.inject_in_main:
            state.u_next[js, ls] += inject * src.signal(state.time)
        apply_hard_wall(state, hw_sides, cfac)
        tb = _time.perf_counter() if instrument else 0.0
        if abc is not None:
            abc.apply(state)
        advance(state)
        if abc is not None:
            abc.after_advance(state)
        if instrument:
            t1 = _time.perf_counter()
            step_sec[n - 1] = t1 - t0
            bnd_sec[n - 1] = t1 - tb
        if n % stride == 0 or n == n_steps:
            m = float(np.abs(state.u_curr).max())
            if not np.isfinite(m):
                raise StabilityError(
                    f"non-finite field detected at step {n}", step=n,
                    max_abs=max_abs[-1])
            steps.append(n)
            times.append(state.time)
            max_abs.append(m)
            if collect_fields:
                fields.append(state.u_curr[window].copy())

    return RunResult(spec=spec, truncated=truncated, grid=grid,
                     steps=np.array(steps), times=np.array(times),
                     fields=fields if collect_fields else None,
                     max_abs=np.array(max_abs), n_steps=n_steps,
                     step_seconds=step_sec, boundary_seconds=bnd_sec)


@dataclass
class ErrorSeries:
    """Per-snapshot error measures of a truncated run against its oracle.

    E entries are NaN where the reference field is identically zero but the
    truncated field is not (the relative measure is undefined there)."""

    times: np.ndarray
    E: np.ndarray
    e: np.ndarray

    def final_E(self) -> float:
        return float(self.E[-1])

    def final_e(self) -> float:
        return float(self.e[-1])


def error_series(truncated_run: RunResult, extended_run: RunResult) -> ErrorSeries:
    """Compare a truncated run against the extended-domain reference."""
    rt, re = truncated_run, extended_run
    if rt.fields is None or re.fields is None:
        raise ConfigError("error_series needs runs with collected fields")
    if not np.array_equal(rt.steps, re.steps) or abs(rt.grid.tau - re.grid.tau) > 1e-15:
        raise ConfigError("runs must share tau, step count, and snapshot stride")
    if rt.fields[0].shape != re.fields[0].shape:
        raise ConfigError("runs must share the comparison window")
    E = np.empty(len(rt.steps))
    e = np.empty(len(rt.steps))
    for i, (ft, fe) in enumerate(zip(rt.fields, re.fields)):
        diff = np.abs(ft - fe)
        denom = np.abs(fe).sum()
        num = diff.sum()
        if denom == 0.0:
            E[i] = 0.0 if num == 0.0 else np.nan
        else:
            E[i] = num / denom
        e[i] = diff.max()
    return ErrorSeries(times=rt.times.copy(), E=E, e=e)


def compare(spec: ExperimentSpec, **run_kwargs):
    """Run the truncated/extended pair and score it."""
    rt = run(spec, truncated=True, **run_kwargs)
    re = run(spec, truncated=False, **run_kwargs)
    return error_series(rt, re), rt, re


def write_error_csv(path, series: ErrorSeries) -> None:
    """CSV with header t,E,e; 15 significant digits; atomic write."""
    import os
    path = os.fspath(path)
    tmp = path + ".tmp"
    with open(tmp, "w") as f:
        f.write("t,E,e\n")
        for t, E, e in zip(series.times, series.E, series.e):
            f.write(f"{t:.15g},{E:.15g},{e:.15g}\n")
    os.replace(tmp, path)


_BOUNDARY_VARIANTS = {
    "tappert": BoundarySpec(side="left", kind="tappert"),
    "higdon2": BoundarySpec(side="left", kind="higdon", order=2),
    "higdon3": BoundarySpec(side="left", kind="higdon", order=3),
}


def experiment_catalog(h: float = 0.1, T_final: float = 20.0) -> list[ExperimentSpec]:
    """The three benchmark experiments plus a constant-speed control, each
    with a Tappert, Higdon-2, and Higdon-3 left boundary."""
    # The zero-mean waveform keeps the reference free of the static pedestal
    # a net-mass source would leave, so the series score boundary reflection
    # rather than pedestal handling.
    L = 10.0
    wf = "zero_mean"
    bases = [
        ("exp1", GaussianDuct(Ly=L),
         SourceSpec(x=L / 2, y=L / 2, duration=1.4, waveform=wf)),
        ("exp2", ErfStep(Ly=L),
         SourceSpec(x=L / 2, y=L / 2, duration=1.0, waveform=wf)),
        ("exp3", RangeGaussian(Lx=L),
         SourceSpec(x=0.75 * L, y=L / 2, duration=1.4, waveform=wf)),
        ("const", Constant(1.0),
         SourceSpec(x=L / 2, y=L / 2, duration=1.0, waveform=wf)),
    ]
    specs = []
    for base_name, medium, src in bases:
        for bc_name, bc in _BOUNDARY_VARIANTS.items():
            specs.append(ExperimentSpec(
                name=f"{base_name}-{bc_name}", medium=medium, source=src,
                boundary=bc, Lx=L, Ly=L, h=h, T_final=T_final))
    return specs


def find_experiment(name: str, h: float = 0.1, T_final: float = 20.0) -> ExperimentSpec:
    for spec in experiment_catalog(h=h, T_final=T_final):
        if spec.name == name:
            return spec
    known = ", ".join(s.name for s in experiment_catalog())
    raise ConfigError(f"unknown experiment {name!r}; known: {known}")


@dataclass(frozen=True)
class TimingRow:
    kind: str
    per_step_seconds: float
    boundary_share_seconds: float


def timing_report(spec: ExperimentSpec, n_steps: int = 200,
                  warmup: int = 20) -> list[TimingRow]:
    """Median per-step wall time for interior-only and each boundary kind,
    with the boundary share isolated by differencing against interior-only."""
    variants = [
        ("interior_only", BoundarySpec(side="left", kind="hard_wall")),
        ("tappert", BoundarySpec(side="left", kind="tappert")),
        ("higdon1", BoundarySpec(side="left", kind="higdon", order=1)),
        ("higdon2", BoundarySpec(side="left", kind="higdon", order=2)),
        ("higdon3", BoundarySpec(side="left", kind="higdon", order=3)),
    ]
    rows = []
    base = None
    for kind, bc in variants:
        vspec = replace(spec, boundary=bc)
        res = run(vspec, truncated=True, n_steps=n_steps, collect_fields=False,
                  instrument=True)
        med = float(np.median(res.step_seconds[warmup:]))
        if kind == "interior_only":
            base = med
        rows.append(TimingRow(kind=kind, per_step_seconds=med,
                              boundary_share_seconds=med - base))
    return rows


def write_timing_csv(path, rows: list[TimingRow]) -> None:
    import os
    path = os.fspath(path)
    tmp = path + ".tmp"
    with open(tmp, "w") as f:
        f.write("kind,per_step_seconds\n")
        for r in rows:
            f.write(f"{r.kind},{r.per_step_seconds:.15g}\n")
    os.replace(tmp, path)
