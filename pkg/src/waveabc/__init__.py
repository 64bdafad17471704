"""2D time-domain waveguide solver with pluggable absorbing boundaries."""

from .boundaries import (BoundarySpec, HigdonBoundary, HigdonStencil,
                         TappertBoundary, higdon_stencil, make_boundary)
from .errors import ConfigError, ContractViolation, DomainError, StabilityError
from .harness import (ErrorSeries, ExperimentSpec, RunResult, compare,
                      error_series, experiment_catalog, find_experiment, run,
                      timing_report, write_error_csv, write_timing_csv)
from .medium import (Constant, ErfStep, GaussianDuct, RangeGaussian,
                     SoundSpeedModel, SpeedSample, Tabulated, depth_average,
                     load_speed_table)
from .solver import (ALL_SIDES, Grid, WaveState, advance, apply_hard_wall,
                     courant_factors, discrete_energy, make_grid,
                     read_snapshot, speed_field, step_interior,
                     write_snapshot)
from .source import SourceSpec, make_initial, pulse, zero_mean_pulse

__version__ = "0.1.0"

__all__ = [
    "ALL_SIDES", "BoundarySpec", "ConfigError", "Constant",
    "ContractViolation", "DomainError", "ErfStep", "ErrorSeries",
    "ExperimentSpec", "GaussianDuct", "Grid", "HigdonBoundary",
    "HigdonStencil", "RangeGaussian", "RunResult", "SoundSpeedModel",
    "SourceSpec", "SpeedSample", "StabilityError", "Tabulated",
    "TappertBoundary", "WaveState", "advance", "apply_hard_wall", "compare",
    "courant_factors", "depth_average", "discrete_energy", "error_series",
    "experiment_catalog", "find_experiment", "higdon_stencil",
    "load_speed_table", "make_boundary", "make_grid", "make_initial",
    "pulse", "read_snapshot", "run", "speed_field", "step_interior",
    "timing_report", "write_error_csv", "write_snapshot", "write_timing_csv",
    "zero_mean_pulse",
]
