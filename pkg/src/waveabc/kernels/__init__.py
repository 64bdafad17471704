"""Backend selection for the hot stencil kernels.

Two interchangeable implementations exist: a numba-compiled loop and a pure
numpy fallback.  The active one is chosen at import time from the
``WAVEABC_BACKEND`` environment variable (``numba``, ``numpy``, or ``auto``)
and can be switched at runtime with :func:`use_backend`.  Per-run results are
deterministic for a fixed backend; the two backends agree to rounding.
"""

import os

from ..errors import ConfigError
from . import numpy_impl

try:
    from . import numba_impl
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba_impl = None

BACKEND_ENV = "WAVEABC_BACKEND"

_IMPLS = {"numpy": numpy_impl}
if numba_impl is not None:
    _IMPLS["numba"] = numba_impl


def available_backends():
    return tuple(sorted(_IMPLS))


def use_backend(name: str):
    """Select the kernel backend; ``auto`` prefers numba when importable."""
    global _active, _active_name
    name = name.lower()
    if name == "auto":
        name = "numba" if "numba" in _IMPLS else "numpy"
    if name not in _IMPLS:
        raise ConfigError(
            f"unknown backend {name!r}; available: {', '.join(available_backends())}")
    _active = _IMPLS[name]
    _active_name = name
    return name


def active_backend() -> str:
    return _active_name


def step_interior(u_prev, u_curr, u_next, cfac):
    _active.step_interior(u_prev, u_curr, u_next, cfac)


use_backend(os.environ.get(BACKEND_ENV, "auto"))
