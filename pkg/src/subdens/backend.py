"""Numba/numpy backend selection for the hot series and sampler kernels.

Every hot kernel exists twice: an ``@njit`` scalar-loop version in
``_kernels_numba`` and a vectorized pure-numpy version in ``_kernels_numpy``.
Both produce the same results to floating-point roundoff.  The active backend
is chosen by the ``SUBDENS_BACKEND`` environment variable (``numba`` or
``numpy``); the default is ``numba`` when importable, else ``numpy``.

``benchmarks/bench_backends.py`` compares the two paths.
"""

from __future__ import annotations

import contextlib
import importlib
import os
import warnings

ENV_VAR = "SUBDENS_BACKEND"

try:
    import numba  # noqa: F401

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only on stripped installs
    HAVE_NUMBA = False

_forced: str | None = None
_modules: dict[str, object] = {}


def _default_backend() -> str:
    env = os.environ.get(ENV_VAR, "").strip().lower()
    if env in ("numba", "numpy"):
        if env == "numba" and not HAVE_NUMBA:
            warnings.warn("SUBDENS_BACKEND=numba requested but numba is not "
                          "importable; falling back to numpy")
            return "numpy"
        return env
    if env:
        warnings.warn(f"ignoring unknown {ENV_VAR}={env!r}")
    return "numba" if HAVE_NUMBA else "numpy"


def current_backend() -> str:
    """Name of the backend that `kernels()` will return."""
    return _forced if _forced is not None else _default_backend()


def set_backend(name: str | None) -> None:
    """Force a backend (``'numba'``/``'numpy'``), or ``None`` to follow the env."""
    global _forced
    if name is not None:
        if name not in ("numba", "numpy"):
            raise ValueError(f"unknown backend {name!r}")
        if name == "numba" and not HAVE_NUMBA:
            raise ValueError("numba backend requested but numba is not importable")
    _forced = name


@contextlib.contextmanager
def use_backend(name: str):
    """Temporarily force a backend (used by tests and the benchmark)."""
    prev = _forced
    set_backend(name)
    try:
        yield
    finally:
        set_backend(prev)


def kernels():
    """Return the kernel module for the current backend."""
    name = current_backend()
    mod = _modules.get(name)
    if mod is None:
        mod = importlib.import_module(f"subdens._kernels_{name}")
        _modules[name] = mod
    return mod
