"""Backend selection for the Monte-Carlo contrast kernel.

At import time the compiled Cython kernel is preferred; if the extension
was not built, the numpy fallback is used transparently.  The environment
variable SPINLOCK_BACKEND forces the choice: "cython", "numpy", or "auto"
(default).  Forcing "cython" without a built extension is an error rather
than a silent downgrade.

Both backends implement the same contract; within one backend results are
byte-reproducible, across backends they agree to rounding (different
vectorized trig), so any reproducibility claim is per backend.
"""
from __future__ import annotations

import os

from .errors import ConfigError

_VALID = ("auto", "cython", "numpy")
_requested = os.environ.get("SPINLOCK_BACKEND", "auto").strip().lower() or "auto"
if _requested not in _VALID:
    raise ConfigError(
        f"SPINLOCK_BACKEND={_requested!r} invalid; expected one of {_VALID}"
    )

if _requested == "numpy":
    from . import _mc_fallback as _impl

    _backend = "numpy"
elif _requested == "cython":
    from . import _mc_kernel as _impl  # noqa: F401 - explicit request, let it raise

    _backend = "cython"
else:
    try:
        from . import _mc_kernel as _impl

        _backend = "cython"
    except ImportError:
        from . import _mc_fallback as _impl

        _backend = "numpy"

contrast_values = _impl.contrast_values


def active_backend() -> str:
    """Name of the kernel backend selected at import: "cython" or "numpy"."""
    return _backend


def backend_module(name: str):
    """Fetch a specific backend implementation by name (for benchmarks/tests)."""
    if name == "numpy":
        from . import _mc_fallback

        return _mc_fallback
    if name == "cython":
        from . import _mc_kernel

        return _mc_kernel
    raise ConfigError(f"unknown backend {name!r}; expected 'cython' or 'numpy'")
