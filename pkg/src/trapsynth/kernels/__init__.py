"""Hot simulation kernels with a numba path and a pure-numpy fallback.

The numba path is used when numba imports cleanly, unless the environment
variable ``TRAPSYNTH_NO_JIT`` is set to a non-empty value other than ``0``.
Both backends expose the same functions; :func:`get_backend` returns either
module by name.
"""

import os
import types

from . import _numpy
from .opcodes import MS, PHASE, RX_MINUS, RX_PLUS, RZ_LAYER

try:
    from . import _numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    _numba = None

_disabled = os.environ.get("TRAPSYNTH_NO_JIT", "") not in ("", "0")

BACKENDS = {"numpy": _numpy}
if _numba is not None:
    BACKENDS["numba"] = _numba

DEFAULT_BACKEND = "numba" if (_numba is not None and not _disabled) else "numpy"


def get_backend(name: str | None = None) -> types.ModuleType:
    name = name or DEFAULT_BACKEND
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"unknown or unavailable backend {name!r}; have {sorted(BACKENDS)}") from None


__all__ = [
    "BACKENDS", "DEFAULT_BACKEND", "get_backend",
    "MS", "PHASE", "RX_MINUS", "RX_PLUS", "RZ_LAYER",
]
