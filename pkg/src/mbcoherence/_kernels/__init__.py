"""Hot kernels, compiled when available.

The Cython extension ``_ckernels`` is preferred; the pure-Python module is
used when it is missing or when ``MBCOHERENCE_PURE`` is set to a non-empty
value other than ``0``.  ``BACKEND`` names the active implementation.
"""
import os

from . import _pykernels as pure

_force_pure = os.environ.get("MBCOHERENCE_PURE", "") not in ("", "0")

compiled = None
if not _force_pure:
    try:
        from . import _ckernels as compiled
    except ImportError:
        compiled = None

_impl = compiled if compiled is not None else pure
BACKEND = "cython" if compiled is not None else "python"

h_complete_series = _impl.h_complete_series
power_sum_average = _impl.power_sum_average

__all__ = ["BACKEND", "compiled", "pure", "h_complete_series", "power_sum_average"]
