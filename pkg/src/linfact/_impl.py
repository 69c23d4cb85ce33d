"""Kernel selection: the compiled core when importable, else the pure-Python fallback.

Set ``LINFACT_PURE=1`` to force the fallback. ``kernels(name)`` returns a specific one.
"""
import os

from . import _pure

try:
    from . import _core
except ImportError:  # extension not built
    _core = None

AVAILABLE = ("compiled", "pure") if _core is not None else ("pure",)

if _core is not None and not os.environ.get("LINFACT_PURE"):
    default = _core
else:
    default = _pure

DEFAULT_IMPL = default.IMPL


def kernels(impl=None):
    if impl is None:
        return default
    if impl == "pure":
        return _pure
    if impl == "compiled":
        if _core is None:
            raise ImportError("linfact._core is not built; reinstall with Cython available")
        return _core
    raise ValueError(f"unknown implementation {impl!r}")


def debug_enabled(debug=None):
    if debug is not None:
        return bool(debug)
    return os.environ.get("LINFACT_DEBUG_ASSERT", "") not in ("", "0")
