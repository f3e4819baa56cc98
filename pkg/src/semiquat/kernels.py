"""Backend selection for the algebra kernels.

The compiled extension is used when it imports; otherwise the numpy version.
Set ``SEMIQUAT_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _kernels_py

if os.environ.get("SEMIQUAT_PURE_PYTHON"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = "python" if _impl is _kernels_py else "cython"

qmul = _impl.qmul
hdot = _impl.hdot
wedge4 = _impl.wedge4
det4 = _impl.det4


def get_backend(name):
    """Return the kernel module called ``name`` ("cython" or "python")."""
    if name == "python":
        return _kernels_py
    if name == "cython":
        from . import _kernels

        return _kernels
    raise ValueError(f"unknown backend {name!r}")
