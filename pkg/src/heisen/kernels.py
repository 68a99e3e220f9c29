"""Kernel backend selection.

The compiled extension is used when importable; otherwise the numpy
implementation. Set ``HEISEN_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _purepy

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None


def available_backends():
    names = ["python"]
    if _compiled is not None:
        names.insert(0, "cython")
    return names


def get_backend(name=None):
    """Return the kernel module for ``name`` ('cython' or 'python')."""
    if name is None:
        name = "python" if os.environ.get("HEISEN_PURE_PYTHON") else available_backends()[0]
    if name == "cython":
        if _compiled is None:
            raise ImportError("compiled kernels are not built")
        return _compiled
    if name == "python":
        return _purepy
    raise ValueError(f"unknown backend {name!r}")


backend = get_backend()
BACKEND = "cython" if backend is _compiled else "python"
