"""Kernel backend selection.

The compiled module is used when it imports; :func:`use_backend` switches
explicitly (tests and the benchmark run both).
"""

from __future__ import annotations

from . import _pykernels

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

kernels = _compiled if _compiled is not None else _pykernels


def available():
    names = ["python"]
    if _compiled is not None:
        names.insert(0, "compiled")
    return names


def current():
    return "compiled" if kernels is _compiled and _compiled is not None else "python"


def use_backend(name):
    """Select ``"compiled"`` or ``"python"`` kernels; returns the previous name."""
    global kernels
    previous = current()
    if name == "python":
        kernels = _pykernels
    elif name == "compiled":
        if _compiled is None:
            raise ImportError("compiled kernels are not built")
        kernels = _compiled
    else:
        raise ValueError(f"unknown backend {name!r}")
    return previous
