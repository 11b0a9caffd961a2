"""Kernel dispatch: compiled extension when available, numpy otherwise.

Set ``DQNFOIL_PURE_PYTHON=1`` to force the numpy fallback.
"""
import os

from . import _pykernels

BACKEND = "python"

if os.environ.get("DQNFOIL_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
else:
    _impl = _pykernels

influence_matrices = _impl.influence_matrices
has_self_intersection = _impl.has_self_intersection

__all__ = ["BACKEND", "influence_matrices", "has_self_intersection"]
