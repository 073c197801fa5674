"""Stencil kernel dispatch.

The compiled Cython lane is used when available; the numpy lane otherwise.
Set NLS_SOLITON_FORCE_NUMPY=1 to force the numpy lane (used by the kernel
benchmark and the cross-lane agreement tests).
"""

import os

from . import _numpy

if os.environ.get("NLS_SOLITON_FORCE_NUMPY", "") not in ("", "0"):
    _impl = _numpy
else:
    try:
        from . import _stencils as _impl
    except ImportError:
        _impl = _numpy

ACTIVE_LANE = _impl.LANE

d_x1 = _impl.d_x1
d_rho = _impl.d_rho
d2_x1 = _impl.d2_x1
lap_rho = _impl.lap_rho


def available_lanes():
    """Names of importable kernel implementations."""
    lanes = {"numpy": _numpy}
    try:
        from . import _stencils
        lanes["cython"] = _stencils
    except ImportError:
        pass
    return lanes
