"""Kernel backend selection.

The compiled extension is preferred when it imported cleanly; the pure
Python module is the fallback and the reference.  Set
``SIDEWALK_ACCESS_FORCE_PURE=1`` to skip the extension, e.g. for the
differential tests and the benchmark.
"""

import os

from sidewalk_access._kernels import pure as _pure

if os.environ.get("SIDEWALK_ACCESS_FORCE_PURE", "") not in ("", "0"):
    _impl = _pure
else:
    try:
        from sidewalk_access._kernels import _native as _impl  # type: ignore
    except ImportError:
        _impl = _pure

BACKEND = _impl.BACKEND_NAME

EARTH_RADIUS_M = _pure.EARTH_RADIUS_M

haversine_m = _impl.haversine_m
nearest_segment = _impl.nearest_segment
dijkstra_dist = _impl.dijkstra_dist
kemeny = _impl.kemeny

__all__ = [
    "BACKEND",
    "EARTH_RADIUS_M",
    "haversine_m",
    "nearest_segment",
    "dijkstra_dist",
    "kemeny",
]
