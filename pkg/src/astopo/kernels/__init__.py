"""Hot numeric kernels with two interchangeable backends.

The numba backend is the default when numba imports. Set ASTOPO_NUMBA=0
to force the pure-numpy fallback, or ASTOPO_NUMBA=1 to require numba
(import fails if it is missing). Both backends implement identical math;
benchmarks/bench_kernels.py compares them.
"""

from __future__ import annotations

import os

_flag = os.environ.get("ASTOPO_NUMBA", "auto").strip().lower()

if _flag in ("0", "off", "false", "no"):
    from . import _numpy as _impl
    BACKEND = "numpy"
elif _flag in ("1", "on", "true", "yes", "require"):
    from . import _numba as _impl
    BACKEND = "numba"
else:
    try:
        from . import _numba as _impl
        BACKEND = "numba"
    except ImportError:
        from . import _numpy as _impl
        BACKEND = "numpy"

USE_NUMBA = BACKEND == "numba"

betweenness_raw = _impl.betweenness_raw
distance_sums = _impl.distance_sums
triangle_counts = _impl.triangle_counts
core_numbers = _impl.core_numbers
cvm_u4_rows = _impl.cvm_u4_rows

__all__ = [
    "BACKEND",
    "USE_NUMBA",
    "betweenness_raw",
    "distance_sums",
    "triangle_counts",
    "core_numbers",
    "cvm_u4_rows",
]
