"""Time-stepping backend selection.

Prefers the compiled extension and falls back to the numpy kernel when
the extension is not built. Setting the environment variable
BELLCAV_PY_KERNEL=1 forces the fallback (useful for benchmarking and
for debugging the compiled path).
"""

import os

if os.environ.get("BELLCAV_PY_KERNEL", "") not in ("", "0"):
    from ._evolve_py import rk4_segment
    backend_name = "numpy"
else:
    try:
        from ._evolve import rk4_segment
        backend_name = "cython"
    except ImportError:
        from ._evolve_py import rk4_segment
        backend_name = "numpy"

__all__ = ["rk4_segment", "backend_name"]
