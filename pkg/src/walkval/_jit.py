"""Optional numba acceleration.

Set ``WALKVAL_DISABLE_JIT=1`` to force the pure-numpy kernels even when
numba is importable.  The flag is read once, at import time.
"""

import os

JIT_DISABLED = os.environ.get("WALKVAL_DISABLE_JIT", "").strip() not in ("", "0")

try:
    if JIT_DISABLED:
        raise ImportError("disabled by WALKVAL_DISABLE_JIT")
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]):
            return args[0]

        def decorator(func):
            return func

        return decorator


def backend() -> str:
    return "numba" if NUMBA_AVAILABLE else "numpy"
