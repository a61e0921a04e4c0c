"""Runtime configuration read from environment variables.

FERMIQCA_MAX_MODES   dense Fock-space cap (default 16 modes, i.e. 65536-dim)
FERMIQCA_PURE_NUMPY  set to "1" to disable the numba kernels and use the
                     pure-numpy fallbacks everywhere
"""

import os


def max_modes() -> int:
    return int(os.environ.get("FERMIQCA_MAX_MODES", "16"))


def use_numba() -> bool:
    if os.environ.get("FERMIQCA_PURE_NUMPY", "0") == "1":
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True
