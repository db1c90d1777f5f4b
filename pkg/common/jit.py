# common/jit.py
"""
Kernel compilation and build-mode selection.

Kernels are numba nopython functions compiled with ``nogil=True`` so pool
workers run them concurrently. Safe mode keeps per-access bounds checks
(``NUMBA_BOUNDSCHECK=1``); unchecked mode elides them. The mode is read by
numba when it is first imported, so it has to be chosen before any kernel
module is loaded; each mode keeps its own on-disk kernel cache.
"""
import os
import sys

import settings
from error_handler import ConfigurationError


def configure_build_mode(safe_mode: bool) -> None:
    """Select safe or unchecked kernels for this process"""
    if 'numba' in sys.modules:
        if current_safe_mode() != bool(safe_mode):
            raise ConfigurationError(
                f"kernels already loaded in {'safe' if current_safe_mode() else 'unchecked'} mode; "
                "start a fresh process to switch build mode"
            )
        return
    os.environ['NUMBA_BOUNDSCHECK'] = '1' if safe_mode else '0'
    os.environ['NUMBA_CACHE_DIR'] = settings.kernel_cache_dir(bool(safe_mode))


def current_safe_mode() -> bool:
    import numba
    return bool(numba.config.BOUNDSCHECK)


if 'numba' not in sys.modules:
    configure_build_mode(settings.NPB_SAFE_MODE)

import numba  # noqa: E402


def kernel(func=None, **options):
    """numba.njit with the suite's defaults (nogil, IEEE division, optional disk cache)"""
    flags = dict(nogil=True, cache=settings.NPB_JIT_CACHE, error_model='numpy')
    flags.update(options)

    def decorate(f):
        return numba.njit(**flags)(f)

    if func is not None:
        return decorate(func)
    return decorate
