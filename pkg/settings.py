# settings.py
"""
Runtime configuration for the benchmark suite.
Values come from environment variables or a .env file (python-decouple);
command-line flags override them in main.py.
"""
import os
from pathlib import Path

from decouple import config

# Worker pool
NPB_WORKERS = config('NPB_WORKERS', default=0, cast=int)  # 0 -> os.cpu_count()
NPB_STACK_RESERVE = config('NPB_STACK_RESERVE', default=0, cast=int)  # bytes, 0 -> platform default
NPB_DETERMINISTIC_REDUCE = config('NPB_DETERMINISTIC_REDUCE', default=False, cast=bool)

# Build mode / kernel compilation
NPB_SAFE_MODE = config('NPB_SAFE_MODE', default=False, cast=bool)
NPB_JIT_CACHE = config('NPB_JIT_CACHE', default=True, cast=bool)
NPB_CACHE_DIR = config('NPB_CACHE_DIR', default=str(Path.home() / '.cache' / 'npb-suite'))

# Harness
NPB_REPS = config('NPB_REPS', default=10, cast=int)
NPB_ISOLATE = config('NPB_ISOLATE', default=True, cast=bool)
NPB_TIMERS = config('NPB_TIMERS', default=False, cast=bool)
NPB_ALPHA = config('NPB_ALPHA', default=0.05, cast=float)

# Logging
LOG_LEVEL = config('LOG_LEVEL', default='INFO')
LOG_FILE = config('LOG_FILE', default=None)
LOG_JSON = config('LOG_JSON', default=False, cast=bool)


def default_workers() -> int:
    """Worker count used when neither --workers nor NPB_WORKERS is given"""
    return NPB_WORKERS if NPB_WORKERS > 0 else (os.cpu_count() or 1)


def kernel_cache_dir(safe_mode: bool) -> str:
    """Per-mode numba cache directory; checked and unchecked builds never share files"""
    return str(Path(NPB_CACHE_DIR) / ('numba-safe' if safe_mode else 'numba-unchecked'))
