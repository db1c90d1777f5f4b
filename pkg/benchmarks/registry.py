# benchmarks/registry.py
"""
Benchmark name -> module lookup.

Modules are imported on first use: importing one loads numba, which fixes
the build mode for the rest of the process.
"""
import importlib
from types import ModuleType
from typing import Callable, Dict

from constants import BENCHMARKS
from error_handler import UsageError

MODULES: Dict[str, str] = {
    'ep': 'benchmarks.ep',
    'cg': 'benchmarks.cg',
    'ft': 'benchmarks.ft',
    'is': 'benchmarks.is_sort',
    'mg': 'benchmarks.mg',
    'bt': 'benchmarks.bt',
    'sp': 'benchmarks.sp',
    'lu': 'benchmarks.lu',
}


def benchmark_module(name: str) -> ModuleType:
    name = name.lower()
    if name not in MODULES:
        raise UsageError(f"unknown benchmark '{name}' (expected one of {', '.join(BENCHMARKS)})")
    return importlib.import_module(MODULES[name])


def get_runner(name: str) -> Callable:
    """run(params, pool, timers_enabled=None) -> BenchmarkResult of the named benchmark"""
    return benchmark_module(name).run
