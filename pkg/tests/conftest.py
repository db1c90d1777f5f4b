# tests/conftest.py
import os
import sys

# Add project root to Python path for imports
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

# in-process repetitions and a private kernel cache for the whole test session
os.environ.setdefault('NPB_ISOLATE', 'False')
os.environ.setdefault('NPB_TIMERS', 'False')

import pytest

import settings
from common.results import BenchmarkResult
from runtime.pool import WorkerPool, WorkerPoolConfig


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full class-S benchmark runs (deselect with -m 'not slow')")


@pytest.fixture(autouse=True)
def in_process_runs(monkeypatch):
    """Keep repetitions in the test process"""
    monkeypatch.setattr(settings, 'NPB_ISOLATE', False)
    yield


@pytest.fixture
def serial_pool():
    """One-worker pool: every primitive runs inline"""
    with WorkerPool(WorkerPoolConfig(workers=1)) as pool:
        yield pool


@pytest.fixture
def pool():
    """Four-worker pool"""
    with WorkerPool(WorkerPoolConfig(workers=4)) as pool:
        yield pool


@pytest.fixture
def deterministic_pool():
    """Four workers with static-partition, tree-combined reductions"""
    with WorkerPool(WorkerPoolConfig(workers=4, deterministic_reduce=True)) as pool:
        yield pool


@pytest.fixture
def make_result():
    """Factory for BenchmarkResult records used by harness tests"""
    def factory(benchmark='ep', class_tag='S', workers=1, rep=1, seconds=1.0,
                verified=True, safe_mode=False, mflops=100.0):
        return BenchmarkResult(
            benchmark=benchmark,
            class_tag=class_tag,
            size='64',
            iterations=1,
            seconds=seconds,
            mflops=mflops,
            verified=verified,
            workers=workers,
            safe_mode=safe_mode,
            rep=rep,
        )
    return factory
