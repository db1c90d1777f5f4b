# harness/runner.py
"""
Repeated benchmark runs.

Every repetition is an independent run: by default it executes in a freshly
spawned child process (its own allocator state, its own build mode), with
NPB_ISOLATE=false it runs in this process.
"""
import logging
import multiprocessing
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import settings
from common.params import class_params
from common.results import BenchmarkResult
from constants import BENCHMARKS, OUTPUT_FORMATS
from error_handler import UsageError
from runtime.pool import WorkerPool, WorkerPoolConfig
from utils.logging_config import PerformanceLogger, get_logger
from validators import InputValidator

logger = logging.getLogger(__name__)
app_logger = get_logger()
performance = PerformanceLogger()


@dataclass
class RunSpec:
    benchmark: str
    class_tag: str
    workers: List[int] = field(default_factory=lambda: [settings.default_workers()])
    reps: int = settings.NPB_REPS
    safe_mode: bool = False
    stack_reserve: Optional[int] = None
    output_format: str = 'text'
    output_path: Optional[str] = None
    timers: Optional[bool] = None

    def __post_init__(self):
        self.benchmark = self.benchmark.lower()
        self.class_tag = self.class_tag.upper()
        checks = [
            InputValidator.validate_benchmark(self.benchmark),
            InputValidator.validate_class(self.class_tag),
            InputValidator.validate_reps(self.reps),
            InputValidator.validate_format(self.output_format),
            InputValidator.validate_stack_reserve(self.stack_reserve),
        ]
        for ok, message in checks:
            if not ok:
                raise UsageError(message)
        if not self.workers or any(w < 1 for w in self.workers):
            raise UsageError("worker counts must be at least 1")

    @property
    def benchmarks(self) -> List[str]:
        return list(BENCHMARKS) if self.benchmark == 'all' else [self.benchmark]


@dataclass(frozen=True)
class RunJob:
    """One repetition of one configuration, as shipped to a child process"""
    benchmark: str
    class_tag: str
    workers: int
    rep: int
    safe_mode: bool
    stack_reserve: int
    timers: Optional[bool] = None


def resolve_stack_reserve(benchmark: str, class_tag: str, override: Optional[int]) -> int:
    """--stack-reserve, then NPB_STACK_RESERVE, then the class default (SP), then 0"""
    if override is not None:
        return override
    if settings.NPB_STACK_RESERVE:
        return settings.NPB_STACK_RESERVE
    return int(class_params(benchmark, class_tag).extra.get('stack_reserve', 0))


def run_job(job: RunJob) -> Dict[str, Any]:
    """Execute one repetition in the current process and return the result as a dict"""
    from common.jit import configure_build_mode
    from benchmarks.registry import get_runner

    configure_build_mode(job.safe_mode)
    params = class_params(job.benchmark, job.class_tag)
    config = WorkerPoolConfig(workers=job.workers, stack_reserve=job.stack_reserve,
                              deterministic_reduce=settings.NPB_DETERMINISTIC_REDUCE)
    with WorkerPool(config) as pool:
        result = get_runner(job.benchmark)(params, pool, timers_enabled=job.timers)
    result.rep = job.rep
    return result.as_dict()


def _child_entry(job: RunJob) -> Dict[str, Any]:
    # numba has not been imported in a fresh spawn child, so the mode can still be chosen
    settings.NPB_SAFE_MODE = job.safe_mode
    return run_job(job)


def run_isolated(job: RunJob) -> BenchmarkResult:
    context = multiprocessing.get_context('spawn')
    with ProcessPoolExecutor(max_workers=1, mp_context=context) as executor:
        return BenchmarkResult(**executor.submit(_child_entry, job).result())


def run_in_process(job: RunJob) -> BenchmarkResult:
    return BenchmarkResult(**run_job(job))


def execute(spec: RunSpec, isolate: Optional[bool] = None) -> List[BenchmarkResult]:
    """
    Run spec.reps repetitions for every benchmark and worker count.

    A configuration whose repetition fails verification is abandoned after
    that repetition; the failed result stays in the returned list.
    """
    isolate = settings.NPB_ISOLATE if isolate is None else isolate
    launch = run_isolated if isolate else run_in_process
    results: List[BenchmarkResult] = []

    for name in spec.benchmarks:
        class_params(name, spec.class_tag)
        reserve = resolve_stack_reserve(name, spec.class_tag, spec.stack_reserve)
        for workers in spec.workers:
            app_logger.info(f"Running {name}.{spec.class_tag} with {workers} worker(s), {spec.reps} rep(s)")
            for rep in range(1, spec.reps + 1):
                job = RunJob(name, spec.class_tag, workers, rep, spec.safe_mode, reserve, spec.timers)
                result = launch(job)
                results.append(result)
                performance.log_benchmark(result.benchmark, result.class_tag, result.workers,
                                          result.seconds, result.mflops, result.verified)
                if not result.verified:
                    logger.error("%s.%s with %d worker(s) failed verification on rep %d; "
                                 "skipping its remaining repetitions", name, spec.class_tag, workers, rep)
                    break
    return results


def failed(results: List[BenchmarkResult]) -> List[BenchmarkResult]:
    return [r for r in results if not r.verified]


__all__ = ['RunSpec', 'RunJob', 'execute', 'failed', 'resolve_stack_reserve', 'run_job', 'OUTPUT_FORMATS']
