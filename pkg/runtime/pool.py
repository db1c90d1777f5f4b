# runtime/pool.py
"""
Worker pool and the data-parallel primitives built on it.

The pool owns a fixed set of threads created once per run. Kernels are
compiled with ``nogil=True`` so bodies that call them execute concurrently.
Every primitive blocks until all of its work is finished (implicit
barrier); there is no ``nowait`` variant.

Bodies must not call pool primitives themselves: nested parallel regions are
rejected with ConfigurationError.
"""
import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Iterator, List, Optional, TypeVar

import settings
from error_handler import ConfigurationError, ErrorHandler, NpbError, WorkerError

logger = logging.getLogger(__name__)

V = TypeVar('V')

# threading.stack_size() rejects anything below this
MIN_STACK_RESERVE = 32 * 1024


@dataclass(frozen=True)
class IndexRange:
    """Half-open range [start, end) over one integer dimension"""
    start: int
    end: int

    def __post_init__(self):
        if self.start > self.end:
            raise ValueError(f"IndexRange start {self.start} exceeds end {self.end}")

    def __len__(self) -> int:
        return self.end - self.start

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.start, self.end))

    def __contains__(self, index: int) -> bool:
        return self.start <= index < self.end

    @classmethod
    def of(cls, value) -> 'IndexRange':
        """Coerce an int (meaning [0, n)), a range or an IndexRange"""
        if isinstance(value, IndexRange):
            return value
        if isinstance(value, range):
            if value.step != 1:
                raise ValueError("only unit-step ranges are supported")
            return cls(value.start, max(value.start, value.stop))
        return cls(0, int(value))


def static_partition(rng, worker_id: int, n_workers: int) -> IndexRange:
    """Contiguous share of ``rng`` for one worker; shares differ in size by at most one"""
    rng = IndexRange.of(rng)
    if n_workers < 1 or not 0 <= worker_id < n_workers:
        raise ValueError(f"invalid partition request: worker {worker_id} of {n_workers}")
    size, rem = divmod(len(rng), n_workers)
    start = rng.start + worker_id * size + min(worker_id, rem)
    end = start + size + (1 if worker_id < rem else 0)
    return IndexRange(start, end)


def split_range(rng, parts: int) -> List[IndexRange]:
    """All ``parts`` static partitions of rng, empty ones dropped"""
    rng = IndexRange.of(rng)
    parts = max(1, min(parts, len(rng)))
    return [static_partition(rng, p, parts) for p in range(parts)]


@dataclass(frozen=True)
class WorkerPoolConfig:
    workers: int = 1
    stack_reserve: int = 0  # bytes per worker thread, 0 keeps the platform default
    deterministic_reduce: bool = False

    def __post_init__(self):
        if self.workers < 1:
            raise ConfigurationError(f"worker count must be at least 1, got {self.workers}")
        if self.stack_reserve < 0:
            raise ConfigurationError("stack reserve cannot be negative")
        if 0 < self.stack_reserve < MIN_STACK_RESERVE:
            raise ConfigurationError(f"stack reserve must be 0 or at least {MIN_STACK_RESERVE} bytes")

    @classmethod
    def from_settings(cls, workers: Optional[int] = None,
                      stack_reserve: Optional[int] = None) -> 'WorkerPoolConfig':
        """CLI values win over NPB_* environment values"""
        return cls(
            workers=workers if workers else settings.default_workers(),
            stack_reserve=stack_reserve if stack_reserve is not None else settings.NPB_STACK_RESERVE,
            deterministic_reduce=settings.NPB_DETERMINISTIC_REDUCE,
        )


class Barrier:
    """Group barrier; a group of one never blocks"""

    def __init__(self, parties: int):
        self.parties = parties
        self._barrier = threading.Barrier(parties) if parties > 1 else None

    def wait(self):
        if self._barrier is not None:
            self._barrier.wait()

    def abort(self):
        if self._barrier is not None:
            self._barrier.abort()


class _Run:
    """Failure bookkeeping for one primitive invocation"""

    def __init__(self):
        self.abort = threading.Event()
        self._lock = threading.Lock()
        self.error: Optional[BaseException] = None

    def fail(self, error: BaseException):
        with self._lock:
            if self.error is None:
                self.error = error
        self.abort.set()


class _Cursor:
    """Shared ascending index source for dynamic self-scheduling"""

    def __init__(self, rng: IndexRange):
        self._next = rng.start
        self._end = rng.end
        self._lock = threading.Lock()

    def take(self) -> Optional[int]:
        with self._lock:
            if self._next >= self._end:
                return None
            index = self._next
            self._next += 1
            return index


_local = threading.local()


def _invoke(body: Callable, index, *args):
    try:
        return body(index, *args)
    except NpbError:
        raise
    except Exception as e:
        error_id = ErrorHandler.log_error(e, context={'index': index})
        raise WorkerError(
            f"parallel body failed at index {index} ({type(e).__name__}: {e}). Error ID: {error_id}",
            index=index
        ) from e


class WorkerPool:
    """Fixed-size pool; with one worker every primitive runs inline, in ascending order"""

    def __init__(self, config: WorkerPoolConfig = None):
        self.config = config or WorkerPoolConfig()
        self._executor: Optional[ThreadPoolExecutor] = None
        if self.workers > 1:
            self._start_threads()
        logger.debug("Worker pool ready: %d workers, stack reserve %d bytes",
                     self.workers, self.config.stack_reserve)

    @property
    def workers(self) -> int:
        return self.config.workers

    def _start_threads(self):
        previous = threading.stack_size()
        try:
            if self.config.stack_reserve:
                threading.stack_size(self.config.stack_reserve)
            self._executor = ThreadPoolExecutor(max_workers=self.workers,
                                                thread_name_prefix='npb-worker')
            # all threads must exist before the stack size is restored
            ready = threading.Barrier(self.workers)
            for future in [self._executor.submit(ready.wait) for _ in range(self.workers)]:
                future.result()
        except ValueError as e:
            raise ConfigurationError(f"stack reserve rejected by the platform: {e}") from e
        finally:
            threading.stack_size(previous)

    def close(self):
        if self._executor is not None:
            self._executor.shutdown(wait=True)
            self._executor = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
        return False

    def barrier(self) -> Barrier:
        return Barrier(self.workers)

    # ------------------------------------------------------------------
    # execution core
    # ------------------------------------------------------------------

    def _launch(self, task: Callable[[int, _Run], None], on_abort: Callable[[], None] = None):
        """Run task(worker_id, run) once per worker and surface the first failure"""
        if getattr(_local, 'in_worker', False):
            raise ConfigurationError("parallel primitives cannot be nested inside a parallel body")

        run = _Run()
        if self._executor is None:
            _local.in_worker = True
            try:
                task(0, run)
            finally:
                _local.in_worker = False
            return

        def worker(worker_id: int):
            _local.in_worker = True
            try:
                task(worker_id, run)
            except BaseException as e:
                run.fail(e)
                if on_abort is not None:
                    on_abort()
            finally:
                _local.in_worker = False

        futures = [self._executor.submit(worker, wid) for wid in range(self.workers)]
        for future in futures:
            future.result()
        if run.error is not None:
            raise run.error

    # ------------------------------------------------------------------
    # primitives
    # ------------------------------------------------------------------

    def par_map(self, rng, body: Callable[[int], Any]) -> None:
        """Apply body(i) once for every i in rng; bodies for distinct i must not share mutable state"""
        rng = IndexRange.of(rng)
        if len(rng) == 0:
            return
        if self._executor is None:
            self._launch(lambda wid, run: [_invoke(body, i) for i in rng])
            return

        shared = _Cursor(rng)

        def task(worker_id: int, run: _Run):
            while not run.abort.is_set():
                index = shared.take()
                if index is None:
                    return
                _invoke(body, index)

        self._launch(task)

    def par_map_disjoint(self, rng, target, body: Callable[[int, Any], Any]) -> None:
        """
        par_map whose bodies write into shared ``target``.

        Caller contract: body(j, target) writes only the region of target
        addressed by j (or by values computed injectively from j). Nothing
        checks this; a violation is an undetected data race. Every call site
        states why its regions are disjoint.
        """
        rng = IndexRange.of(rng)
        self.par_map(rng, lambda j: body(j, target))

    def par_map_reduce(self, rng, map_fn: Callable[[int], V], identity: V,
                       combine: Callable[[V, V], V]) -> V:
        """
        Fold map_fn over rng with an associative combine.

        combine must return a new value rather than mutate its arguments.
        Workers fold locally; partial results are combined in worker-index
        order. In deterministic mode each worker folds its static partition
        and partials are combined by a fixed binary tree.
        """
        rng = IndexRange.of(rng)
        if len(rng) == 0:
            return identity
        if self._executor is None:
            result = identity
            for i in rng:
                result = combine(result, _invoke(map_fn, i))
            return result

        partials: List[V] = [identity] * self.workers
        deterministic = self.config.deterministic_reduce
        shared = None if deterministic else _Cursor(rng)

        def task(worker_id: int, run: _Run):
            acc = identity
            if deterministic:
                for i in static_partition(rng, worker_id, self.workers):
                    if run.abort.is_set():
                        return
                    acc = combine(acc, _invoke(map_fn, i))
            else:
                while not run.abort.is_set():
                    index = shared.take()
                    if index is None:
                        break
                    acc = combine(acc, _invoke(map_fn, index))
            partials[worker_id] = acc

        self._launch(task)

        if deterministic:
            return _tree_combine(partials, combine)
        result = identity
        for partial in partials:
            result = combine(result, partial)
        return result

    def spmd(self, body: Callable[[int, Barrier], Any]) -> None:
        """Run body(worker_id, barrier) on every worker; the barrier spans the whole group"""
        barrier = self.barrier()
        self._launch(lambda wid, run: _invoke(body, wid, barrier), on_abort=barrier.abort)

    def run_ordered(self, n_items: int, item: Callable[[int, _Run], None]) -> None:
        """
        Hand out items 0..n_items-1 in ascending order to the workers.

        Used by the pipeline: an item may block on items handed out before it,
        never on later ones.
        """
        if self._executor is None:
            self._launch(lambda wid, run: [item(i, run) for i in range(n_items)])
            return
        shared = _Cursor(IndexRange(0, n_items))

        def task(worker_id: int, run: _Run):
            while not run.abort.is_set():
                index = shared.take()
                if index is None:
                    return
                item(index, run)

        self._launch(task)


def _tree_combine(values: List[V], combine: Callable[[V, V], V]) -> V:
    level = list(values)
    while len(level) > 1:
        paired = [combine(level[i], level[i + 1]) for i in range(0, len(level) - 1, 2)]
        if len(level) % 2:
            paired.append(level[-1])
        level = paired
    return level[0]
