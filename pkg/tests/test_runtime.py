# tests/test_runtime.py
import threading

import numpy as np
import pytest

from error_handler import ConfigurationError, PipelineError, WorkerError
from runtime.pipeline import (
    ASCENDING, DESCENDING, TicketLog, check_ticket_log, ordered_pipeline,
)
from runtime.pool import (
    MIN_STACK_RESERVE, IndexRange, WorkerPool, WorkerPoolConfig, split_range, static_partition,
)


class TestPartitioning:

    def test_static_partition_covers_range(self):
        """Partitions are contiguous, disjoint and differ in size by at most one"""
        parts = [static_partition(IndexRange(3, 20), w, 5) for w in range(5)]
        assert parts[0].start == 3 and parts[-1].end == 20
        for left, right in zip(parts, parts[1:]):
            assert left.end == right.start
        sizes = [len(p) for p in parts]
        assert max(sizes) - min(sizes) <= 1

    def test_split_range_drops_empty_parts(self):
        """More parts than indices yields one part per index"""
        assert len(split_range(3, 8)) == 3

    def test_index_range_rejects_inverted(self):
        """start must not exceed end"""
        with pytest.raises(ValueError):
            IndexRange(5, 2)

    def test_of_coerces_ranges(self):
        """ints and unit-step ranges become IndexRange"""
        assert IndexRange.of(4) == IndexRange(0, 4)
        assert IndexRange.of(range(2, 6)) == IndexRange(2, 6)
        with pytest.raises(ValueError):
            IndexRange.of(range(0, 6, 2))


class TestWorkerPoolConfig:

    def test_zero_workers_rejected(self):
        """At least one worker"""
        with pytest.raises(ConfigurationError):
            WorkerPoolConfig(workers=0)

    def test_tiny_stack_reserve_rejected(self):
        """Nonzero reserves below the platform minimum are refused"""
        with pytest.raises(ConfigurationError):
            WorkerPoolConfig(workers=2, stack_reserve=1024)

    def test_stack_reserve_applied(self):
        """A pool starts with an explicit reserve and keeps it readable"""
        with WorkerPool(WorkerPoolConfig(workers=2, stack_reserve=4 * MIN_STACK_RESERVE)) as pool:
            assert pool.config.stack_reserve == 4 * MIN_STACK_RESERVE
            seen = []
            pool.par_map(4, lambda i: seen.append(i))
            assert sorted(seen) == [0, 1, 2, 3]

    def test_from_settings_prefers_arguments(self):
        """Explicit values win over environment defaults"""
        config = WorkerPoolConfig.from_settings(workers=3, stack_reserve=0)
        assert config.workers == 3
        assert config.stack_reserve == 0


class TestParMap:

    def test_every_index_once(self, pool):
        """par_map visits each index exactly once"""
        counts = np.zeros(1000, dtype=np.int64)
        lock = threading.Lock()

        def body(i):
            with lock:
                counts[i] += 1

        pool.par_map(1000, body)
        assert np.all(counts == 1)

    def test_empty_range_is_noop(self, pool):
        """Zero-length ranges run nothing"""
        pool.par_map(0, lambda i: pytest.fail("body ran"))

    def test_serial_pool_runs_in_order(self, serial_pool):
        """One worker executes indices ascending"""
        order = []
        serial_pool.par_map(range(5, 10), order.append)
        assert order == [5, 6, 7, 8, 9]

    def test_disjoint_writes(self, pool):
        """Each index writes its own row of the shared target"""
        target = np.zeros((64, 8))

        def body(j, out):
            out[j, :] = j

        pool.par_map_disjoint(64, target, body)
        assert np.array_equal(target[:, 0], np.arange(64))

    def test_body_failure_surfaces_as_worker_error(self, pool):
        """A failing body raises WorkerError carrying its index"""
        def body(i):
            if i == 17:
                raise RuntimeError("boom")

        with pytest.raises(WorkerError) as info:
            pool.par_map(100, body)
        assert info.value.index == 17

    def test_nested_primitives_rejected(self, pool):
        """Bodies may not open another parallel region"""
        with pytest.raises(ConfigurationError):
            pool.par_map(4, lambda i: pool.par_map(2, lambda j: None))

    def test_pool_usable_after_failure(self, pool):
        """A failed primitive leaves the pool ready for the next one"""
        with pytest.raises(WorkerError):
            pool.par_map(10, lambda i: 1 / 0)
        hits = []
        pool.par_map(3, hits.append)
        assert sorted(hits) == [0, 1, 2]


class TestParMapReduce:

    def test_sum(self, pool):
        """Integer sums are exact regardless of scheduling"""
        assert pool.par_map_reduce(1001, lambda i: i, 0, lambda a, b: a + b) == 500500

    def test_empty_returns_identity(self, pool):
        """An empty range folds to the identity"""
        assert pool.par_map_reduce(0, lambda i: i, 42, lambda a, b: a + b) == 42

    def test_deterministic_mode_is_repeatable(self, deterministic_pool):
        """Static partitions and a fixed tree give bit-identical float sums"""
        values = np.random.default_rng(1).standard_normal(5000)

        def total():
            return deterministic_pool.par_map_reduce(len(values), lambda i: float(values[i]), 0.0,
                                                     lambda a, b: a + b)

        first = total()
        assert all(total() == first for _ in range(5))
        assert first == pytest.approx(values.sum(), rel=1e-12)

    def test_tuple_combine(self, pool):
        """Non-scalar accumulators combine through the supplied function"""
        result = pool.par_map_reduce(10, lambda i: (i, 1), (0, 0), lambda a, b: (a[0] + b[0], a[1] + b[1]))
        assert result == (45, 10)


class TestSpmd:

    def test_barrier_separates_phases(self, pool):
        """No worker enters phase two before all finished phase one"""
        phase_one = []
        observed = []

        def body(worker_id, barrier):
            phase_one.append(worker_id)
            barrier.wait()
            observed.append(len(phase_one))

        pool.spmd(body)
        assert sorted(phase_one) == [0, 1, 2, 3]
        assert observed == [4, 4, 4, 4]

    def test_failure_releases_barrier(self, pool):
        """One worker failing aborts the barrier instead of deadlocking"""
        def body(worker_id, barrier):
            if worker_id == 0:
                raise RuntimeError("fail before barrier")
            barrier.wait()

        with pytest.raises(Exception):
            pool.spmd(body)


class TestOrderedPipeline:

    @pytest.mark.parametrize('direction', [ASCENDING, DESCENDING])
    def test_ticket_log_has_no_violations(self, pool, direction):
        """Every stage runs once after its plane and block predecessors"""
        log = TicketLog()
        ordered_pipeline(pool, range(1, 9), range(6), lambda k, b: None, direction, log)
        assert check_ticket_log(log, range(1, 9), range(6), direction) == []
        assert log.executions() == 8 * 6

    def test_wavefront_recurrence(self, pool):
        """A recurrence on the previous plane and block matches the serial result"""
        planes, blocks = 12, 5

        def compute(p):
            grid = np.zeros((planes + 1, blocks + 1))
            grid[0, :] = 1.0
            grid[:, 0] = 1.0

            def stage(k, b):
                grid[k, b] = grid[k - 1, b] + grid[k, b - 1] * 0.5

            ordered_pipeline(p, range(1, planes + 1), range(1, blocks + 1), stage)
            return grid

        with WorkerPool(WorkerPoolConfig(workers=1)) as serial:
            expected = compute(serial)
        assert np.array_equal(compute(pool), expected)

    def test_detects_out_of_order_log(self):
        """The validator flags a stage that started before its dependency finished"""
        log = TicketLog()
        log.record('start', 0, 1)
        log.record('finish', 0, 1)
        log.record('start', 0, 0)
        log.record('finish', 0, 0)
        assert check_ticket_log(log, 1, 2) != []

    def test_stage_failure_aborts(self, pool):
        """An exception in one stage stops the pipeline with a worker error"""
        def stage(k, b):
            if (k, b) == (2, 1):
                raise ValueError("bad stage")

        with pytest.raises(WorkerError):
            ordered_pipeline(pool, 5, 4, stage)

    def test_invalid_direction(self, pool):
        """Only ascending and descending sweeps exist"""
        with pytest.raises(ValueError):
            ordered_pipeline(pool, 2, 2, lambda k, b: None, 'sideways')

    def test_pipeline_error_is_worker_error(self):
        """PipelineError specializes WorkerError"""
        assert issubclass(PipelineError, WorkerError)
