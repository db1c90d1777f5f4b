# benchmarks/is_sort.py
"""
IS: integer key ranking by bucket sort.

Keys are first distributed into 2^B buckets by their high bits. Histograms
are built per static partition in worker-private rows, so the bucket-sorted
sequence (and every rank) is the same for any worker count. Ranking then
counts keys per value bucket by bucket and turns the counts into cumulative
positions: after ranking, key_buff1[k] is the number of keys <= k.
"""
import logging
from dataclasses import dataclass, field
from typing import List

import numpy as np

from common.jit import kernel
from common.params import ClassParams
from common.randdp import jump_seed, randlc_kernel
from common.results import BenchmarkResult, build_result
from common.timers import TimerSet
from constants import IS_ITERATIONS, IS_SEED, IS_TEST_ARRAY_SIZE, LCG_MULTIPLIER
from runtime.pool import WorkerPool, split_range, static_partition

logger = logging.getLogger(__name__)

# bucket blocks handed out per worker during the per-bucket ranking pass
BLOCKS_PER_WORKER = 4


@kernel
def _generate_keys(seed, a, max_key, keys, lo, hi):
    quarter = max_key // 4
    x = seed
    for i in range(lo, hi):
        r, x = randlc_kernel(x, a)
        acc = r
        r, x = randlc_kernel(x, a)
        acc += r
        r, x = randlc_kernel(x, a)
        acc += r
        r, x = randlc_kernel(x, a)
        acc += r
        keys[i] = int(quarter * acc)


@kernel
def _bucket_histogram(keys, lo, hi, shift, counts):
    for b in range(counts.shape[0]):
        counts[b] = 0
    for i in range(lo, hi):
        counts[keys[i] >> shift] += 1


@kernel
def _scatter(keys, lo, hi, shift, ptrs, out):
    for i in range(lo, hi):
        k = keys[i]
        b = k >> shift
        out[ptrs[b]] = k
        ptrs[b] += 1


@kernel
def _rank_buckets(key_buff2, bucket_start, bucket_keys, b_lo, b_hi, key_buff1):
    for b in range(b_lo, b_hi):
        k1 = b * bucket_keys
        k2 = k1 + bucket_keys
        for k in range(k1, k2):
            key_buff1[k] = 0
        for i in range(bucket_start[b], bucket_start[b + 1]):
            key_buff1[key_buff2[i]] += 1
        key_buff1[k1] += bucket_start[b]
        for k in range(k1 + 1, k2):
            key_buff1[k] += key_buff1[k - 1]


@kernel
def _place_sorted(key_buff2, lo, hi, positions, out):
    for i in range(lo, hi):
        k = key_buff2[i]
        positions[k] -= 1
        out[positions[k]] = k


@kernel
def _count_inversions(values, lo, hi):
    count = 0
    for j in range(max(lo, 1), hi):
        if values[j - 1] > values[j]:
            count += 1
    return count


@dataclass
class RankState:
    keys: np.ndarray
    max_key_log2: int
    buckets_log2: int
    key_buff1: np.ndarray = None
    key_buff2: np.ndarray = None
    bucket_start: np.ndarray = None
    passed: int = 0
    failures: List[str] = field(default_factory=list)

    def __post_init__(self):
        if self.buckets_log2 > self.max_key_log2:
            raise ValueError("more buckets than key values")
        if self.key_buff1 is None:
            self.key_buff1 = np.zeros(self.max_key, dtype=np.int64)
        if self.key_buff2 is None:
            self.key_buff2 = np.zeros_like(self.keys)
        if self.bucket_start is None:
            self.bucket_start = np.zeros(self.num_buckets + 1, dtype=np.int64)

    @property
    def max_key(self) -> int:
        return 1 << self.max_key_log2

    @property
    def num_buckets(self) -> int:
        return 1 << self.buckets_log2

    @property
    def shift(self) -> int:
        return self.max_key_log2 - self.buckets_log2

    def rank_of(self, key: int) -> int:
        """Number of keys strictly smaller than ``key``"""
        return int(self.key_buff1[key - 1]) if key > 0 else 0


def create_seq(n: int, max_key: int, pool: WorkerPool, seed: float = IS_SEED,
               a: float = LCG_MULTIPLIER) -> np.ndarray:
    """Keys from four summed uniforms; each partition jumps 4*start draws into the stream"""
    keys = np.zeros(n, dtype=np.int64)
    parts = split_range(n, pool.workers)

    # partition p writes keys[start:end] of its own range
    def body(p, target):
        part = parts[p]
        _generate_keys(jump_seed(seed, a, 4 * part.start), a, max_key, target, part.start, part.end)

    pool.par_map_disjoint(len(parts), keys, body)
    return keys


def rank_keys(state: RankState, pool: WorkerPool) -> None:
    """Bucket-sort state.keys into key_buff2 and fill the cumulative counts in key_buff1"""
    n = len(state.keys)
    workers = pool.workers
    counts = np.zeros((workers, state.num_buckets), dtype=np.int64)

    # worker w writes only counts[w]
    def histogram(w, target):
        part = static_partition(n, w, workers)
        _bucket_histogram(state.keys, part.start, part.end, state.shift, target[w])

    pool.par_map_disjoint(workers, counts, histogram)

    totals = counts.sum(axis=0)
    state.bucket_start[0] = 0
    np.cumsum(totals, out=state.bucket_start[1:])
    # partition w starts each bucket after the partitions before it
    offsets = state.bucket_start[:-1] + np.cumsum(counts, axis=0) - counts

    # the prefix offsets give every partition its own slot window inside each bucket
    def scatter(w, target):
        part = static_partition(n, w, workers)
        _scatter(state.keys, part.start, part.end, state.shift, offsets[w].copy(), target)

    pool.par_map_disjoint(workers, state.key_buff2, scatter)

    blocks = split_range(state.num_buckets, workers * BLOCKS_PER_WORKER)
    bucket_keys = 1 << state.shift

    # bucket block covers key values [b_lo * bucket_keys, b_hi * bucket_keys) only
    def rank_block(i, target):
        _rank_buckets(state.key_buff2, state.bucket_start, bucket_keys,
                      blocks[i].start, blocks[i].end, target)

    pool.par_map_disjoint(len(blocks), state.key_buff1, rank_block)


def partial_verify(state: RankState, tag: str, iteration: int, test_index, test_rank,
                   sampled_keys) -> None:
    """Check the ranks of the sampled keys against the class's shifted test ranks"""
    n = len(state.keys)
    for i in range(IS_TEST_ARRAY_SIZE):
        k = int(sampled_keys[i])
        if not 0 < k <= n - 1:
            continue
        expected = _expected_rank(tag, i, iteration, test_rank[i])
        actual = state.rank_of(k)
        if actual == expected:
            state.passed += 1
        else:
            state.failures.append(
                f"iteration {iteration}, test {i}: rank {actual} != {expected} (key index {test_index[i]})")


def _expected_rank(tag: str, i: int, iteration: int, base: int) -> int:
    if tag == 'S':
        return base + iteration if i <= 2 else base - iteration
    if tag == 'W':
        return base + (iteration - 2) if i < 2 else base - iteration
    if tag == 'A':
        return base + (iteration - 1) if i <= 2 else base - (iteration - 1)
    if tag == 'B':
        return base + iteration if i in (1, 2, 4) else base - iteration
    return base + iteration if i <= 2 else base - iteration


def rank(state: RankState, iteration: int, pool: WorkerPool, params: ClassParams) -> None:
    """One timed ranking: mutate two keys, rank, and partially verify"""
    state.keys[iteration] = iteration
    state.keys[iteration + IS_ITERATIONS] = state.max_key - iteration
    test_index = params.reference['test_index']
    sampled_keys = [state.keys[idx] for idx in test_index]
    rank_keys(state, pool)
    partial_verify(state, params.tag, iteration, test_index, params.reference['test_rank'], sampled_keys)


def full_verify(state: RankState, pool: WorkerPool) -> int:
    """Rebuild the sorted sequence from the ranks; returns the count of adjacent inversions"""
    n = len(state.keys)
    positions = state.key_buff1.copy()
    ordered = np.zeros(n, dtype=state.keys.dtype)
    blocks = split_range(state.num_buckets, pool.workers * BLOCKS_PER_WORKER)

    # a bucket block only decrements the positions of its own key values,
    # which point into that block's slot window of ``ordered``
    def place(i, target):
        lo = state.bucket_start[blocks[i].start]
        hi = state.bucket_start[blocks[i].end]
        _place_sorted(state.key_buff2, lo, hi, positions, target)

    pool.par_map_disjoint(len(blocks), ordered, place)

    chunks = split_range(n, pool.workers * BLOCKS_PER_WORKER)
    inversions = pool.par_map_reduce(
        len(chunks),
        lambda c: int(_count_inversions(ordered, chunks[c].start, chunks[c].end)),
        0, lambda s, t: s + t)
    state.keys = ordered
    return inversions


def run(params: ClassParams, pool: WorkerPool, timers_enabled: bool = None) -> BenchmarkResult:
    timers = TimerSet.for_run(['benchmark', 'ranking', 'verify'], timers_enabled)
    n = params.dims[0]
    max_key_log2 = params.extra['max_key_log2']

    keys = create_seq(n, 1 << max_key_log2, pool)
    state = RankState(keys, max_key_log2, params.extra['buckets_log2'])

    rank(state, 1, pool, params)
    state.passed = 0
    state.failures.clear()

    timers.start('benchmark')
    with timers.phase('ranking'):
        for iteration in range(1, IS_ITERATIONS + 1):
            rank(state, iteration, pool, params)
            logger.debug("IS iteration %2d", iteration)
    timers.stop('benchmark')

    with timers.phase('verify'):
        inversions = full_verify(state, pool)
    if inversions == 0:
        state.passed += 1

    for failure in state.failures:
        logger.debug("IS partial verification failed: %s", failure)
    verified = state.passed == IS_TEST_ARRAY_SIZE * IS_ITERATIONS + 1
    return build_result(params, pool.workers, timers.read('benchmark'), verified, timers,
                        details={'passed': state.passed, 'inversions': inversions})
