# benchmarks/ft.py
"""
FT: spectral solution of a 3-D diffusion equation with complex FFTs.

The grid is stored C-ordered as [k, j, i] so that index(i, j, k) =
i + NX * (j + NY * k). Transforms are unnormalized in both directions;
the forward one uses the positive exponent.
"""
import logging
import math
from dataclasses import dataclass
from typing import List

import numpy as np

from common.jit import kernel
from common.params import ClassParams
from common.randdp import jump_seed, vranlc_kernel
from common.results import BenchmarkResult, build_result
from common.timers import TimerSet
from constants import FT_ALPHA, FT_CHECKSUM_POINTS, FT_SEED, LCG_MULTIPLIER
from runtime.pool import WorkerPool, split_range

logger = logging.getLogger(__name__)

FORWARD = 1
INVERSE = -1


@dataclass
class ExponentTable:
    """Per-mode decay factor exp(-4 alpha pi^2 |k|^2) on the [k, j, i] grid"""
    factors: np.ndarray

    @classmethod
    def build(cls, nx: int, ny: int, nz: int, alpha: float = FT_ALPHA) -> 'ExponentTable':
        ap = -4.0 * alpha * math.pi * math.pi

        def centered(n):
            idx = np.arange(n)
            return ((idx + n // 2) % n) - n // 2

        ii = centered(nx).astype(np.float64)
        jj = centered(ny).astype(np.float64)
        kk = centered(nz).astype(np.float64)
        k2 = kk[:, None, None] ** 2 + jj[None, :, None] ** 2 + ii[None, None, :] ** 2
        return cls(np.exp(ap * k2))


def roots_of_unity(n: int, direction: int) -> np.ndarray:
    """exp(direction * 2 pi i m / n) for m < n / 2"""
    m = np.arange(max(n // 2, 1))
    return np.exp(direction * 2j * np.pi * m / n)


# ---------------------------------------------------------------------------
# 1-D transforms
# ---------------------------------------------------------------------------

@kernel
def _stockham(x, y, roots):
    """In-place radix-2 Stockham transform of x (length power of two); y is scratch"""
    n_total = x.shape[0]
    n = n_total
    s = 1
    src = x
    dst = y
    stages = 0
    while n >= 2:
        m = n // 2
        stride = n_total // n
        for p in range(m):
            wp = roots[p * stride]
            for q in range(s):
                a = src[q + s * p]
                b = src[q + s * (p + m)]
                dst[q + s * 2 * p] = a + b
                dst[q + s * (2 * p + 1)] = (a - b) * wp
        n = m
        s *= 2
        src, dst = dst, src
        stages += 1
    if stages % 2 == 1:
        for i in range(n_total):
            x[i] = src[i]


@kernel
def _fft_plane_dim1(grid, k, roots):
    ny, nx = grid.shape[1], grid.shape[2]
    x = np.empty(nx, dtype=np.complex128)
    y = np.empty(nx, dtype=np.complex128)
    for j in range(ny):
        for i in range(nx):
            x[i] = grid[k, j, i]
        _stockham(x, y, roots)
        for i in range(nx):
            grid[k, j, i] = x[i]


@kernel
def _fft_plane_dim2(grid, k, roots):
    ny, nx = grid.shape[1], grid.shape[2]
    x = np.empty(ny, dtype=np.complex128)
    y = np.empty(ny, dtype=np.complex128)
    for i in range(nx):
        for j in range(ny):
            x[j] = grid[k, j, i]
        _stockham(x, y, roots)
        for j in range(ny):
            grid[k, j, i] = x[j]


@kernel
def _fft_slab_dim3(grid, j, roots):
    nz, nx = grid.shape[0], grid.shape[2]
    x = np.empty(nz, dtype=np.complex128)
    y = np.empty(nz, dtype=np.complex128)
    for i in range(nx):
        for k in range(nz):
            x[k] = grid[k, j, i]
        _stockham(x, y, roots)
        for k in range(nz):
            grid[k, j, i] = x[k]


def fft_dim(grid: np.ndarray, dim: int, direction: int, pool: WorkerPool) -> None:
    """Transform every pencil of ``grid`` along dim (1 = i, 2 = j, 3 = k) in place"""
    nz, ny, nx = grid.shape
    if dim == 1:
        roots = roots_of_unity(nx, direction)
        pool.par_map(nz, lambda k: _fft_plane_dim1(grid, k, roots))
    elif dim == 2:
        roots = roots_of_unity(ny, direction)
        pool.par_map(nz, lambda k: _fft_plane_dim2(grid, k, roots))
    elif dim == 3:
        roots = roots_of_unity(nz, direction)

        # slab j reads and writes grid[:, j, :] only; j is the parallel index
        def slab(j, target):
            _fft_slab_dim3(target, j, roots)

        pool.par_map_disjoint(ny, grid, slab)
    else:
        raise ValueError(f"dim must be 1, 2 or 3, got {dim}")


def fft3d(grid: np.ndarray, direction: int, pool: WorkerPool) -> None:
    dims = (1, 2, 3) if direction == FORWARD else (3, 2, 1)
    for dim in dims:
        fft_dim(grid, dim, direction, pool)


# ---------------------------------------------------------------------------
# initial conditions, evolution and checksum
# ---------------------------------------------------------------------------

@kernel
def _fill_plane(grid, k, seed, a):
    ny, nx = grid.shape[1], grid.shape[2]
    buf = np.empty(2 * nx * ny, dtype=np.float64)
    vranlc_kernel(2 * nx * ny, seed, a, buf, 0)
    m = 0
    for j in range(ny):
        for i in range(nx):
            grid[k, j, i] = complex(buf[m], buf[m + 1])
            m += 2


def compute_initial_conditions(grid: np.ndarray, pool: WorkerPool, seed: float = FT_SEED,
                               a: float = LCG_MULTIPLIER) -> None:
    """Uniform complex values; plane k starts 2*NX*NY*k draws into the stream"""
    nz, ny, nx = grid.shape
    per_plane = 2 * nx * ny
    pool.par_map(nz, lambda k: _fill_plane(grid, k, jump_seed(seed, a, per_plane * k), a))


@kernel
def _evolve_plane(u0, u1, factors, k, step):
    ny, nx = u0.shape[1], u0.shape[2]
    for j in range(ny):
        for i in range(nx):
            u1[k, j, i] = u0[k, j, i] * factors[k, j, i] ** step


def evolve(u0: np.ndarray, u1: np.ndarray, step: int, table: ExponentTable, pool: WorkerPool) -> None:
    """u1 = u0 * factor^step"""
    pool.par_map(u0.shape[0], lambda k: _evolve_plane(u0, u1, table.factors, k, float(step)))


@kernel
def _checksum_points(grid, lo, hi):
    nz, ny, nx = grid.shape
    acc = 0.0 + 0.0j
    for j in range(lo, hi):
        acc += grid[(5 * j) % nz, (3 * j) % ny, j % nx]
    return acc


def checksum(grid: np.ndarray, pool: WorkerPool) -> complex:
    points = split_range(range(1, FT_CHECKSUM_POINTS + 1), pool.workers)
    total = pool.par_map_reduce(
        len(points),
        lambda c: complex(_checksum_points(grid, points[c].start, points[c].end)),
        0j, lambda s, t: s + t)
    return total / grid.size


def verify(params: ClassParams, sums: List[complex]) -> bool:
    refs = params.reference['checksums']
    if len(sums) != len(refs):
        return False
    for value, (re, im) in zip(sums, refs):
        ref = complex(re, im)
        err = abs(value - ref) / abs(ref)
        if not math.isfinite(err) or err > params.epsilon:
            return False
    return True


def run(params: ClassParams, pool: WorkerPool, timers_enabled: bool = None) -> BenchmarkResult:
    timers = TimerSet.for_run(['benchmark', 'fft', 'evolve', 'checksum'], timers_enabled)
    nx, ny, nz = params.dims
    u0 = np.zeros((nz, ny, nx), dtype=np.complex128)
    u1 = np.zeros_like(u0)
    table = ExponentTable.build(nx, ny, nz)

    # one untimed pass through every kernel of the timed loop
    compute_initial_conditions(u0, pool)
    fft3d(u0, FORWARD, pool)
    evolve(u0, u1, 1, table, pool)
    fft3d(u1, INVERSE, pool)
    checksum(u1, pool)
    compute_initial_conditions(u0, pool)

    sums: List[complex] = []
    timers.start('benchmark')
    with timers.phase('fft'):
        fft3d(u0, FORWARD, pool)
    for step in range(1, params.niter + 1):
        with timers.phase('evolve'):
            evolve(u0, u1, step, table, pool)
        with timers.phase('fft'):
            fft3d(u1, INVERSE, pool)
        with timers.phase('checksum'):
            sums.append(checksum(u1, pool))
        logger.debug("FT T = %5d     Checksum = %22.12e %22.12e", step, sums[-1].real, sums[-1].imag)
    timers.stop('benchmark')

    verified = verify(params, sums)
    return build_result(params, pool.workers, timers.read('benchmark'), verified, timers,
                        details={'checksums': [[c.real, c.imag] for c in sums]})
