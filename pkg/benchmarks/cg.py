# benchmarks/cg.py
"""
CG: inverse power method for the smallest eigenvalue of a random sparse
symmetric positive-definite matrix.

Each outer iteration runs 25 unpreconditioned conjugate-gradient steps on
A z = x, then sets zeta = shift + 1 / (x . z) and x = z / |z|.
"""
import logging
import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from common.jit import kernel
from common.params import ClassParams
from common.randdp import RandomStream, randlc_kernel
from common.results import BenchmarkResult, build_result
from common.timers import TimerSet
from common.verify import verify_scalar
from constants import CG_INNER_ITERATIONS, CG_SEED, LCG_MULTIPLIER
from runtime.pool import IndexRange, WorkerPool, split_range

logger = logging.getLogger(__name__)

# row blocks handed out per worker by the parallel vector operations
BLOCKS_PER_WORKER = 4


@dataclass
class SparseMatrixCSR:
    rowstr: np.ndarray  # int64, length n + 1
    colidx: np.ndarray  # int64, length nnz
    values: np.ndarray  # float64, length nnz

    @property
    def n(self) -> int:
        return len(self.rowstr) - 1

    @property
    def nnz(self) -> int:
        return int(self.rowstr[-1])

    def check(self) -> List[str]:
        """Structural problems of the CSR arrays (empty when valid)"""
        problems = []
        if self.rowstr[0] != 0 or np.any(np.diff(self.rowstr) < 0):
            problems.append("row offsets are not nondecreasing from 0")
        if len(self.colidx) < self.nnz or len(self.values) < self.nnz:
            problems.append("column/value arrays shorter than nnz")
            return problems
        cols = self.colidx[:self.nnz]
        if np.any(cols < 0) or np.any(cols >= self.n):
            problems.append("column index out of range")
        for row in range(self.n):
            seg = self.colidx[self.rowstr[row]:self.rowstr[row + 1]]
            if np.any(np.diff(seg) <= 0):
                problems.append(f"row {row} columns not strictly ascending")
                break
        return problems


@dataclass
class CGState:
    x: np.ndarray
    z: np.ndarray
    p: np.ndarray
    q: np.ndarray
    r: np.ndarray
    zeta: float = 0.0
    rnorm: float = 0.0

    @classmethod
    def ones(cls, n: int) -> 'CGState':
        return cls(x=np.ones(n), z=np.zeros(n), p=np.zeros(n), q=np.zeros(n), r=np.zeros(n))

    def reset(self):
        self.x[:] = 1.0
        self.zeta = 0.0


# ---------------------------------------------------------------------------
# matrix generation
# ---------------------------------------------------------------------------

@kernel
def _sprnvc(n, nz, nn1, v, iv, tran, amult):
    """Random sparse vector with nz distinct 1-based positions in [1, n]"""
    nzv = 0
    while nzv < nz:
        vecelt, tran = randlc_kernel(tran, amult)
        vecloc, tran = randlc_kernel(tran, amult)
        i = int(nn1 * vecloc) + 1
        if i > n:
            continue
        seen = False
        for ii in range(nzv):
            if iv[ii] == i:
                seen = True
                break
        if seen:
            continue
        v[nzv] = vecelt
        iv[nzv] = i
        nzv += 1
    return tran


@kernel
def _vecset(v, iv, nzv, i, val):
    found = False
    for k in range(nzv):
        if iv[k] == i:
            v[k] = val
            found = True
    if not found:
        v[nzv] = val
        iv[nzv] = i
        nzv += 1
    return nzv


@kernel
def _sparse(n, nz, nonzer, arow, acol, aelt, rcond, shift):
    """Assemble the outer-product element lists into CSR, summing duplicates"""
    width = nonzer + 1
    rowstr = np.zeros(n + 1, dtype=np.int64)
    for i in range(n):
        for nza in range(arow[i]):
            j = acol[i * width + nza] + 1
            rowstr[j] += arow[i]
    for j in range(1, n + 1):
        rowstr[j] += rowstr[j - 1]

    a = np.zeros(max(nz, rowstr[n]), dtype=np.float64)
    colidx = np.full(max(nz, rowstr[n]), -1, dtype=np.int64)
    nzloc = np.zeros(n, dtype=np.int64)

    size = 1.0
    ratio = rcond ** (1.0 / n)
    for i in range(n):
        for nza in range(arow[i]):
            j = acol[i * width + nza]
            scale = size * aelt[i * width + nza]
            for nzrow in range(arow[i]):
                jcol = acol[i * width + nzrow]
                va = aelt[i * width + nzrow] * scale
                if jcol == j and j == i:
                    va = va + rcond - shift

                slot = -1
                for k in range(rowstr[j], rowstr[j + 1]):
                    if colidx[k] > jcol:
                        for kk in range(rowstr[j + 1] - 2, k - 1, -1):
                            if colidx[kk] > -1:
                                a[kk + 1] = a[kk]
                                colidx[kk + 1] = colidx[kk]
                        colidx[k] = jcol
                        a[k] = 0.0
                        slot = k
                        break
                    elif colidx[k] == -1:
                        colidx[k] = jcol
                        slot = k
                        break
                    elif colidx[k] == jcol:
                        nzloc[j] += 1
                        slot = k
                        break
                a[slot] += va
        size *= ratio

    for j in range(1, n):
        nzloc[j] += nzloc[j - 1]
    for j in range(n):
        j1 = rowstr[j] - nzloc[j - 1] if j > 0 else 0
        j2 = rowstr[j + 1] - nzloc[j]
        nza = rowstr[j]
        for k in range(j1, j2):
            a[k] = a[nza]
            colidx[k] = colidx[nza]
            nza += 1
    for j in range(1, n + 1):
        rowstr[j] -= nzloc[j - 1]

    nnz = rowstr[n]
    return rowstr, colidx[:nnz].copy(), a[:nnz].copy()


@kernel
def _makea(n, nonzer, rcond, shift, tran, amult):
    width = nonzer + 1
    arow = np.zeros(n, dtype=np.int64)
    acol = np.zeros(n * width, dtype=np.int64)
    aelt = np.zeros(n * width, dtype=np.float64)
    ivc = np.zeros(width, dtype=np.int64)
    vc = np.zeros(width, dtype=np.float64)

    nn1 = 1
    while True:
        nn1 *= 2
        if nn1 >= n:
            break

    for iouter in range(n):
        tran = _sprnvc(n, nonzer, nn1, vc, ivc, tran, amult)
        nzv = _vecset(vc, ivc, nonzer, iouter + 1, 0.5)
        arow[iouter] = nzv
        for ivelt in range(nzv):
            acol[iouter * width + ivelt] = ivc[ivelt] - 1
            aelt[iouter * width + ivelt] = vc[ivelt]

    rowstr, colidx, a = _sparse(n, n * width * width, nonzer, arow, acol, aelt, rcond, shift)
    return rowstr, colidx, a, tran


def makea(params: ClassParams, stream: RandomStream) -> SparseMatrixCSR:
    """Generate the class matrix; ``stream`` is advanced past every draw used"""
    n = params.dims[0]
    rowstr, colidx, values, stream.x = _makea(n, params.extra['nonzer'], params.extra['rcond'],
                                              float(params.extra['shift']), stream.x, stream.a)
    stream.x = float(stream.x)
    return SparseMatrixCSR(rowstr, colidx, values)


# ---------------------------------------------------------------------------
# parallel vector operations
# ---------------------------------------------------------------------------

@kernel
def _spmv_rows(rowstr, colidx, a, v, out, lo, hi):
    for j in range(lo, hi):
        acc = 0.0
        for k in range(rowstr[j], rowstr[j + 1]):
            acc += a[k] * v[colidx[k]]
        out[j] = acc


@kernel
def _dot_rows(u, v, lo, hi):
    acc = 0.0
    for j in range(lo, hi):
        acc += u[j] * v[j]
    return acc


@kernel
def _residual_sq_rows(x, az, lo, hi):
    acc = 0.0
    for j in range(lo, hi):
        d = x[j] - az[j]
        acc += d * d
    return acc


class _Vectors:
    """Row-block view of the CG vector operations on one pool"""

    def __init__(self, pool: WorkerPool, n: int):
        self.pool = pool
        self.blocks: List[IndexRange] = split_range(n, pool.workers * BLOCKS_PER_WORKER)

    def spmv(self, matrix: SparseMatrixCSR, v: np.ndarray, out: np.ndarray):
        # each block writes only out[lo:hi] of its own rows
        def body(b, target):
            blk = self.blocks[b]
            _spmv_rows(matrix.rowstr, matrix.colidx, matrix.values, v, target, blk.start, blk.end)

        self.pool.par_map_disjoint(len(self.blocks), out, body)

    def dot(self, u: np.ndarray, v: np.ndarray) -> float:
        return self.pool.par_map_reduce(
            len(self.blocks),
            lambda b: _dot_rows(u, v, self.blocks[b].start, self.blocks[b].end),
            0.0, lambda s, t: s + t)

    def sum_sq_diff(self, x: np.ndarray, y: np.ndarray) -> float:
        return self.pool.par_map_reduce(
            len(self.blocks),
            lambda b: _residual_sq_rows(x, y, self.blocks[b].start, self.blocks[b].end),
            0.0, lambda s, t: s + t)

    def update(self, body):
        """par_map of body(lo, hi) over row blocks; body touches only [lo, hi)"""
        self.pool.par_map(len(self.blocks), lambda b: body(self.blocks[b].start, self.blocks[b].end))


def conj_grad(matrix: SparseMatrixCSR, state: CGState, vectors: _Vectors,
              iterations: int = CG_INNER_ITERATIONS) -> float:
    """Approximately solve A z = x from z = 0; returns |x - A z|"""
    x, z, p, q, r = state.x, state.z, state.p, state.q, state.r

    def start(lo, hi):
        q[lo:hi] = 0.0
        z[lo:hi] = 0.0
        r[lo:hi] = x[lo:hi]
        p[lo:hi] = x[lo:hi]

    vectors.update(start)
    rho = vectors.dot(r, r)

    for _ in range(iterations):
        vectors.spmv(matrix, p, q)
        d = vectors.dot(p, q)
        if d == 0.0:
            # residual vanished; remaining iterations would leave z unchanged
            break
        alpha = rho / d
        rho0 = rho

        def step(lo, hi, alpha=alpha):
            z[lo:hi] += alpha * p[lo:hi]
            r[lo:hi] -= alpha * q[lo:hi]

        vectors.update(step)
        rho = vectors.dot(r, r)
        beta = rho / rho0

        def direction(lo, hi, beta=beta):
            p[lo:hi] = r[lo:hi] + beta * p[lo:hi]

        vectors.update(direction)

    vectors.spmv(matrix, z, r)
    state.rnorm = math.sqrt(vectors.sum_sq_diff(x, r))
    return state.rnorm


def outer_iteration(matrix: SparseMatrixCSR, state: CGState, vectors: _Vectors,
                    shift: float) -> Tuple[float, float]:
    """One inverse-power step; returns (rnorm, zeta)"""
    rnorm = conj_grad(matrix, state, vectors)
    x_dot_z = vectors.dot(state.x, state.z)
    scale = 1.0 / math.sqrt(vectors.dot(state.z, state.z))
    state.zeta = shift + 1.0 / x_dot_z

    def normalize(lo, hi):
        state.x[lo:hi] = scale * state.z[lo:hi]

    vectors.update(normalize)
    return rnorm, state.zeta


def outer_loop(matrix: SparseMatrixCSR, state: CGState, vectors: _Vectors, niter: int,
               shift: float, history: List[Tuple[float, float]] = None) -> float:
    for it in range(1, niter + 1):
        rnorm, zeta = outer_iteration(matrix, state, vectors, shift)
        logger.debug("CG iteration %5d  ||r|| %20.14e  zeta %20.13e", it, rnorm, zeta)
        if history is not None:
            history.append((rnorm, zeta))
    return state.zeta


def initial_stream() -> RandomStream:
    """Stream at the matrix seed; the first draw is consumed before generation"""
    stream = RandomStream(CG_SEED, LCG_MULTIPLIER)
    stream.randlc()
    return stream


def run(params: ClassParams, pool: WorkerPool, timers_enabled: bool = None) -> BenchmarkResult:
    timers = TimerSet.for_run(['benchmark', 'conj_grad'], timers_enabled)
    shift = float(params.extra['shift'])

    matrix = makea(params, initial_stream())
    state = CGState.ones(matrix.n)
    vectors = _Vectors(pool, matrix.n)
    logger.debug("CG matrix order %d, nnz %d", matrix.n, matrix.nnz)

    outer_iteration(matrix, state, vectors, shift)
    state.reset()

    history: List[Tuple[float, float]] = []
    timers.start('benchmark')
    with timers.phase('conj_grad'):
        zeta = outer_loop(matrix, state, vectors, params.niter, shift, history)
    timers.stop('benchmark')

    verified = verify_scalar(zeta, params.reference['zeta'], params.epsilon)
    return build_result(params, pool.workers, timers.read('benchmark'), verified, timers,
                        details={'zeta': zeta, 'rnorm': state.rnorm, 'nnz': matrix.nnz})

