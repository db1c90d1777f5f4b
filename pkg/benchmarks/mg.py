# benchmarks/mg.py
"""
MG: V-cycle multigrid for a 3-D Poisson problem with periodic boundaries.

Every level of a hierarchy lives in one flat float64 array. Level k has
2^k interior points per axis plus one ghost layer on each side, and the
point (i1, i2, i3) of level k sits at offset[k] + i1 + m1 * (i2 + m2 * i3).
All stencil passes run over i3 planes; each plane writes only itself.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

from common.jit import kernel
from common.params import ClassParams
from common.randdp import jump_seed, vranlc_kernel
from common.results import BenchmarkResult, build_result
from common.timers import TimerSet
from common.verify import verify_scalar
from constants import LCG_MULTIPLIER, MG_EXTREMES, MG_SEED
from runtime.pool import WorkerPool

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GridLevel:
    data: np.ndarray
    offset: int
    m1: int
    m2: int
    m3: int
    k: int

    @property
    def size(self) -> int:
        return self.m1 * self.m2 * self.m3

    def index(self, i1: int, i2: int, i3: int) -> int:
        return self.offset + i1 + self.m1 * (i2 + self.m2 * i3)

    def view(self) -> np.ndarray:
        """[i3, i2, i1] view of this level's storage window"""
        return self.data[self.offset:self.offset + self.size].reshape(self.m3, self.m2, self.m1)


@dataclass
class HierarchicalGrid:
    data: np.ndarray
    lt: int
    dims: Dict[int, Tuple[int, int, int]] = field(default_factory=dict)
    offsets: Dict[int, int] = field(default_factory=dict)

    @classmethod
    def allocate(cls, lt: int, lowest: int = 1) -> 'HierarchicalGrid':
        """Levels lowest..lt, finest first in storage"""
        dims, offsets, total = {}, {}, 0
        for k in range(lt, lowest - 1, -1):
            m = (1 << k) + 2
            dims[k] = (m, m, m)
            offsets[k] = total
            total += m * m * m
        return cls(np.zeros(total), lt, dims, offsets)

    def level(self, k: int) -> GridLevel:
        m1, m2, m3 = self.dims[k]
        return GridLevel(self.data, self.offsets[k], m1, m2, m3, k)

    def zero(self, k: int = None):
        if k is None:
            self.data[:] = 0.0
        else:
            self.level(k).view()[:] = 0.0


# ---------------------------------------------------------------------------
# plane kernels
# ---------------------------------------------------------------------------

@kernel
def _resid_plane(u, uo, v, vo, r, ro, n1, n2, i3, a0, a1, a2, a3):
    u1 = np.empty(n1)
    u2 = np.empty(n1)
    p = n1 * n2
    for i2 in range(1, n2 - 1):
        c = i3 * p + i2 * n1
        for i1 in range(n1):
            u1[i1] = (u[uo + c - n1 + i1] + u[uo + c + n1 + i1]
                      + u[uo + c - p + i1] + u[uo + c + p + i1])
            u2[i1] = (u[uo + c - p - n1 + i1] + u[uo + c - p + n1 + i1]
                      + u[uo + c + p - n1 + i1] + u[uo + c + p + n1 + i1])
        for i1 in range(1, n1 - 1):
            r[ro + c + i1] = (v[vo + c + i1]
                              - a0 * u[uo + c + i1]
                              - a1 * (u[uo + c + i1 - 1] + u[uo + c + i1 + 1] + u1[i1])
                              - a2 * (u2[i1] + u1[i1 - 1] + u1[i1 + 1])
                              - a3 * (u2[i1 - 1] + u2[i1 + 1]))


@kernel
def _psinv_plane(r, ro, u, uo, n1, n2, i3, c0, c1, c2, c3):
    r1 = np.empty(n1)
    r2 = np.empty(n1)
    p = n1 * n2
    for i2 in range(1, n2 - 1):
        c = i3 * p + i2 * n1
        for i1 in range(n1):
            r1[i1] = (r[ro + c - n1 + i1] + r[ro + c + n1 + i1]
                      + r[ro + c - p + i1] + r[ro + c + p + i1])
            r2[i1] = (r[ro + c - p - n1 + i1] + r[ro + c - p + n1 + i1]
                      + r[ro + c + p - n1 + i1] + r[ro + c + p + n1 + i1])
        for i1 in range(1, n1 - 1):
            u[uo + c + i1] = (u[uo + c + i1]
                              + c0 * r[ro + c + i1]
                              + c1 * (r[ro + c + i1 - 1] + r[ro + c + i1 + 1] + r1[i1])
                              + c2 * (r2[i1] + r1[i1 - 1] + r1[i1 + 1])
                              + c3 * (r2[i1 - 1] + r2[i1 + 1]))


@kernel
def _rprj3_plane(r, ro, m1k, m2k, s, so, m1j, m2j, j3):
    x1 = np.empty(m1k)
    y1 = np.empty(m1k)
    pk = m1k * m2k
    pj = m1j * m2j
    i3 = 2 * j3 - 1
    for j2 in range(1, m2j - 1):
        i2 = 2 * j2 - 1
        for j1 in range(1, m1j):
            i1 = 2 * j1 - 1
            x1[i1] = (r[ro + i1 + m1k * i2 + pk * (i3 + 1)] + r[ro + i1 + m1k * (i2 + 2) + pk * (i3 + 1)]
                      + r[ro + i1 + m1k * (i2 + 1) + pk * i3] + r[ro + i1 + m1k * (i2 + 1) + pk * (i3 + 2)])
            y1[i1] = (r[ro + i1 + m1k * i2 + pk * i3] + r[ro + i1 + m1k * i2 + pk * (i3 + 2)]
                      + r[ro + i1 + m1k * (i2 + 2) + pk * i3] + r[ro + i1 + m1k * (i2 + 2) + pk * (i3 + 2)])
        for j1 in range(1, m1j - 1):
            i1 = 2 * j1 - 1
            y2 = (r[ro + i1 + 1 + m1k * i2 + pk * i3] + r[ro + i1 + 1 + m1k * i2 + pk * (i3 + 2)]
                  + r[ro + i1 + 1 + m1k * (i2 + 2) + pk * i3] + r[ro + i1 + 1 + m1k * (i2 + 2) + pk * (i3 + 2)])
            x2 = (r[ro + i1 + 1 + m1k * i2 + pk * (i3 + 1)] + r[ro + i1 + 1 + m1k * (i2 + 2) + pk * (i3 + 1)]
                  + r[ro + i1 + 1 + m1k * (i2 + 1) + pk * i3] + r[ro + i1 + 1 + m1k * (i2 + 1) + pk * (i3 + 2)])
            centre = ro + m1k * (i2 + 1) + pk * (i3 + 1)
            s[so + j1 + m1j * j2 + pj * j3] = (
                0.5 * r[centre + i1 + 1]
                + 0.25 * (r[centre + i1] + r[centre + i1 + 2] + x2)
                + 0.125 * (x1[i1] + x1[i1 + 2] + y2)
                + 0.0625 * (y1[i1] + y1[i1 + 2]))


@kernel
def _interp_plane(z, zo, mm1, mm2, u, uo, n1, n2, i3):
    z1 = np.empty(mm1)
    z2 = np.empty(mm1)
    z3 = np.empty(mm1)
    pz = mm1 * mm2
    pu = n1 * n2
    for i2 in range(mm2 - 1):
        b = zo + mm1 * i2 + pz * i3
        for i1 in range(mm1):
            z1[i1] = z[b + mm1 + i1] + z[b + i1]
            z2[i1] = z[b + pz + i1] + z[b + i1]
            z3[i1] = z[b + pz + mm1 + i1] + z[b + pz + i1] + z1[i1]
        f00 = uo + n1 * (2 * i2) + pu * (2 * i3)
        f01 = uo + n1 * (2 * i2 + 1) + pu * (2 * i3)
        f10 = uo + n1 * (2 * i2) + pu * (2 * i3 + 1)
        f11 = uo + n1 * (2 * i2 + 1) + pu * (2 * i3 + 1)
        for i1 in range(mm1 - 1):
            u[f00 + 2 * i1] += z[b + i1]
            u[f00 + 2 * i1 + 1] += 0.5 * (z[b + i1 + 1] + z[b + i1])
        for i1 in range(mm1 - 1):
            u[f01 + 2 * i1] += 0.5 * z1[i1]
            u[f01 + 2 * i1 + 1] += 0.25 * (z1[i1] + z1[i1 + 1])
        for i1 in range(mm1 - 1):
            u[f10 + 2 * i1] += 0.5 * z2[i1]
            u[f10 + 2 * i1 + 1] += 0.25 * (z2[i1] + z2[i1 + 1])
        for i1 in range(mm1 - 1):
            u[f11 + 2 * i1] += 0.25 * z3[i1]
            u[f11 + 2 * i1 + 1] += 0.125 * (z3[i1] + z3[i1 + 1])


@kernel
def _comm3_plane(u, uo, n1, n2, i3):
    p = n1 * n2
    for i2 in range(1, n2 - 1):
        b = uo + i2 * n1 + i3 * p
        u[b] = u[b + n1 - 2]
        u[b + n1 - 1] = u[b + 1]
    for i1 in range(n1):
        b = uo + i1 + i3 * p
        u[b] = u[b + n1 * (n2 - 2)]
        u[b + n1 * (n2 - 1)] = u[b + n1]


@kernel
def _comm3_faces(u, uo, n1, n2, n3):
    p = n1 * n2
    for m in range(p):
        u[uo + m] = u[uo + m + p * (n3 - 2)]
        u[uo + m + p * (n3 - 1)] = u[uo + m + p]


@kernel
def _norm_plane(r, ro, n1, n2, i3):
    s = 0.0
    mx = 0.0
    p = n1 * n2
    for i2 in range(1, n2 - 1):
        for i1 in range(1, n1 - 1):
            x = r[ro + i1 + n1 * i2 + p * i3]
            s += x * x
            if abs(x) > mx:
                mx = abs(x)
    return s, mx


@kernel
def _fill_plane(z, zo, n1, n2, i3, seed, a, nx):
    buf = np.empty(nx)
    x = seed
    p = n1 * n2
    for i2 in range(1, n2 - 1):
        x = vranlc_kernel(nx, x, a, buf, 0)
        for i1 in range(nx):
            z[zo + 1 + i1 + n1 * i2 + p * i3] = buf[i1]


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def _interior_planes(level: GridLevel) -> range:
    return range(1, level.m3 - 1)


def comm3(pool: WorkerPool, level: GridLevel) -> None:
    """Periodic ghost exchange: i1 and i2 ghosts plane by plane, then the i3 faces"""
    pool.par_map(_interior_planes(level),
                 lambda i3: _comm3_plane(level.data, level.offset, level.m1, level.m2, i3))
    _comm3_faces(level.data, level.offset, level.m1, level.m2, level.m3)


def zran3(pool: WorkerPool, z: GridLevel, seed: float = MG_SEED, a: float = LCG_MULTIPLIER) -> None:
    """Random fill, then +1 at the ten largest points, -1 at the ten smallest, 0 elsewhere"""
    nx, ny = z.m1 - 2, z.m2 - 2
    z.view()[:] = 0.0
    pool.par_map(_interior_planes(z), lambda i3: _fill_plane(
        z.data, z.offset, z.m1, z.m2, i3, jump_seed(seed, a, nx * ny * (i3 - 1)), a, nx))

    interior = z.view()[1:-1, 1:-1, 1:-1]
    flat = interior.ravel()
    order = np.argsort(flat, kind='stable')
    lowest, highest = order[:MG_EXTREMES], order[-MG_EXTREMES:]
    signs = np.zeros_like(flat)
    signs[lowest] = -1.0
    signs[highest] = 1.0
    interior[...] = signs.reshape(interior.shape)
    comm3(pool, z)


def resid(pool: WorkerPool, u: GridLevel, v: GridLevel, r: GridLevel, a) -> None:
    """r = v - A u; v and r may be the same level"""
    a0, a1, a2, a3 = a
    pool.par_map(_interior_planes(r), lambda i3: _resid_plane(
        u.data, u.offset, v.data, v.offset, r.data, r.offset, r.m1, r.m2, i3, a0, a1, a2, a3))
    comm3(pool, r)


def psinv(pool: WorkerPool, r: GridLevel, u: GridLevel, c) -> None:
    """u = u + S r"""
    c0, c1, c2, c3 = c
    pool.par_map(_interior_planes(u), lambda i3: _psinv_plane(
        r.data, r.offset, u.data, u.offset, u.m1, u.m2, i3, c0, c1, c2, c3))
    comm3(pool, u)


def rprj3(pool: WorkerPool, fine: GridLevel, coarse: GridLevel) -> None:
    """Full-weighting restriction of fine onto coarse (weights sum to 4)"""
    pool.par_map(_interior_planes(coarse), lambda j3: _rprj3_plane(
        fine.data, fine.offset, fine.m1, fine.m2, coarse.data, coarse.offset, coarse.m1, coarse.m2, j3))
    comm3(pool, coarse)


def interp(pool: WorkerPool, coarse: GridLevel, fine: GridLevel) -> None:
    """Trilinear prolongation of coarse added into fine, ghosts included"""
    # coarse plane i3 writes fine planes 2*i3 and 2*i3 + 1 only
    pool.par_map_disjoint(range(coarse.m3 - 1), fine.data, lambda i3, target: _interp_plane(
        coarse.data, coarse.offset, coarse.m1, coarse.m2, target, fine.offset, fine.m1, fine.m2, i3))


def norm2u3(pool: WorkerPool, r: GridLevel) -> Tuple[float, float]:
    """(root-mean-square, max-abs) over the interior"""
    sq, mx = pool.par_map_reduce(
        _interior_planes(r),
        lambda i3: _norm_plane(r.data, r.offset, r.m1, r.m2, i3),
        (0.0, 0.0), lambda s, t: (s[0] + t[0], max(s[1], t[1])))
    volume = float((r.m1 - 2) * (r.m2 - 2) * (r.m3 - 2))
    return math.sqrt(sq / volume), float(mx)


def mg3P(pool: WorkerPool, u: HierarchicalGrid, v: GridLevel, r: HierarchicalGrid, a, c,
         lowest: int = 1) -> None:
    """One V-cycle: restrict residuals down, smooth on the coarsest level, then back up"""
    lt = u.lt
    for k in range(lt, lowest, -1):
        rprj3(pool, r.level(k), r.level(k - 1))

    u.zero(lowest)
    psinv(pool, r.level(lowest), u.level(lowest), c)

    for k in range(lowest + 1, lt):
        u.zero(k)
        interp(pool, u.level(k - 1), u.level(k))
        resid(pool, u.level(k), r.level(k), r.level(k), a)
        psinv(pool, r.level(k), u.level(k), c)

    interp(pool, u.level(lt - 1), u.level(lt))
    resid(pool, u.level(lt), v, r.level(lt), a)
    psinv(pool, r.level(lt), u.level(lt), c)


@dataclass
class MultigridProblem:
    u: HierarchicalGrid
    r: HierarchicalGrid
    v: HierarchicalGrid

    @classmethod
    def for_class(cls, params: ClassParams) -> 'MultigridProblem':
        lt = int(round(math.log2(params.dims[0])))
        return cls(HierarchicalGrid.allocate(lt), HierarchicalGrid.allocate(lt),
                   HierarchicalGrid.allocate(lt, lowest=lt))

    @property
    def lt(self) -> int:
        return self.u.lt

    def reset(self, pool: WorkerPool):
        self.u.zero()
        zran3(pool, self.v.level(self.lt))


def run(params: ClassParams, pool: WorkerPool, timers_enabled: bool = None) -> BenchmarkResult:
    timers = TimerSet.for_run(['benchmark', 'mg3P', 'resid', 'norm2u3'], timers_enabled)
    a, c = params.extra['a'], params.extra['c']
    problem = MultigridProblem.for_class(params)
    lt = problem.lt
    v = problem.v.level(lt)

    problem.reset(pool)
    resid(pool, problem.u.level(lt), v, problem.r.level(lt), a)
    mg3P(pool, problem.u, v, problem.r, a, c)
    resid(pool, problem.u.level(lt), v, problem.r.level(lt), a)
    norm2u3(pool, problem.r.level(lt))
    problem.reset(pool)

    timers.start('benchmark')
    with timers.phase('resid'):
        resid(pool, problem.u.level(lt), v, problem.r.level(lt), a)
    for it in range(1, params.niter + 1):
        with timers.phase('mg3P'):
            mg3P(pool, problem.u, v, problem.r, a, c)
        with timers.phase('resid'):
            resid(pool, problem.u.level(lt), v, problem.r.level(lt), a)
        logger.debug("MG iteration %4d", it)
    with timers.phase('norm2u3'):
        rnm2, rnmu = norm2u3(pool, problem.r.level(lt))
    timers.stop('benchmark')

    verified = verify_scalar(rnm2, params.reference['rnm2'], params.epsilon)
    logger.debug("MG L2 norm %20.13e  max %20.13e", rnm2, rnmu)
    return build_result(params, pool.workers, timers.read('benchmark'), verified, timers,
                        details={'rnm2': rnm2, 'rnmu': rnmu})
