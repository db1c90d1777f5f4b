# benchmarks/bt.py
"""
BT: block-tridiagonal ADI solver for the 3-D compressible Navier-Stokes
equations.

Each time step factors the implicit operator into one 5x5 block-tridiagonal
system per grid line and direction. Lines are independent; x and y sweeps run
over k planes, the z sweep over j slabs.
"""
import logging
from dataclasses import dataclass
from typing import Dict

import numpy as np

from benchmarks.cfd import (AUX_FIELDS, CfdConstants, allocate_field, cfd_constants, compute_aux,
                            error_norm, exact_forcing, flux_jacobian, gauss_jordan, initialize,
                            line_cell, residual, rms_norm, sweep_layout, verify_norms, viscous_jacobian)
from benchmarks.cfd import add as add_update
from common.jit import kernel
from common.params import ClassParams
from common.results import BenchmarkResult, build_result
from common.timers import TimerSet
from constants import CFD_STEP_LOG_INTERVAL
from runtime.pool import WorkerPool

logger = logging.getLogger(__name__)

AA, BB, CC = 0, 1, 2
SOLVE_PHASES = ('xsolve', 'ysolve', 'zsolve')


@dataclass
class StateField:
    u: np.ndarray
    rhs: np.ndarray
    forcing: np.ndarray
    aux: np.ndarray

    @classmethod
    def allocate(cls, dims) -> 'StateField':
        return cls(allocate_field(dims), allocate_field(dims), allocate_field(dims),
                   allocate_field(dims, AUX_FIELDS))


@kernel
def block_tridiagonal_line(uline, axis, dt, t1, t2, dd, c1, c2, con43, c3c4, c1345, fjac, njac, lhs):
    """Assemble lhs[p, AA|BB|CC] for one line; the end rows are identity"""
    n = uline.shape[0]
    for p in range(n):
        flux_jacobian(uline[p], axis, c1, c2, fjac[p])
        viscous_jacobian(uline[p], axis, con43, c3c4, c1345, njac[p])
    tmp1 = dt * t1[axis]
    tmp2 = dt * t2[axis]
    lhs[:] = 0.0
    for m in range(5):
        lhs[0, BB, m, m] = 1.0
        lhs[n - 1, BB, m, m] = 1.0
    for p in range(1, n - 1):
        for r in range(5):
            for s in range(5):
                lhs[p, AA, r, s] = -tmp2 * fjac[p - 1, r, s] - tmp1 * njac[p - 1, r, s]
                lhs[p, BB, r, s] = tmp1 * 2.0 * njac[p, r, s]
                lhs[p, CC, r, s] = tmp2 * fjac[p + 1, r, s] - tmp1 * njac[p + 1, r, s]
        for m in range(5):
            lhs[p, AA, m, m] -= tmp1 * dd[axis, m]
            lhs[p, BB, m, m] += 1.0 + tmp1 * 2.0 * dd[axis, m]
            lhs[p, CC, m, m] -= tmp1 * dd[axis, m]


@kernel
def solve_block_tridiagonal(lhs, r):
    """Block Thomas algorithm; r is overwritten with the solution and lhs destroyed"""
    n = lhs.shape[0]
    gauss_jordan(lhs[0, BB], lhs[0, CC], r[0])
    for p in range(1, n):
        for row in range(5):
            acc = 0.0
            for s in range(5):
                acc += lhs[p, AA, row, s] * r[p - 1, s]
            r[p, row] -= acc
        for row in range(5):
            for col in range(5):
                acc = 0.0
                for s in range(5):
                    acc += lhs[p, AA, row, s] * lhs[p - 1, CC, s, col]
                lhs[p, BB, row, col] -= acc
        gauss_jordan(lhs[p, BB], lhs[p, CC], r[p])
    for p in range(n - 2, -1, -1):
        for row in range(5):
            acc = 0.0
            for s in range(5):
                acc += lhs[p, CC, row, s] * r[p + 1, s]
            r[p, row] -= acc


@kernel
def _solve_lines(u, rhs, outer, axis, n_lines, dt, t1, t2, dd, c1, c2, con43, c3c4, c1345):
    n = u.shape[2 - axis]
    uline = np.empty((n, 5))
    rline = np.empty((n, 5))
    fjac = np.empty((n, 5, 5))
    njac = np.empty((n, 5, 5))
    lhs = np.empty((n, 3, 5, 5))
    for line in range(1, n_lines - 1):
        for p in range(n):
            k, j, i = line_cell(axis, outer, line, p)
            for m in range(5):
                uline[p, m] = u[k, j, i, m]
                rline[p, m] = rhs[k, j, i, m]
        block_tridiagonal_line(uline, axis, dt, t1, t2, dd, c1, c2, con43, c3c4, c1345, fjac, njac, lhs)
        solve_block_tridiagonal(lhs, rline)
        for p in range(1, n - 1):
            k, j, i = line_cell(axis, outer, line, p)
            for m in range(5):
                rhs[k, j, i, m] = rline[p, m]


def solve_axis(field: StateField, axis: int, c: CfdConstants, pool: WorkerPool) -> None:
    """Replace rhs with the solution of the block-tridiagonal systems along axis"""
    outer, n_lines = sweep_layout(field.u.shape, axis)

    # x and y: plane k writes rhs[k] only; z: slab j writes rhs[:, j, :] only
    def lines(index, target):
        _solve_lines(field.u, target, index, axis, n_lines, c.dt, c.t1, c.t2, c.dd,
                     c.c1, c.c2, c.con43, c.c3c4, c.c1345)

    pool.par_map_disjoint(outer, field.rhs, lines)


def exact_rhs(field: StateField, params: ClassParams, c: CfdConstants, pool: WorkerPool) -> None:
    field.forcing = exact_forcing(params.dims, c, pool, sign=-1.0)


def compute_rhs(field: StateField, c: CfdConstants, pool: WorkerPool) -> None:
    """rhs = dt * (forcing + flux differences of u) on the interior"""
    compute_aux(field.u, field.aux, c, pool)
    residual(field.u, field.aux, field.forcing, field.rhs, c, pool, base_sign=1.0, scale=c.dt)


def add(field: StateField, pool: WorkerPool) -> None:
    add_update(field.u, field.rhs, pool)


def adi(field: StateField, c: CfdConstants, pool: WorkerPool, timers: TimerSet) -> None:
    with timers.phase('rhs'):
        compute_rhs(field, c, pool)
    for axis, phase in enumerate(SOLVE_PHASES):
        with timers.phase(phase):
            solve_axis(field, axis, c, pool)
    with timers.phase('add'):
        add(field, pool)


def final_norms(field: StateField, c: CfdConstants, pool: WorkerPool) -> Dict[str, np.ndarray]:
    """Error norms of u and residual norms of a fresh rhs (divided by dt)"""
    xce = error_norm(field.u, c, pool)
    compute_rhs(field, c, pool)
    return {'xcr': rms_norm(field.rhs, pool) / c.dt, 'xce': xce}


def verify(params: ClassParams, norms: Dict[str, np.ndarray]) -> bool:
    return verify_norms(params, norms)


def run(params: ClassParams, pool: WorkerPool, timers_enabled: bool = None) -> BenchmarkResult:
    timers = TimerSet.for_run(['benchmark', 'rhs', *SOLVE_PHASES, 'add'], timers_enabled)
    c = cfd_constants(params)
    field = StateField.allocate(params.dims)

    initialize(field.u, c, pool)
    exact_rhs(field, params, c, pool)
    adi(field, c, pool, timers)
    initialize(field.u, c, pool)
    timers.clear()

    timers.start('benchmark')
    for step in range(1, params.niter + 1):
        if step == 1 or step % CFD_STEP_LOG_INTERVAL == 0:
            logger.debug("BT time step %4d", step)
        adi(field, c, pool, timers)
    timers.stop('benchmark')

    norms = final_norms(field, c, pool)
    verified = verify(params, norms)
    return build_result(params, pool.workers, timers.read('benchmark'), verified, timers,
                        details={name: [float(v) for v in values] for name, values in norms.items()})
