# benchmarks/sp.py
"""
SP: scalar penta-diagonal ADI solver (diagonalized Beam-Warming factorization).

Before each directional solve the right-hand side is moved into the
eigenvector basis of that direction's flux Jacobian, where the five
components decouple into three scalar penta-diagonal systems per line: one
shared by components 0-2 and one each for components 3 and 4 (shifted by
plus/minus the sound speed). Sweep parallelism is the same as BT's.
"""
import logging
from dataclasses import dataclass
from typing import Dict

import numpy as np

from benchmarks.cfd import (AUX_FIELDS, QS, RHO_I, SPEED, CfdConstants, allocate_field, cfd_constants,
                            compute_aux, error_norm, exact_forcing, initialize, line_cell, residual,
                            rms_norm, sweep_layout, verify_norms)
from benchmarks.cfd import add as add_update
from common.jit import kernel
from common.params import ClassParams
from common.results import BenchmarkResult, build_result
from common.timers import TimerSet
from constants import CFD_STEP_LOG_INTERVAL
from runtime.pool import WorkerPool

logger = logging.getLogger(__name__)

SOLVE_PHASES = ('xsolve', 'ysolve', 'zsolve')
# basis change applied once the sweep along each axis is done
AFTER_SOLVE = ('ninvr', 'pinvr', 'tzetar')


@dataclass
class SPField:
    u: np.ndarray
    rhs: np.ndarray
    forcing: np.ndarray
    aux: np.ndarray

    @classmethod
    def allocate(cls, dims) -> 'SPField':
        return cls(allocate_field(dims), allocate_field(dims), allocate_field(dims),
                   allocate_field(dims, AUX_FIELDS))


# ---------------------------------------------------------------------------
# per-cell basis changes
# ---------------------------------------------------------------------------

@kernel
def txinvr_cell(r, rho_i, uu, vv, ww, qs, ac, c2, bt):
    r1, r2, r3, r4, r5 = r[0], r[1], r[2], r[3], r[4]
    t1 = c2 / (ac * ac) * (qs * r1 - uu * r2 - vv * r3 - ww * r4 + r5)
    t2 = bt * rho_i * (uu * r1 - r2)
    t3 = (bt * rho_i * ac) * t1
    r[0] = r1 - t1
    r[1] = -rho_i * (ww * r1 - r4)
    r[2] = rho_i * (vv * r1 - r3)
    r[3] = -t2 + t3
    r[4] = t2 + t3


@kernel
def ninvr_cell(r, bt):
    r1, r2, r3, r4, r5 = r[0], r[1], r[2], r[3], r[4]
    t1 = bt * r3
    t2 = 0.5 * (r4 + r5)
    r[0] = -r2
    r[1] = r1
    r[2] = bt * (r4 - r5)
    r[3] = -t1 + t2
    r[4] = t1 + t2


@kernel
def pinvr_cell(r, bt):
    r1, r2, r3, r4, r5 = r[0], r[1], r[2], r[3], r[4]
    t1 = bt * r1
    t2 = 0.5 * (r4 + r5)
    r[0] = bt * (r4 - r5)
    r[1] = -r3
    r[2] = r2
    r[3] = -t1 + t2
    r[4] = t1 + t2


@kernel
def tzetar_cell(r, rho, uu, vv, ww, qs, ac, c2iv, bt):
    r1, r2, r3, r4, r5 = r[0], r[1], r[2], r[3], r[4]
    btuz = bt * rho
    t1 = btuz / ac * (r4 + r5)
    t2 = r3 + t1
    t3 = btuz * (r4 - r5)
    r[0] = t2
    r[1] = -rho * r2 + uu * t2
    r[2] = rho * r1 + vv * t2
    r[3] = ww * t2 + t3
    r[4] = rho * (-uu * r2 + vv * r1) + qs * t2 + c2iv * ac * ac * t1 + ww * t3


TXINVR, NINVR, PINVR, TZETAR = range(4)


@kernel
def _transform_plane(u, aux, rhs, k, which, c2, c2iv, bt):
    ny, nx = rhs.shape[1], rhs.shape[2]
    for j in range(1, ny - 1):
        for i in range(1, nx - 1):
            cell = aux[k, j, i]
            r = rhs[k, j, i]
            if which == TXINVR:
                txinvr_cell(r, cell[RHO_I], cell[1], cell[2], cell[3], cell[QS], cell[SPEED], c2, bt)
            elif which == NINVR:
                ninvr_cell(r, bt)
            elif which == PINVR:
                pinvr_cell(r, bt)
            else:
                tzetar_cell(r, u[k, j, i, 0], cell[1], cell[2], cell[3], cell[QS], cell[SPEED], c2iv, bt)


def _transform(field: SPField, which: int, c: CfdConstants, pool: WorkerPool) -> None:
    # plane k writes rhs[k] only
    def plane(k, target):
        _transform_plane(field.u, field.aux, target, k, which, c.c2, c.c2iv, c.bt)

    pool.par_map_disjoint(range(1, field.rhs.shape[0] - 1), field.rhs, plane)


def txinvr(field: SPField, c: CfdConstants, pool: WorkerPool) -> None:
    _transform(field, TXINVR, c, pool)


def ninvr(field: SPField, c: CfdConstants, pool: WorkerPool) -> None:
    _transform(field, NINVR, c, pool)


def pinvr(field: SPField, c: CfdConstants, pool: WorkerPool) -> None:
    _transform(field, PINVR, c, pool)


def tzetar(field: SPField, c: CfdConstants, pool: WorkerPool) -> None:
    _transform(field, TZETAR, c, pool)


TRANSFORMS = {'ninvr': ninvr, 'pinvr': pinvr, 'tzetar': tzetar}


# ---------------------------------------------------------------------------
# penta-diagonal line systems
# ---------------------------------------------------------------------------

@kernel
def penta_line(rho_line, cv, speed, axis, dt, t1, t2, dd, dmax, con43, c3c4, c1c5,
               comz1, comz4, comz5, comz6, rhon, lhs, lhsp, lhsm):
    """
    Band rows [p-2, p-1, p, p+1, p+2] of the three systems of one line.

    lhs serves components 0-2; lhsp and lhsm add the acoustic shift for
    components 3 and 4. The end rows are identity.
    """
    n = lhs.shape[0]
    ma = 1 + axis
    dtt1 = dt * t1[axis]
    dtt2 = dt * t2[axis]
    for p in range(n):
        ru1 = c3c4 * rho_line[p]
        rhon[p] = max(max(dd[axis, ma] + con43 * ru1, dd[axis, 4] + c1c5 * ru1),
                      max(dmax[axis] + ru1, dd[axis, 0]))

    lhs[:] = 0.0
    lhs[0, 2] = 1.0
    lhs[n - 1, 2] = 1.0
    for p in range(1, n - 1):
        lhs[p, 1] = -dtt2 * cv[p - 1] - dtt1 * rhon[p - 1]
        lhs[p, 2] = 1.0 + 2.0 * dtt1 * rhon[p]
        lhs[p, 3] = dtt2 * cv[p + 1] - dtt1 * rhon[p + 1]

    # fourth-order dissipation
    lhs[1, 2] += comz5
    lhs[1, 3] -= comz4
    lhs[1, 4] += comz1
    lhs[2, 1] -= comz4
    lhs[2, 2] += comz6
    lhs[2, 3] -= comz4
    lhs[2, 4] += comz1
    for p in range(3, n - 3):
        lhs[p, 0] += comz1
        lhs[p, 1] -= comz4
        lhs[p, 2] += comz6
        lhs[p, 3] -= comz4
        lhs[p, 4] += comz1
    lhs[n - 3, 0] += comz1
    lhs[n - 3, 1] -= comz4
    lhs[n - 3, 2] += comz6
    lhs[n - 3, 3] -= comz4
    lhs[n - 2, 0] += comz1
    lhs[n - 2, 1] -= comz4
    lhs[n - 2, 2] += comz5

    for p in range(n):
        for s in range(5):
            lhsp[p, s] = lhs[p, s]
            lhsm[p, s] = lhs[p, s]
    for p in range(1, n - 1):
        lhsp[p, 1] -= dtt2 * speed[p - 1]
        lhsp[p, 3] += dtt2 * speed[p + 1]
        lhsm[p, 1] += dtt2 * speed[p - 1]
        lhsm[p, 3] -= dtt2 * speed[p + 1]


@kernel
def penta_solve(lhs, r, m_lo, m_hi):
    """Solve the banded system for components m_lo..m_hi-1 of r in place; lhs is destroyed"""
    n = lhs.shape[0]
    for p in range(n - 2):
        fac1 = 1.0 / lhs[p, 2]
        lhs[p, 3] *= fac1
        lhs[p, 4] *= fac1
        for m in range(m_lo, m_hi):
            r[p, m] *= fac1
        lhs[p + 1, 2] -= lhs[p + 1, 1] * lhs[p, 3]
        lhs[p + 1, 3] -= lhs[p + 1, 1] * lhs[p, 4]
        for m in range(m_lo, m_hi):
            r[p + 1, m] -= lhs[p + 1, 1] * r[p, m]
        lhs[p + 2, 1] -= lhs[p + 2, 0] * lhs[p, 3]
        lhs[p + 2, 2] -= lhs[p + 2, 0] * lhs[p, 4]
        for m in range(m_lo, m_hi):
            r[p + 2, m] -= lhs[p + 2, 0] * r[p, m]

    p = n - 2
    fac1 = 1.0 / lhs[p, 2]
    lhs[p, 3] *= fac1
    lhs[p, 4] *= fac1
    for m in range(m_lo, m_hi):
        r[p, m] *= fac1
    lhs[p + 1, 2] -= lhs[p + 1, 1] * lhs[p, 3]
    lhs[p + 1, 3] -= lhs[p + 1, 1] * lhs[p, 4]
    for m in range(m_lo, m_hi):
        r[p + 1, m] -= lhs[p + 1, 1] * r[p, m]
    fac2 = 1.0 / lhs[n - 1, 2]
    for m in range(m_lo, m_hi):
        r[n - 1, m] *= fac2

    for m in range(m_lo, m_hi):
        r[n - 2, m] -= lhs[n - 2, 3] * r[n - 1, m]
    for p in range(n - 3, -1, -1):
        for m in range(m_lo, m_hi):
            r[p, m] = r[p, m] - lhs[p, 3] * r[p + 1, m] - lhs[p, 4] * r[p + 2, m]


@kernel
def _solve_lines(aux, rhs, outer, axis, n_lines, dt, t1, t2, dd, dmax, con43, c3c4, c1c5,
                 comz1, comz4, comz5, comz6):
    n = rhs.shape[2 - axis]
    rho_line = np.empty(n)
    cv = np.empty(n)
    speed = np.empty(n)
    rhon = np.empty(n)
    rline = np.empty((n, 5))
    lhs = np.empty((n, 5))
    lhsp = np.empty((n, 5))
    lhsm = np.empty((n, 5))
    for line in range(1, n_lines - 1):
        for p in range(n):
            k, j, i = line_cell(axis, outer, line, p)
            rho_line[p] = aux[k, j, i, RHO_I]
            cv[p] = aux[k, j, i, 1 + axis]
            speed[p] = aux[k, j, i, SPEED]
            for m in range(5):
                rline[p, m] = rhs[k, j, i, m]
        penta_line(rho_line, cv, speed, axis, dt, t1, t2, dd, dmax, con43, c3c4, c1c5,
                   comz1, comz4, comz5, comz6, rhon, lhs, lhsp, lhsm)
        penta_solve(lhs, rline, 0, 3)
        penta_solve(lhsp, rline, 3, 4)
        penta_solve(lhsm, rline, 4, 5)
        for p in range(1, n - 1):
            k, j, i = line_cell(axis, outer, line, p)
            for m in range(5):
                rhs[k, j, i, m] = rline[p, m]


def solve_axis(field: SPField, axis: int, c: CfdConstants, pool: WorkerPool) -> None:
    """Penta-diagonal solves along axis; rhs must already be in that axis' basis"""
    outer, n_lines = sweep_layout(field.rhs.shape, axis)

    # x and y: plane k writes rhs[k] only; z: slab j writes rhs[:, j, :] only
    def lines(index, target):
        _solve_lines(field.aux, target, index, axis, n_lines, c.dt, c.t1, c.t2, c.dd, c.dmax,
                     c.con43, c.c3c4, c.c1c5, c.comz1, c.comz4, c.comz5, c.comz6)

    pool.par_map_disjoint(outer, field.rhs, lines)


# ---------------------------------------------------------------------------
# time step
# ---------------------------------------------------------------------------

def exact_rhs(field: SPField, params: ClassParams, c: CfdConstants, pool: WorkerPool) -> None:
    field.forcing = exact_forcing(params.dims, c, pool, sign=-1.0)


def compute_rhs(field: SPField, c: CfdConstants, pool: WorkerPool) -> None:
    """Refresh the auxiliary fields (sound speed included), then rhs = dt * (forcing + L(u))"""
    compute_aux(field.u, field.aux, c, pool, with_speed=True)
    residual(field.u, field.aux, field.forcing, field.rhs, c, pool, base_sign=1.0, scale=c.dt)


def add(field: SPField, pool: WorkerPool) -> None:
    add_update(field.u, field.rhs, pool)


def adi(field: SPField, c: CfdConstants, pool: WorkerPool, timers: TimerSet) -> None:
    with timers.phase('rhs'):
        compute_rhs(field, c, pool)
    with timers.phase('txinvr'):
        txinvr(field, c, pool)
    for axis, (phase, after) in enumerate(zip(SOLVE_PHASES, AFTER_SOLVE)):
        with timers.phase(phase):
            solve_axis(field, axis, c, pool)
        with timers.phase(after):
            TRANSFORMS[after](field, c, pool)
    with timers.phase('add'):
        add(field, pool)


def final_norms(field: SPField, c: CfdConstants, pool: WorkerPool) -> Dict[str, np.ndarray]:
    xce = error_norm(field.u, c, pool)
    compute_rhs(field, c, pool)
    return {'xcr': rms_norm(field.rhs, pool) / c.dt, 'xce': xce}


def verify(params: ClassParams, norms: Dict[str, np.ndarray]) -> bool:
    return verify_norms(params, norms)


def run(params: ClassParams, pool: WorkerPool, timers_enabled: bool = None) -> BenchmarkResult:
    timers = TimerSet.for_run(['benchmark', 'rhs', 'txinvr', *SOLVE_PHASES, *AFTER_SOLVE, 'add'],
                              timers_enabled)
    c = cfd_constants(params)
    field = SPField.allocate(params.dims)
    logger.debug("SP worker stack reserve %d bytes (class default %d)",
                 pool.config.stack_reserve, params.extra.get('stack_reserve', 0))

    initialize(field.u, c, pool)
    exact_rhs(field, params, c, pool)
    adi(field, c, pool, timers)
    initialize(field.u, c, pool)
    timers.clear()

    timers.start('benchmark')
    for step in range(1, params.niter + 1):
        if step == 1 or step % CFD_STEP_LOG_INTERVAL == 0:
            logger.debug("SP time step %4d", step)
        adi(field, c, pool, timers)
    timers.stop('benchmark')

    norms = final_norms(field, c, pool)
    verified = verify(params, norms)
    return build_result(params, pool.workers, timers.read('benchmark'), verified, timers,
                        details={name: [float(v) for v in values] for name, values in norms.items()})
