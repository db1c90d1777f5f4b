# benchmarks/lu.py
"""
LU: symmetric successive over-relaxation (SSOR) for the 3-D compressible
Navier-Stokes equations.

Every step solves a block lower-triangular system (ascending k) and a block
upper-triangular one (descending k). Cell (k, j, i) depends on its three
lower (or upper) neighbours, so each sweep runs as a wavefront pipeline:
the j-range is cut into one block per worker, and stage (k, b) waits for
(k-1, b) and (k, b-1) before it builds the Jacobians of those rows and
solves them.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from benchmarks.cfd import (AUX_FIELDS, FACES, INTERIOR, CfdConstants, allocate_field, cfd_constants,
                            compute_aux, error_norm, exact_forcing, flux_jacobian, initialize, residual,
                            rms_norm, solve5, verify_norms, viscous_jacobian)
from benchmarks.cfd import add as add_update
from common.jit import kernel
from common.params import ClassParams
from common.results import BenchmarkResult, build_result
from common.timers import TimerSet
from constants import CFD_GAS_CONSTANTS, CFD_STEP_LOG_INTERVAL, LU_TOLERANCE
from runtime.pipeline import ASCENDING, DESCENDING, TicketLog, ordered_pipeline
from runtime.pool import IndexRange, WorkerPool, split_range

logger = logging.getLogger(__name__)


@dataclass
class LUField:
    """
    Solution, residual and forcing, plus one plane of Jacobian blocks.

    near[axis, j, i] couples cell (k, j, i) to its neighbour along axis
    (the lower one during the lower sweep, the upper one during the upper
    sweep); diag[j, i] is the cell's own block. Both are rebuilt for every
    plane, and a row is only ever touched by the stage that owns it.
    """
    u: np.ndarray
    rsd: np.ndarray
    frct: np.ndarray
    aux: np.ndarray
    diag: np.ndarray
    near: np.ndarray

    @classmethod
    def allocate(cls, dims) -> 'LUField':
        nx, ny, _ = dims
        return cls(allocate_field(dims), allocate_field(dims), allocate_field(dims),
                   allocate_field(dims, AUX_FIELDS),
                   np.zeros((ny, nx, 5, 5)), np.zeros((3, ny, nx, 5, 5)))


@dataclass
class SsorOutcome:
    rsdnm: np.ndarray
    steps: int
    history: List[np.ndarray] = field(default_factory=list)


# ---------------------------------------------------------------------------
# setup
# ---------------------------------------------------------------------------

def setbv(field: LUField, c: CfdConstants, pool: WorkerPool) -> None:
    """Exact solution on the six boundary faces"""
    initialize(field.u, c, pool, part=FACES)


def setiv(field: LUField, c: CfdConstants, pool: WorkerPool) -> None:
    """Interior values interpolated from the boundary faces"""
    initialize(field.u, c, pool, part=INTERIOR)


def erhs(field: LUField, params: ClassParams, c: CfdConstants, pool: WorkerPool) -> None:
    field.frct = exact_forcing(params.dims, c, pool, sign=1.0)


def rhs(field: LUField, c: CfdConstants, pool: WorkerPool) -> None:
    """rsd = flux differences of u minus frct on the interior, zero on the boundary"""
    compute_aux(field.u, field.aux, c, pool)
    residual(field.u, field.aux, field.frct, field.rsd, c, pool, base_sign=-1.0, scale=1.0)


def l2norm(v: np.ndarray, pool: WorkerPool) -> np.ndarray:
    return rms_norm(v, pool)


# ---------------------------------------------------------------------------
# Jacobian blocks
# ---------------------------------------------------------------------------

@kernel
def _diagonal_block(cell, dt, t1, dd, con43, c3c4, c1345, njac, out):
    for r in range(5):
        for s in range(5):
            out[r, s] = 0.0
    for axis in range(3):
        viscous_jacobian(cell, axis, con43, c3c4, c1345, njac)
        w = 2.0 * dt * t1[axis]
        for r in range(5):
            for s in range(5):
                out[r, s] += w * njac[r, s]
            out[r, r] += w * dd[axis, r]
    for m in range(5):
        out[m, m] += 1.0


@kernel
def _coupling_block(cell, axis, sign, dt, t1, t2, dd, c1, c2, con43, c3c4, c1345, fjac, njac, out):
    """sign * dt * t2 * A - dt * t1 * (N + D) for the neighbour cell along axis"""
    flux_jacobian(cell, axis, c1, c2, fjac)
    viscous_jacobian(cell, axis, con43, c3c4, c1345, njac)
    a1 = dt * t1[axis]
    a2 = sign * dt * t2[axis]
    for r in range(5):
        for s in range(5):
            out[r, s] = a2 * fjac[r, s] - a1 * njac[r, s]
        out[r, r] -= a1 * dd[axis, r]


@kernel
def _jacobian_rows(u, k, j_lo, j_hi, step, dt, t1, t2, dd, c1, c2, con43, c3c4, c1345, diag, near):
    """Blocks of rows j_lo..j_hi-1 of plane k; step is -1 (lower) or +1 (upper)"""
    nx = u.shape[2]
    fjac = np.empty((5, 5))
    njac = np.empty((5, 5))
    sign = float(step)
    for j in range(j_lo, j_hi):
        for i in range(1, nx - 1):
            _diagonal_block(u[k, j, i], dt, t1, dd, con43, c3c4, c1345, njac, diag[j, i])
            _coupling_block(u[k, j, i + step], 0, sign, dt, t1, t2, dd, c1, c2, con43, c3c4, c1345,
                            fjac, njac, near[0, j, i])
            _coupling_block(u[k, j + step, i], 1, sign, dt, t1, t2, dd, c1, c2, con43, c3c4, c1345,
                            fjac, njac, near[1, j, i])
            _coupling_block(u[k + step, j, i], 2, sign, dt, t1, t2, dd, c1, c2, con43, c3c4, c1345,
                            fjac, njac, near[2, j, i])


# ---------------------------------------------------------------------------
# triangular solves
# ---------------------------------------------------------------------------

@kernel
def _blts_rows(v, k, j_lo, j_hi, omega, diag, near):
    nx = v.shape[2]
    tmat = np.empty((5, 5))
    tv = np.empty(5)
    for j in range(j_lo, j_hi):
        for i in range(1, nx - 1):
            for m in range(5):
                acc = 0.0
                for s in range(5):
                    acc += near[2, j, i, m, s] * v[k - 1, j, i, s]
                v[k, j, i, m] -= omega * acc
            for m in range(5):
                acc = 0.0
                for s in range(5):
                    acc += near[1, j, i, m, s] * v[k, j - 1, i, s] + near[0, j, i, m, s] * v[k, j, i - 1, s]
                tv[m] = v[k, j, i, m] - omega * acc
            for r in range(5):
                for s in range(5):
                    tmat[r, s] = diag[j, i, r, s]
            solve5(tmat, tv)
            for m in range(5):
                v[k, j, i, m] = tv[m]


@kernel
def _buts_rows(v, k, j_lo, j_hi, omega, diag, near):
    nx = v.shape[2]
    tmat = np.empty((5, 5))
    tv = np.empty(5)
    for j in range(j_hi - 1, j_lo - 1, -1):
        for i in range(nx - 2, 0, -1):
            for m in range(5):
                acc = 0.0
                for s in range(5):
                    acc += near[2, j, i, m, s] * v[k + 1, j, i, s]
                tv[m] = omega * acc
            for m in range(5):
                acc = 0.0
                for s in range(5):
                    acc += near[1, j, i, m, s] * v[k, j + 1, i, s] + near[0, j, i, m, s] * v[k, j, i + 1, s]
                tv[m] += omega * acc
            for r in range(5):
                for s in range(5):
                    tmat[r, s] = diag[j, i, r, s]
            solve5(tmat, tv)
            for m in range(5):
                v[k, j, i, m] -= tv[m]


def row_blocks(field: LUField, workers: int) -> List[IndexRange]:
    """Contiguous interior j-ranges, one per worker"""
    ny = field.u.shape[1]
    return split_range(range(1, ny - 1), workers)


def _sweep(field: LUField, c: CfdConstants, omega: float, pool: WorkerPool, direction: str,
           log: Optional[TicketLog]) -> None:
    nz = field.u.shape[0]
    blocks = row_blocks(field, pool.workers)
    lower = direction == ASCENDING
    step = -1 if lower else 1
    solve = _blts_rows if lower else _buts_rows

    # stage (k, b) writes rsd, diag and near only in rows blocks[b] of plane k
    def stage(k: int, b: int):
        rows = blocks[b]
        _jacobian_rows(field.u, k, rows.start, rows.end, step, c.dt, c.t1, c.t2, c.dd,
                       c.c1, c.c2, c.con43, c.c3c4, c.c1345, field.diag, field.near)
        solve(field.rsd, k, rows.start, rows.end, omega, field.diag, field.near)

    ordered_pipeline(pool, range(1, nz - 1), range(len(blocks)), stage, direction, log)


def lower_sweep(field: LUField, c: CfdConstants, omega: float, pool: WorkerPool,
                log: Optional[TicketLog] = None) -> None:
    """Block lower-triangular solve of rsd, planes ascending"""
    _sweep(field, c, omega, pool, ASCENDING, log)


def upper_sweep(field: LUField, c: CfdConstants, omega: float, pool: WorkerPool,
                log: Optional[TicketLog] = None) -> None:
    """Block upper-triangular solve of rsd, planes descending"""
    _sweep(field, c, omega, pool, DESCENDING, log)


# ---------------------------------------------------------------------------
# SSOR iteration
# ---------------------------------------------------------------------------

@kernel
def _scale_plane(v, k, factor):
    ny, nx = v.shape[1], v.shape[2]
    for j in range(1, ny - 1):
        for i in range(1, nx - 1):
            for m in range(5):
                v[k, j, i, m] *= factor


def ssor_step(field: LUField, c: CfdConstants, omega: float, pool: WorkerPool, timers: TimerSet,
              log: Optional[TicketLog] = None) -> None:
    """One relaxation step: both sweeps on dt * rsd, the update of u, and a fresh rsd"""
    # plane k writes rsd[k] only
    pool.par_map_disjoint(range(1, field.rsd.shape[0] - 1), field.rsd,
                          lambda k, target: _scale_plane(target, k, c.dt))
    with timers.phase('lower'):
        lower_sweep(field, c, omega, pool, log)
    with timers.phase('upper'):
        upper_sweep(field, c, omega, pool, log)
    add_update(field.u, field.rsd, pool, weight=1.0 / (omega * (2.0 - omega)))
    with timers.phase('rhs'):
        rhs(field, c, pool)


def ssor(field: LUField, c: CfdConstants, omega: float, niter: int, pool: WorkerPool, timers: TimerSet,
         inorm: Optional[int] = None, log: Optional[TicketLog] = None) -> SsorOutcome:
    """
    niter SSOR steps under the benchmark timer.

    The residual norm is taken every inorm steps and after the last one;
    iteration stops early once every component is below LU_TOLERANCE.
    """
    inorm = inorm or niter
    rhs(field, c, pool)
    outcome = SsorOutcome(l2norm(field.rsd, pool), 0)

    timers.start('benchmark')
    for istep in range(1, niter + 1):
        if istep == 1 or istep % CFD_STEP_LOG_INTERVAL == 0:
            logger.debug("LU time step %4d", istep)
        ssor_step(field, c, omega, pool, timers, log)
        outcome.steps = istep
        if istep % inorm == 0 or istep == niter:
            with timers.phase('l2norm'):
                outcome.rsdnm = l2norm(field.rsd, pool)
            outcome.history.append(outcome.rsdnm)
            if np.all(outcome.rsdnm < LU_TOLERANCE):
                logger.debug("LU converged after %d steps", istep)
                break
    timers.stop('benchmark')
    return outcome


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

def _corner_sums(phi: np.ndarray) -> np.ndarray:
    return phi[:-1, :-1] + phi[:-1, 1:] + phi[1:, :-1] + phi[1:, 1:]


def pintgr(u: np.ndarray) -> float:
    """Surface integral of the pressure over three pairs of inner faces"""
    c2 = CFD_GAS_CONSTANTS[1]
    nz, ny, nx = u.shape[:3]
    dxi, deta, dzeta = 1.0 / (nx - 1), 1.0 / (ny - 1), 1.0 / (nz - 1)
    ibeg, ifin = 1, nx - 2
    jbeg, jfin = 1, ny - 3
    ki1, ki2 = 2, nz - 2

    def phi(cells):
        return c2 * (cells[..., 4] - 0.5 * (cells[..., 1] ** 2 + cells[..., 2] ** 2 + cells[..., 3] ** 2)
                     / cells[..., 0])

    i_span = slice(ibeg, ifin + 1)
    j_span = slice(jbeg, jfin + 1)
    k_span = slice(ki1, ki2 + 1)

    frc1 = dxi * deta * np.sum(_corner_sums(phi(u[ki1, j_span, i_span]))
                               + _corner_sums(phi(u[ki2, j_span, i_span])))
    frc2 = dxi * dzeta * np.sum(_corner_sums(phi(u[k_span, jbeg, i_span]))
                                + _corner_sums(phi(u[k_span, jfin, i_span])))
    frc3 = deta * dzeta * np.sum(_corner_sums(phi(u[k_span, j_span, ibeg]))
                                 + _corner_sums(phi(u[k_span, j_span, ifin])))
    return 0.25 * (frc1 + frc2 + frc3)


def final_norms(field: LUField, outcome: SsorOutcome, c: CfdConstants, pool: WorkerPool) -> Dict[str, object]:
    return {
        'xcr': outcome.rsdnm,
        'xce': error_norm(field.u, c, pool, interior=True),
        'xci': pintgr(field.u),
    }


def verify(params: ClassParams, norms: Dict[str, object]) -> bool:
    return verify_norms(params, norms)


def run(params: ClassParams, pool: WorkerPool, timers_enabled: bool = None,
        log: Optional[TicketLog] = None) -> BenchmarkResult:
    timers = TimerSet.for_run(['benchmark', 'rhs', 'lower', 'upper', 'l2norm'], timers_enabled)
    c = cfd_constants(params)
    omega = params.extra['omega']
    inorm = params.extra.get('inorm', params.niter)
    field = LUField.allocate(params.dims)

    setbv(field, c, pool)
    setiv(field, c, pool)
    erhs(field, params, c, pool)
    ssor(field, c, omega, 1, pool, timers)

    setbv(field, c, pool)
    setiv(field, c, pool)
    timers.clear()
    outcome = ssor(field, c, omega, params.niter, pool, timers, inorm=inorm, log=log)

    norms = final_norms(field, outcome, c, pool)
    verified = verify(params, norms)
    details = {'xcr': [float(v) for v in norms['xcr']], 'xce': [float(v) for v in norms['xce']],
               'xci': float(norms['xci']), 'steps': outcome.steps}
    return build_result(params, pool.workers, timers.read('benchmark'), verified, timers, details=details)
