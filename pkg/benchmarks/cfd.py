# benchmarks/cfd.py
"""
Pieces shared by the three Navier-Stokes pseudo-applications (BT, SP, LU).

Fields are float64 arrays of shape (nz, ny, nx, 5) indexed [k, j, i, m];
axis 0 is x (i), axis 1 is y (j), axis 2 is z (k). All three applications
use the same spatial operator: central differences of the convective and
viscous fluxes plus fourth-order artificial dissipation, evaluated on the
interior. They differ only in what they do with it.
"""
import logging
from dataclasses import dataclass
from typing import Mapping, Sequence, Tuple

import numpy as np

from common.jit import kernel
from common.params import ClassParams
from common.verify import relative_error, verify_vector
from constants import CFD_DIFFUSION, CFD_EXACT_COEFFS, CFD_GAS_CONSTANTS
from runtime.pool import WorkerPool

logger = logging.getLogger(__name__)

# auxiliary per-cell quantities derived from u
RHO_I, US, VS, WS, SQUARE, QS, SPEED = range(7)
AUX_FIELDS = 7

# parts of the grid written by initialize
FACES = 1
INTERIOR = 2


@dataclass(frozen=True)
class CfdConstants:
    dt: float
    c1: float
    c2: float
    c1c2: float
    c3c4: float
    c1c5: float
    c1345: float
    con43: float
    c2iv: float
    bt: float
    dssp: float
    comz1: float
    comz4: float
    comz5: float
    comz6: float
    spacing: np.ndarray   # 1 / (n - 1) per axis
    t1: np.ndarray        # 1 / h^2
    t2: np.ndarray        # 1 / 2h
    t3: np.ndarray        # 1 / h
    dd: np.ndarray        # (3, 5) diffusion coefficients
    dmax: np.ndarray      # largest transverse momentum diffusion per axis
    xcon: np.ndarray      # (3, 5) viscous coefficients
    ce: np.ndarray        # (5, 13) exact-solution polynomial

    @classmethod
    def build(cls, dims: Sequence[int], dt: float) -> 'CfdConstants':
        c1, c2, c3, c4, c5 = CFD_GAS_CONSTANTS
        if min(dims) < 6:
            raise ValueError(f"grid must have at least 6 points per axis, got {tuple(dims)}")
        spacing = np.array([1.0 / (n - 1) for n in dims])
        t1 = 1.0 / (spacing * spacing)
        t2 = 1.0 / (2.0 * spacing)
        t3 = 1.0 / spacing
        dd = np.array([[d] * 5 for d in CFD_DIFFUSION], dtype=np.float64)
        dmax = np.array([max(dd[a, r] for r in (1, 2, 3) if r != a + 1) for a in range(3)])
        c1c5 = c1 * c5
        c3c4 = c3 * c4
        con43 = 4.0 / 3.0
        conz1 = 1.0 - c1c5
        con16 = 1.0 / 6.0
        xcon = np.empty((3, 5))
        for a in range(3):
            base = c3c4 * t3[a] * t3[a]
            xcon[a] = (base * con43, base, base * conz1, base * con16, base * c1c5)
        dssp = 0.25 * max(dd[0, 0], dd[1, 0], dd[2, 0])
        comz1 = dt * dssp
        return cls(dt=dt, c1=c1, c2=c2, c1c2=c1 * c2, c3c4=c3c4, c1c5=c1c5, c1345=c1c5 * c3c4,
                   con43=con43, c2iv=2.5, bt=np.sqrt(0.5), dssp=dssp,
                   comz1=comz1, comz4=4.0 * comz1, comz5=5.0 * comz1, comz6=6.0 * comz1,
                   spacing=spacing, t1=t1, t2=t2, t3=t3, dd=dd, dmax=dmax, xcon=xcon,
                   ce=np.array(CFD_EXACT_COEFFS, dtype=np.float64))


def cfd_constants(params: ClassParams) -> CfdConstants:
    return CfdConstants.build(params.dims, params.extra['dt'])


def allocate_field(dims: Sequence[int], components: int = 5) -> np.ndarray:
    nx, ny, nz = dims
    return np.zeros((nz, ny, nx, components), dtype=np.float64)


# ---------------------------------------------------------------------------
# exact solution and initial state
# ---------------------------------------------------------------------------

@kernel
def exact_solution(xi, eta, zeta, ce, out):
    for m in range(5):
        out[m] = (ce[m, 0]
                  + xi * (ce[m, 1] + xi * (ce[m, 4] + xi * (ce[m, 7] + xi * ce[m, 10])))
                  + eta * (ce[m, 2] + eta * (ce[m, 5] + eta * (ce[m, 8] + eta * ce[m, 11])))
                  + zeta * (ce[m, 3] + zeta * (ce[m, 6] + zeta * (ce[m, 9] + zeta * ce[m, 12]))))


@kernel
def _exact_plane(ue, k, spacing, ce):
    ny, nx = ue.shape[1], ue.shape[2]
    zeta = k * spacing[2]
    for j in range(ny):
        eta = j * spacing[1]
        for i in range(nx):
            exact_solution(i * spacing[0], eta, zeta, ce, ue[k, j, i])


@kernel
def _initialize_plane(u, k, spacing, ce, part):
    nz, ny, nx = u.shape[0], u.shape[1], u.shape[2]
    lo = np.empty(5)
    hi = np.empty(5)
    pxi = np.empty(5)
    peta = np.empty(5)
    pzeta = np.empty(5)
    zeta = k * spacing[2]
    for j in range(ny):
        eta = j * spacing[1]
        for i in range(nx):
            xi = i * spacing[0]
            if i == 0 or i == nx - 1 or j == 0 or j == ny - 1 or k == 0 or k == nz - 1:
                if part & FACES:
                    exact_solution(xi, eta, zeta, ce, u[k, j, i])
                continue
            if not part & INTERIOR:
                continue
            exact_solution(0.0, eta, zeta, ce, lo)
            exact_solution(1.0, eta, zeta, ce, hi)
            for m in range(5):
                pxi[m] = xi * hi[m] + (1.0 - xi) * lo[m]
            exact_solution(xi, 0.0, zeta, ce, lo)
            exact_solution(xi, 1.0, zeta, ce, hi)
            for m in range(5):
                peta[m] = eta * hi[m] + (1.0 - eta) * lo[m]
            exact_solution(xi, eta, 0.0, ce, lo)
            exact_solution(xi, eta, 1.0, ce, hi)
            for m in range(5):
                pzeta[m] = zeta * hi[m] + (1.0 - zeta) * lo[m]
            for m in range(5):
                u[k, j, i, m] = (pxi[m] + peta[m] + pzeta[m]
                                 - pxi[m] * peta[m] - pxi[m] * pzeta[m] - peta[m] * pzeta[m]
                                 + pxi[m] * peta[m] * pzeta[m])


def initialize(u: np.ndarray, c: CfdConstants, pool: WorkerPool, part: int = FACES | INTERIOR) -> None:
    """Exact values on the six faces, transfinite interpolation of them inside"""
    # plane k writes u[k] only
    pool.par_map_disjoint(u.shape[0], u, lambda k, target: _initialize_plane(target, k, c.spacing, c.ce, part))


def exact_field(dims: Sequence[int], c: CfdConstants, pool: WorkerPool) -> np.ndarray:
    ue = allocate_field(dims)
    # plane k writes ue[k] only
    pool.par_map_disjoint(ue.shape[0], ue, lambda k, target: _exact_plane(target, k, c.spacing, c.ce))
    return ue


# ---------------------------------------------------------------------------
# auxiliary fields
# ---------------------------------------------------------------------------

@kernel
def _aux_plane(u, aux, k, c1c2, with_speed):
    ny, nx = u.shape[1], u.shape[2]
    for j in range(ny):
        for i in range(nx):
            rho_inv = 1.0 / u[k, j, i, 0]
            aux[k, j, i, RHO_I] = rho_inv
            aux[k, j, i, US] = u[k, j, i, 1] * rho_inv
            aux[k, j, i, VS] = u[k, j, i, 2] * rho_inv
            aux[k, j, i, WS] = u[k, j, i, 3] * rho_inv
            square = 0.5 * (u[k, j, i, 1] * u[k, j, i, 1] + u[k, j, i, 2] * u[k, j, i, 2]
                            + u[k, j, i, 3] * u[k, j, i, 3]) * rho_inv
            aux[k, j, i, SQUARE] = square
            aux[k, j, i, QS] = square * rho_inv
            if with_speed:
                aux[k, j, i, SPEED] = np.sqrt(c1c2 * rho_inv * (u[k, j, i, 4] - square))


def compute_aux(u: np.ndarray, aux: np.ndarray, c: CfdConstants, pool: WorkerPool,
                with_speed: bool = False) -> None:
    """Reciprocal density, velocities, kinetic terms (and sound speed) from u"""
    # plane k writes aux[k] only
    pool.par_map_disjoint(u.shape[0], aux, lambda k, target: _aux_plane(u, target, k, c.c1c2, with_speed))


# ---------------------------------------------------------------------------
# spatial operator
# ---------------------------------------------------------------------------

@kernel
def _along(src, k, j, i, axis, s, m):
    if axis == 0:
        return src[k, j, i + s, m]
    if axis == 1:
        return src[k, j + s, i, m]
    return src[k + s, j, i, m]


@kernel
def _flux_terms(u, aux, out, k, j, i, axis, t1, t2, dd, xcon, c1, c2):
    ma = 1 + axis
    a1 = t1[axis]
    a2 = t2[axis]
    vel_p = _along(aux, k, j, i, axis, 1, ma)
    vel_c = aux[k, j, i, ma]
    vel_m = _along(aux, k, j, i, axis, -1, ma)
    sq_p = _along(aux, k, j, i, axis, 1, SQUARE)
    sq_m = _along(aux, k, j, i, axis, -1, SQUARE)

    out[k, j, i, 0] += (dd[axis, 0] * a1 * (_along(u, k, j, i, axis, 1, 0) - 2.0 * u[k, j, i, 0]
                                           + _along(u, k, j, i, axis, -1, 0))
                        - a2 * (_along(u, k, j, i, axis, 1, ma) - _along(u, k, j, i, axis, -1, ma)))

    for r in range(1, 4):
        up = _along(u, k, j, i, axis, 1, r)
        um = _along(u, k, j, i, axis, -1, r)
        diffusion = dd[axis, r] * a1 * (up - 2.0 * u[k, j, i, r] + um)
        if r == ma:
            out[k, j, i, r] += (diffusion
                                + xcon[axis, 0] * (vel_p - 2.0 * vel_c + vel_m)
                                - a2 * (up * vel_p - um * vel_m
                                        + (_along(u, k, j, i, axis, 1, 4) - sq_p
                                           - _along(u, k, j, i, axis, -1, 4) + sq_m) * c2))
        else:
            out[k, j, i, r] += (diffusion
                                + xcon[axis, 1] * (_along(aux, k, j, i, axis, 1, r) - 2.0 * aux[k, j, i, r]
                                                   + _along(aux, k, j, i, axis, -1, r))
                                - a2 * (up * vel_p - um * vel_m))

    e_p = _along(u, k, j, i, axis, 1, 4)
    e_c = u[k, j, i, 4]
    e_m = _along(u, k, j, i, axis, -1, 4)
    out[k, j, i, 4] += (dd[axis, 4] * a1 * (e_p - 2.0 * e_c + e_m)
                        + xcon[axis, 2] * (_along(aux, k, j, i, axis, 1, QS) - 2.0 * aux[k, j, i, QS]
                                           + _along(aux, k, j, i, axis, -1, QS))
                        + xcon[axis, 3] * (vel_p * vel_p - 2.0 * vel_c * vel_c + vel_m * vel_m)
                        + xcon[axis, 4] * (e_p * _along(aux, k, j, i, axis, 1, RHO_I)
                                           - 2.0 * e_c * aux[k, j, i, RHO_I]
                                           + e_m * _along(aux, k, j, i, axis, -1, RHO_I))
                        - a2 * ((c1 * e_p - c2 * sq_p) * vel_p - (c1 * e_m - c2 * sq_m) * vel_m))


@kernel
def _dissipation(u, out, k, j, i, axis, q, n, dssp):
    for m in range(5):
        c = u[k, j, i, m]
        if q == 1:
            d = 5.0 * c - 4.0 * _along(u, k, j, i, axis, 1, m) + _along(u, k, j, i, axis, 2, m)
        elif q == 2:
            d = (-4.0 * _along(u, k, j, i, axis, -1, m) + 6.0 * c
                 - 4.0 * _along(u, k, j, i, axis, 1, m) + _along(u, k, j, i, axis, 2, m))
        elif q == n - 3:
            d = (_along(u, k, j, i, axis, -2, m) - 4.0 * _along(u, k, j, i, axis, -1, m)
                 + 6.0 * c - 4.0 * _along(u, k, j, i, axis, 1, m))
        elif q == n - 2:
            d = _along(u, k, j, i, axis, -2, m) - 4.0 * _along(u, k, j, i, axis, -1, m) + 5.0 * c
        else:
            d = (_along(u, k, j, i, axis, -2, m) - 4.0 * _along(u, k, j, i, axis, -1, m) + 6.0 * c
                 - 4.0 * _along(u, k, j, i, axis, 1, m) + _along(u, k, j, i, axis, 2, m))
        out[k, j, i, m] -= dssp * d


@kernel
def _residual_plane(u, aux, base, out, k, base_sign, t1, t2, dd, xcon, c1, c2, dssp):
    nz, ny, nx = u.shape[0], u.shape[1], u.shape[2]
    for j in range(ny):
        for i in range(nx):
            for m in range(5):
                out[k, j, i, m] = base_sign * base[k, j, i, m]
    if k == 0 or k == nz - 1:
        return
    for j in range(1, ny - 1):
        for i in range(1, nx - 1):
            _flux_terms(u, aux, out, k, j, i, 0, t1, t2, dd, xcon, c1, c2)
            _dissipation(u, out, k, j, i, 0, i, nx, dssp)
            _flux_terms(u, aux, out, k, j, i, 1, t1, t2, dd, xcon, c1, c2)
            _dissipation(u, out, k, j, i, 1, j, ny, dssp)


@kernel
def _residual_slab(u, aux, out, j, scale, t1, t2, dd, xcon, c1, c2, dssp):
    nz, nx = u.shape[0], u.shape[2]
    for k in range(1, nz - 1):
        for i in range(1, nx - 1):
            _flux_terms(u, aux, out, k, j, i, 2, t1, t2, dd, xcon, c1, c2)
            _dissipation(u, out, k, j, i, 2, k, nz, dssp)
            for m in range(5):
                out[k, j, i, m] *= scale


def residual(u: np.ndarray, aux: np.ndarray, base: np.ndarray, out: np.ndarray, c: CfdConstants,
             pool: WorkerPool, base_sign: float = 1.0, scale: float = 1.0) -> None:
    """
    out = base_sign * base + scale-weighted flux differences of u on the interior.

    Boundary cells get base_sign * base only. The x and y terms run plane by
    plane; the z terms need neighbouring planes, so they run over j-slabs
    once every plane is done. Per cell the terms are always added in the
    order x, y, z.
    """
    nz, ny = u.shape[0], u.shape[1]

    # plane k writes out[k] only
    def plane(k, target):
        _residual_plane(u, aux, base, target, k, base_sign, c.t1, c.t2, c.dd, c.xcon, c.c1, c.c2, c.dssp)

    pool.par_map_disjoint(nz, out, plane)

    # slab j writes out[:, j, :] only
    def slab(j, target):
        _residual_slab(u, aux, target, j, scale, c.t1, c.t2, c.dd, c.xcon, c.c1, c.c2, c.dssp)

    pool.par_map_disjoint(range(1, ny - 1), out, slab)


def exact_forcing(dims: Sequence[int], c: CfdConstants, pool: WorkerPool, sign: float) -> np.ndarray:
    """sign times the spatial operator applied to the exact solution (zero on the boundary)"""
    ue = exact_field(dims, c, pool)
    aux = allocate_field(dims, AUX_FIELDS)
    compute_aux(ue, aux, c, pool)
    forcing = allocate_field(dims)
    residual(ue, aux, np.zeros_like(forcing), forcing, c, pool, base_sign=1.0, scale=sign)
    return forcing


# ---------------------------------------------------------------------------
# update and norms
# ---------------------------------------------------------------------------

@kernel
def _add_plane(u, rhs, k, weight):
    ny, nx = u.shape[1], u.shape[2]
    for j in range(1, ny - 1):
        for i in range(1, nx - 1):
            for m in range(5):
                u[k, j, i, m] += weight * rhs[k, j, i, m]


def add(u: np.ndarray, rhs: np.ndarray, pool: WorkerPool, weight: float = 1.0) -> None:
    """u += weight * rhs on the interior"""
    # plane k writes u[k] only
    pool.par_map_disjoint(range(1, u.shape[0] - 1), u, lambda k, target: _add_plane(target, rhs, k, weight))


@kernel
def _square_sums_plane(v, k):
    ny, nx = v.shape[1], v.shape[2]
    acc = np.zeros(5)
    for j in range(1, ny - 1):
        for i in range(1, nx - 1):
            for m in range(5):
                acc[m] += v[k, j, i, m] * v[k, j, i, m]
    return acc


@kernel
def _error_sums_plane(u, k, spacing, ce, interior):
    ny, nx = u.shape[1], u.shape[2]
    lo = 1 if interior else 0
    ue = np.empty(5)
    acc = np.zeros(5)
    zeta = k * spacing[2]
    for j in range(lo, ny - lo):
        eta = j * spacing[1]
        for i in range(lo, nx - lo):
            exact_solution(i * spacing[0], eta, zeta, ce, ue)
            for m in range(5):
                diff = u[k, j, i, m] - ue[m]
                acc[m] += diff * diff
    return acc


def _interior_points(field: np.ndarray) -> float:
    nz, ny, nx = field.shape[:3]
    return float((nx - 2) * (ny - 2) * (nz - 2))


def rms_norm(v: np.ndarray, pool: WorkerPool) -> np.ndarray:
    """Per-component root mean square of v over the interior"""
    sums = pool.par_map_reduce(range(1, v.shape[0] - 1), lambda k: _square_sums_plane(v, k),
                               np.zeros(5), lambda a, b: a + b)
    return np.sqrt(sums / _interior_points(v))


def error_norm(u: np.ndarray, c: CfdConstants, pool: WorkerPool, interior: bool = False) -> np.ndarray:
    """
    Per-component distance of u from the exact solution.

    The sum runs over all points, or the interior only, and is scaled by the
    interior point count either way.
    """
    planes = range(1, u.shape[0] - 1) if interior else range(u.shape[0])
    sums = pool.par_map_reduce(planes, lambda k: _error_sums_plane(u, k, c.spacing, c.ce, interior),
                               np.zeros(5), lambda a, b: a + b)
    return np.sqrt(sums / _interior_points(u))


def verify_norms(params: ClassParams, computed: Mapping[str, Sequence[float]]) -> bool:
    """Compare every named quantity with params.reference at params.epsilon"""
    verified = True
    for name, values in computed.items():
        values = np.atleast_1d(np.asarray(values, dtype=np.float64))
        reference = np.atleast_1d(np.asarray(params.reference[name], dtype=np.float64))
        for m, (value, ref) in enumerate(zip(values, reference)):
            logger.debug("%s %s[%d] %20.13e %20.13e %20.13e", params.benchmark.upper(), name, m,
                         value, ref, relative_error(value, ref))
        verified = verify_vector(values, reference, params.epsilon) and verified
    return verified


# ---------------------------------------------------------------------------
# 5x5 block helpers
# ---------------------------------------------------------------------------

@kernel
def flux_jacobian(cell, axis, c1, c2, out):
    """Jacobian of the convective flux along axis with respect to the conserved variables"""
    for r in range(5):
        for s in range(5):
            out[r, s] = 0.0
    a = 1 + axis
    tmp1 = 1.0 / cell[0]
    tmp2 = tmp1 * tmp1
    ua = cell[a]
    qs = 0.5 * (cell[1] * cell[1] + cell[2] * cell[2] + cell[3] * cell[3]) * tmp2
    square = qs * cell[0]
    out[0, a] = 1.0
    for r in range(1, 4):
        if r == a:
            out[r, 0] = -ua * ua * tmp2 + c2 * qs
            out[r, r] = (2.0 - c2) * ua * tmp1
            for s in range(1, 4):
                if s != a:
                    out[r, s] = -c2 * cell[s] * tmp1
            out[r, 4] = c2
        else:
            out[r, 0] = -cell[r] * ua * tmp2
            out[r, r] = ua * tmp1
            out[r, a] = cell[r] * tmp1
    out[4, 0] = (2.0 * c2 * square - c1 * cell[4]) * ua * tmp2
    for s in range(1, 4):
        if s == a:
            out[4, s] = c1 * cell[4] * tmp1 - c2 * (ua * ua * tmp2 + qs)
        else:
            out[4, s] = -c2 * cell[s] * ua * tmp2
    out[4, 4] = c1 * ua * tmp1


@kernel
def viscous_jacobian(cell, axis, con43, c3c4, c1345, out):
    for r in range(5):
        for s in range(5):
            out[r, s] = 0.0
    a = 1 + axis
    tmp1 = 1.0 / cell[0]
    tmp2 = tmp1 * tmp1
    tmp3 = tmp1 * tmp2
    energy = -c1345 * tmp2 * cell[4]
    for r in range(1, 4):
        coef = con43 * c3c4 if r == a else c3c4
        out[r, 0] = -coef * tmp2 * cell[r]
        out[r, r] = coef * tmp1
        energy -= (coef - c1345) * tmp3 * cell[r] * cell[r]
        out[4, r] = (coef - c1345) * tmp2 * cell[r]
    out[4, 0] = energy
    out[4, 4] = c1345 * tmp1


@kernel
def solve5(mat, vec):
    """Solve mat x = vec in place in both arguments (Gaussian elimination, no pivoting)"""
    for p in range(5):
        inv = 1.0 / mat[p, p]
        for r in range(p + 1, 5):
            f = inv * mat[r, p]
            for s in range(p + 1, 5):
                mat[r, s] -= f * mat[p, s]
            vec[r] -= f * vec[p]
    for p in range(4, -1, -1):
        acc = vec[p]
        for s in range(p + 1, 5):
            acc -= mat[p, s] * vec[s]
        vec[p] = acc / mat[p, p]


@kernel
def gauss_jordan(b, c, r):
    """Overwrite c with b^-1 c and r with b^-1 r; b is destroyed"""
    for p in range(5):
        inv = 1.0 / b[p, p]
        for s in range(p + 1, 5):
            b[p, s] *= inv
        for s in range(5):
            c[p, s] *= inv
        r[p] *= inv
        for q in range(5):
            if q == p:
                continue
            f = b[q, p]
            for s in range(p + 1, 5):
                b[q, s] -= f * b[p, s]
            for s in range(5):
                c[q, s] -= f * c[p, s]
            r[q] -= f * r[p]


@kernel
def line_cell(axis, outer, line, p):
    """(k, j, i) of point p on a grid line; outer is k for x/y lines and j for z lines"""
    if axis == 0:
        return outer, line, p
    if axis == 1:
        return outer, p, line
    return p, outer, line


def sweep_layout(shape: Tuple[int, ...], axis: int) -> Tuple[range, int]:
    """Parallel index range and line count of a directional sweep"""
    nz, ny, nx = shape[:3]
    if axis == 0:
        return range(1, nz - 1), ny
    if axis == 1:
        return range(1, nz - 1), nx
    if axis == 2:
        return range(1, ny - 1), nx
    raise ValueError(f"axis must be 0, 1 or 2, got {axis}")
