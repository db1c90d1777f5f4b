# common/params.py
"""
Per-benchmark problem-class parameters.

Each benchmark's class table in ``constants`` is turned into a frozen
ClassParams carrying dimensions, the iteration count, the verification
epsilon and reference values, plus the operation-count formula used for
the MFLOPS (or Mop/s) figure.
"""
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Mapping, Tuple

import constants
from error_handler import UsageError


@dataclass(frozen=True)
class ClassParams:
    benchmark: str
    tag: str
    dims: Tuple[int, ...]
    niter: int
    epsilon: float
    reference: Mapping[str, Any] = field(default_factory=dict)
    extra: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if any(d <= 0 for d in self.dims):
            raise ValueError(f"{self.benchmark}.{self.tag}: dimensions must be positive")
        if self.epsilon <= 0.0:
            raise ValueError(f"{self.benchmark}.{self.tag}: epsilon must be positive")

    @property
    def size_label(self) -> str:
        if len(self.dims) == 1:
            return str(self.dims[0])
        return 'x'.join(str(d) for d in self.dims)

    def operations(self) -> float:
        """Operation count of the timed section, in millions"""
        return OPERATION_COUNTS[self.benchmark](self)

    def mflops(self, elapsed: float) -> float:
        if elapsed <= 0.0:
            return 0.0
        return self.operations() / elapsed


def _cfd_terms(params: ClassParams):
    n3 = float(params.dims[0] * params.dims[1] * params.dims[2])
    navg = (params.dims[0] + params.dims[1] + params.dims[2]) / 3.0
    return n3, navg


def _ep_ops(p: ClassParams) -> float:
    return 2.0 ** (p.extra['m'] + 1) / 1.0e6


def _cg_ops(p: ClassParams) -> float:
    na = p.dims[0]
    nonzer = p.extra['nonzer']
    nz1 = nonzer * (nonzer + 1)
    return 2.0 * p.niter * na * (3.0 + nz1 + 25.0 * (5.0 + nz1) + 3.0) / 1.0e6


def _ft_ops(p: ClassParams) -> float:
    ntotal = float(p.dims[0] * p.dims[1] * p.dims[2])
    log_n = math.log(ntotal)
    return 1.0e-6 * ntotal * (14.8157 + 7.19641 * log_n + (5.23518 + 7.21113 * log_n) * p.niter)


def _is_ops(p: ClassParams) -> float:
    return float(p.dims[0]) * p.niter / 1.0e6


def _mg_ops(p: ClassParams) -> float:
    return 58.0 * p.niter * float(p.dims[0] * p.dims[1] * p.dims[2]) / 1.0e6


def _bt_ops(p: ClassParams) -> float:
    n3, navg = _cfd_terms(p)
    return 1.0e-6 * p.niter * (3478.8 * n3 - 17655.7 * navg * navg + 28023.7 * navg)


def _sp_ops(p: ClassParams) -> float:
    n3, navg = _cfd_terms(p)
    return (881.174 * n3 - 4683.91 * navg * navg + 11484.5 * navg - 19272.4) * p.niter / 1.0e6


def _lu_ops(p: ClassParams) -> float:
    n3, navg = _cfd_terms(p)
    return p.niter * (1984.77 * n3 - 10923.3 * navg * navg + 27770.9 * navg - 144010.0) / 1.0e6


OPERATION_COUNTS: Dict[str, Callable[[ClassParams], float]] = {
    'ep': _ep_ops, 'cg': _cg_ops, 'ft': _ft_ops, 'is': _is_ops,
    'mg': _mg_ops, 'bt': _bt_ops, 'sp': _sp_ops, 'lu': _lu_ops,
}

OPERATION_TYPES = {
    'ep': 'Random numbers generated',
    'is': 'keys ranked',
}


def _ep(tag, row):
    return ClassParams('ep', tag, (2 ** (row['m'] + 1),), 0, constants.DEFAULT_EPSILON,
                       reference={'sx': row['sx'], 'sy': row['sy'], 'q': row['q']},
                       extra={'m': row['m']})


def _cg(tag, row):
    return ClassParams('cg', tag, (row['na'],), row['niter'], constants.CG_EPSILON,
                       reference={'zeta': row['zeta']},
                       extra={'nonzer': row['nonzer'], 'shift': row['shift'],
                              'rcond': constants.CG_RCOND})


def _ft(tag, row):
    return ClassParams('ft', tag, tuple(row['dims']), row['niter'], constants.FT_EPSILON,
                       reference={'checksums': row['checksums']})


def _is(tag, row):
    return ClassParams('is', tag, (2 ** row['total_keys_log2'],), constants.IS_ITERATIONS,
                       constants.DEFAULT_EPSILON,
                       reference={'test_index': row['test_index'], 'test_rank': row['test_rank']},
                       extra={'max_key_log2': row['max_key_log2'],
                              'buckets_log2': row['buckets_log2']})


def _mg(tag, row):
    n = row['n']
    return ClassParams('mg', tag, (n, n, n), row['niter'], constants.DEFAULT_EPSILON,
                       reference={'rnm2': row['rnm2']},
                       extra={'a': constants.MG_A_COEFFS, 'c': row['c']})


def _cfd(benchmark):
    def build(tag, row):
        n = row['n']
        reference = {'xcr': row['xcr'], 'xce': row['xce']}
        if 'xci' in row:
            reference['xci'] = row['xci']
        extra = {'dt': row['dt']}
        if 'stack_reserve' in row:
            extra['stack_reserve'] = row['stack_reserve']
        if benchmark == 'lu':
            extra['omega'] = constants.LU_OMEGA
        return ClassParams(benchmark, tag, (n, n, n), row['niter'], constants.DEFAULT_EPSILON,
                           reference=reference, extra=extra)
    return build


_TABLES = {
    'ep': (constants.EP_CLASSES, _ep),
    'cg': (constants.CG_CLASSES, _cg),
    'ft': (constants.FT_CLASSES, _ft),
    'is': (constants.IS_CLASSES, _is),
    'mg': (constants.MG_CLASSES, _mg),
    'bt': (constants.BT_CLASSES, _cfd('bt')),
    'sp': (constants.SP_CLASSES, _cfd('sp')),
    'lu': (constants.LU_CLASSES, _cfd('lu')),
}


def class_params(benchmark: str, tag: str) -> ClassParams:
    """Look up the parameters of one benchmark/class pair"""
    benchmark = benchmark.lower()
    tag = tag.upper()
    if benchmark not in _TABLES:
        raise UsageError(f"unknown benchmark '{benchmark}' (expected one of {', '.join(constants.BENCHMARKS)})")
    table, build = _TABLES[benchmark]
    if tag not in table:
        raise UsageError(f"class '{tag}' is not supported by {benchmark.upper()} "
                         f"(expected one of {', '.join(constants.SUPPORTED_CLASSES)})")
    return build(tag, table[tag])
