# common/randdp.py
"""
Double-precision linear congruential generator, x <- a*x mod 2^46.

Both operands are held exactly in doubles and multiplied through 23-bit
halves, so every intermediate is an exactly representable integer and the
stream is bit-identical to arbitrary-precision modular arithmetic.
"""
from dataclasses import dataclass

import numpy as np

from common.jit import kernel
from constants import LCG_MULTIPLIER, DEFAULT_SEED

R23 = 0.5 ** 23
T23 = 2.0 ** 23
R46 = R23 * R23
T46 = T23 * T23


@kernel
def lcg_multiply(a, x):
    """Return a*x mod 2^46 for integer-valued doubles 0 < a, x < 2^46"""
    t1 = R23 * a
    a1 = float(np.int64(t1))
    a2 = a - T23 * a1

    t1 = R23 * x
    x1 = float(np.int64(t1))
    x2 = x - T23 * x1
    t1 = a1 * x2 + a2 * x1
    t2 = float(np.int64(R23 * t1))
    z = t1 - T23 * t2
    t3 = T23 * z + a2 * x2
    t4 = float(np.int64(R46 * t3))
    return t3 - T46 * t4


@kernel
def randlc_kernel(x, a):
    """One step: returns (uniform value in (0,1), new seed)"""
    x = lcg_multiply(a, x)
    return R46 * x, x


@kernel
def vranlc_kernel(n, x, a, out, offset):
    """Fill out[offset:offset+n] with n successive draws, return the advanced seed"""
    for i in range(n):
        x = lcg_multiply(a, x)
        out[offset + i] = R46 * x
    return x


@kernel
def seed_advance_kernel(a, k):
    result = 1.0
    base = a
    while k > 0:
        if k & 1:
            result = lcg_multiply(base, result)
        base = lcg_multiply(base, base)
        k >>= 1
    return result


def seed_advance(a: float, k: int) -> float:
    """a^k mod 2^46 by binary exponentiation over the exact multiply"""
    if k < 0:
        raise ValueError("seed_advance exponent must be non-negative")
    return float(seed_advance_kernel(float(a), int(k)))


def jump_seed(seed: float, a: float, k: int) -> float:
    """Seed reached after k draws from ``seed``"""
    if k == 0:
        return float(seed)
    return float(lcg_multiply(seed_advance(a, k), float(seed)))


@dataclass
class RandomStream:
    """Single-owner generator state; parallel code derives per-chunk seeds with jump_seed()"""
    x: float = DEFAULT_SEED
    a: float = LCG_MULTIPLIER

    def randlc(self) -> float:
        value, self.x = randlc_kernel(self.x, self.a)
        return float(value)

    def vranlc(self, n: int, out: np.ndarray = None, offset: int = 0) -> np.ndarray:
        if n < 0:
            raise ValueError("vranlc count must be non-negative")
        if out is None:
            out = np.empty(n, dtype=np.float64)
            offset = 0
        self.x = float(vranlc_kernel(n, self.x, self.a, out, offset))
        return out
