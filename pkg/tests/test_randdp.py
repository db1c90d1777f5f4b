# tests/test_randdp.py
import numpy as np
import pytest

from common.randdp import RandomStream, jump_seed, lcg_multiply, seed_advance
from constants import DEFAULT_SEED, LCG_MULTIPLIER

MODULUS = 2 ** 46
A = int(LCG_MULTIPLIER)


def integer_stream(seed: int, n: int):
    """Arbitrary-precision reference stream"""
    x = seed
    for _ in range(n):
        x = (A * x) % MODULUS
        yield x


class TestLcgMultiply:

    def test_matches_integer_arithmetic(self):
        """a*x mod 2^46 is exact for operands near the modulus"""
        for a, x in [(A, 314159265), (MODULUS - 1, MODULUS - 1), (3, MODULUS - 5), (A, 1)]:
            assert lcg_multiply(float(a), float(x)) == float((a * x) % MODULUS)


class TestRandomStream:

    def test_first_ten_thousand_draws_bit_exact(self):
        """randlc reproduces the integer stream with zero tolerance"""
        stream = RandomStream(DEFAULT_SEED, LCG_MULTIPLIER)
        for expected in integer_stream(int(DEFAULT_SEED), 10000):
            value = stream.randlc()
            assert stream.x == float(expected)
            assert value == expected * 2.0 ** -46

    def test_vranlc_equals_repeated_randlc(self):
        """Batch generation and single draws give the same values and seed"""
        one = RandomStream(314159265.0)
        batch = RandomStream(314159265.0)
        values = batch.vranlc(257)
        singles = np.array([one.randlc() for _ in range(257)])
        assert np.array_equal(values, singles)
        assert one.x == batch.x

    def test_vranlc_offset_fills_slice_only(self):
        """Draws land at the requested offset"""
        out = np.full(10, -1.0)
        RandomStream().vranlc(4, out, offset=3)
        assert np.all(out[:3] == -1.0)
        assert np.all(out[7:] == -1.0)
        assert np.all((out[3:7] > 0.0) & (out[3:7] < 1.0))

    def test_negative_count_rejected(self):
        """vranlc refuses a negative count"""
        with pytest.raises(ValueError):
            RandomStream().vranlc(-1)


class TestSeedAdvance:

    @pytest.mark.parametrize('k', [0, 1, 2, 7, 64, 1000, 2 ** 16, 2 ** 31 + 5])
    def test_power_matches_pow(self, k):
        """a^k mod 2^46 agrees with Python's modular pow"""
        assert seed_advance(LCG_MULTIPLIER, k) == float(pow(A, k, MODULUS))

    def test_hundred_jumps_match_integer_oracle(self):
        """jump_seed(seed, a, k) equals the seed after k integer steps"""
        rng = np.random.default_rng(7)
        for k in rng.integers(0, 10 ** 9, size=100):
            k = int(k)
            expected = (pow(A, k, MODULUS) * int(DEFAULT_SEED)) % MODULUS
            assert jump_seed(DEFAULT_SEED, LCG_MULTIPLIER, k) == float(expected)

    def test_negative_exponent_rejected(self):
        """Negative jumps are not defined"""
        with pytest.raises(ValueError):
            seed_advance(LCG_MULTIPLIER, -1)
