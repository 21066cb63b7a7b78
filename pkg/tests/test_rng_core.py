"""
Tests for the seeded stream and the primitive variate generators.
"""

import math

import numpy as np
import pytest
from scipy import stats

from oracle_harness import clt_tolerance, ks_test
from rng_core import (
    MASK64,
    RandomStream,
    derive_worker_seed,
    sample_exponential,
    sample_gamma,
    sample_log_gamma,
    sample_normal,
    sample_sign,
    splitmix64,
)
from variate_defs import DomainError

PCG_MULTIPLIER = 0x2360ED051FC65DA44385DF649FCCF645
MASK128 = (1 << 128) - 1


def _pcg64_reference(state: int, inc: int, count: int):
    """Plain-integer PCG64 (step, then XSL-RR output)."""
    outputs = []
    for _ in range(count):
        state = (state * PCG_MULTIPLIER + inc) & MASK128
        folded = ((state >> 64) ^ state) & MASK64
        rot = state >> 122
        outputs.append(((folded >> rot) | (folded << ((64 - rot) & 63))) & MASK64)
    return outputs


@pytest.mark.unit
class TestRandomStream:

    def test_matches_reference_generator(self):
        state = 0x0123456789ABCDEFFEDCBA9876543210
        inc = 0x5851F42D4C957F2D14057B7EF767814F
        stream = RandomStream(1)
        stream.bit_generator.state = {
            "bit_generator": "PCG64",
            "state": {"state": state, "inc": inc},
            "has_uint32": 0,
            "uinteger": 0,
        }
        expected = [((raw >> 12) + 0.5) * 2.0 ** -52 for raw in _pcg64_reference(state, inc, 6)]
        assert [stream.next_uniform() for _ in range(6)] == expected

    def test_seed_42_golden_sequence(self):
        # numpy's published default_rng(42).random(5); same PCG64 seeding, uniforms differ by at most 2^-53
        stream = RandomStream(42)
        assert stream.next_uniform() == pytest.approx(0.7739560485559633, abs=2.0 ** -52)
        expected = [0.43887844, 0.85859792, 0.69736803, 0.09417735]
        assert [stream.next_uniform() for _ in range(4)] == pytest.approx(expected, abs=1e-8)

    def test_same_seed_same_sequence(self):
        first = RandomStream(7).uniforms(10_000)
        second = RandomStream(7).uniforms(10_000)
        np.testing.assert_array_equal(first, second)

    def test_different_seeds_differ(self):
        assert RandomStream(7).next_uniform() != RandomStream(8).next_uniform()

    def test_uniforms_strictly_inside_unit_interval(self):
        values = RandomStream(3).uniforms(3 * RandomStream.BLOCK_SIZE + 5)
        assert values.min() > 0.0
        assert values.max() < 1.0

    def test_position_counts_uniforms(self):
        stream = RandomStream(11)
        stream.uniforms(5000)
        assert stream.position == 5000

    def test_accepts_full_u64_range(self):
        RandomStream(0)
        RandomStream(MASK64)
        RandomStream(np.uint64(12345))

    @pytest.mark.parametrize("seed", [-1, 1 << 64, 1.5, True, "7"])
    def test_rejects_invalid_seed(self, seed):
        with pytest.raises(DomainError):
            RandomStream(seed)

    def test_spawn_uses_derived_seed(self):
        child = RandomStream(99).spawn(3)
        assert child.seed == derive_worker_seed(99, 3)


@pytest.mark.unit
class TestSeedDerivation:

    def test_splitmix64_known_value(self):
        assert splitmix64(0) == 0xE220A8397B1DCDAF

    def test_worker_seed_is_splitmix_of_xor(self):
        assert derive_worker_seed(12345, 6) == splitmix64(12345 ^ 6)

    def test_worker_seeds_distinct(self):
        seeds = {derive_worker_seed(42, i) for i in range(64)}
        assert len(seeds) == 64
        assert all(0 <= s <= MASK64 for s in seeds)


@pytest.mark.unit
class TestPrimitiveVariates:

    def test_exponential_by_inversion(self, scripted_stream):
        assert sample_exponential(scripted_stream([math.exp(-2.0)])) == pytest.approx(2.0, rel=1e-15)

    def test_normal_median(self, scripted_stream):
        assert sample_normal(scripted_stream([0.5])) == 0.0

    def test_normal_quantile(self, scripted_stream):
        assert sample_normal(scripted_stream([0.975])) == pytest.approx(1.959963984540054, rel=1e-12)

    def test_sign(self, scripted_stream):
        assert sample_sign(scripted_stream([0.3])) == -1
        assert sample_sign(scripted_stream([0.7])) == 1

    @pytest.mark.parametrize("shape", [0.0, -1.0, math.nan])
    def test_gamma_rejects_bad_shape(self, stream, shape):
        with pytest.raises(DomainError):
            sample_log_gamma(stream, shape)

    def test_tiny_shape_log_gamma_is_finite(self, stream):
        values = [sample_log_gamma(stream, 1e-3) for _ in range(200)]
        assert all(math.isfinite(v) for v in values)
        assert np.median(values) < -100.0

    def test_gamma_floor(self, stream):
        assert min(sample_gamma(stream, 1e-3) for _ in range(200)) >= 5e-324


@pytest.mark.statistical
class TestVariateDistributions:

    @pytest.mark.parametrize("shape", [0.3, 1.0, 5.0])
    def test_gamma_mean(self, shape):
        stream = RandomStream(1000 + int(10 * shape))
        n = 20_000
        values = np.array([sample_gamma(stream, shape) for _ in range(n)])
        assert abs(values.mean() - shape) <= clt_tolerance(math.sqrt(shape), n)

    @pytest.mark.parametrize("shape", [0.1, 0.5, 1.0, 2.5, 10.0])
    def test_gamma_ks(self, shape):
        stream = RandomStream(2000 + int(10 * shape))
        values = [sample_gamma(stream, shape) for _ in range(20_000)]
        result = ks_test(values, lambda x: stats.gamma.cdf(x, shape))
        assert result.pvalue > 1e-3

    def test_normal_ks(self):
        stream = RandomStream(31)
        result = ks_test([sample_normal(stream) for _ in range(20_000)], stats.norm.cdf)
        assert result.pvalue > 1e-3

    def test_exponential_ks(self):
        stream = RandomStream(32)
        result = ks_test([sample_exponential(stream) for _ in range(20_000)], stats.expon.cdf)
        assert result.pvalue > 1e-3
