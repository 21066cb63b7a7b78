"""Seedable uniform stream and the primitive variate generators.

The bit generator is numpy's PCG64: a 128-bit LCG with the XSL-RR output
function. Raw 64-bit outputs are turned into uniforms as (k + 1/2) * 2^-52
with k the top 52 bits, so every uniform lies strictly inside (0, 1) and the
sequence depends only on the seed.
"""
import logging
import math

import numpy as np
from scipy import special

from variate_defs import DomainError

logger = logging.getLogger(__name__)

MASK64 = (1 << 64) - 1
UNIFORM_SCALE = 2.0 ** -52
SMALLEST_POSITIVE = 5e-324


def splitmix64(value: int) -> int:
    """One splitmix64 step; a bijection on 64-bit integers with strong avalanche."""
    z = (value + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_worker_seed(seed: int, worker_index: int) -> int:
    """Seed for parallel worker ``worker_index``: splitmix64(seed XOR index)."""
    return splitmix64((seed ^ worker_index) & MASK64)


class RandomStream:
    """Deterministic source of uniforms on (0, 1).

    A stream is single-owner. Parallel work uses one stream per worker, see
    :meth:`spawn`.
    """

    BLOCK_SIZE = 4096

    def __init__(self, seed: int):
        if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
            raise DomainError(f"seed must be an integer, got {seed!r}")
        seed = int(seed)
        if not 0 <= seed <= MASK64:
            raise DomainError(f"seed must be an unsigned 64-bit integer, got {seed}")
        self.seed = seed
        self.position = 0
        self._bit_generator = np.random.PCG64(seed)
        self._block: list = []
        self._cursor = 0

    @property
    def bit_generator(self) -> np.random.PCG64:
        return self._bit_generator

    def _refill(self):
        raw = self._bit_generator.random_raw(self.BLOCK_SIZE)
        block = ((raw >> np.uint64(12)).astype(np.float64) + 0.5) * UNIFORM_SCALE
        self._block = block.tolist()
        self._cursor = 0

    def next_uniform(self) -> float:
        """Next uniform in (0, 1); consumes exactly one raw 64-bit draw."""
        if self._cursor >= len(self._block):
            self._refill()
        u = self._block[self._cursor]
        self._cursor += 1
        self.position += 1
        return u

    def uniforms(self, n: int) -> np.ndarray:
        return np.fromiter((self.next_uniform() for _ in range(n)), dtype=np.float64, count=n)

    def spawn(self, worker_index: int) -> "RandomStream":
        return RandomStream(derive_worker_seed(self.seed, worker_index))

    def __repr__(self) -> str:
        return f"RandomStream(seed={self.seed}, position={self.position})"


def sample_exponential(stream: RandomStream) -> float:
    """Standard exponential by inversion, -ln U."""
    return -math.log(stream.next_uniform())


def sample_normal(stream: RandomStream) -> float:
    """Standard normal by inversion of the normal CDF."""
    return float(special.ndtri(stream.next_uniform()))


def sample_sign(stream: RandomStream) -> int:
    return -1 if stream.next_uniform() < 0.5 else 1


def _log_gamma_marsaglia_tsang(stream: RandomStream, shape: float) -> float:
    # shape >= 1
    d = shape - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    while True:
        x = sample_normal(stream)
        v = 1.0 + c * x
        if v <= 0.0:
            continue
        log_v = 3.0 * math.log(v)
        v = v * v * v
        u = stream.next_uniform()
        x2 = x * x
        if u < 1.0 - 0.0331 * x2 * x2:
            return math.log(d) + log_v
        if math.log(u) < 0.5 * x2 + d * (1.0 - v + log_v):
            return math.log(d) + log_v


def sample_log_gamma(stream: RandomStream, shape: float) -> float:
    """Logarithm of a gamma(shape) variate.

    Shapes below one use the boost G_a = G_{a+1} U^{1/a}, applied in log domain
    so tiny shapes do not underflow.
    """
    if not math.isfinite(shape) or shape <= 0:
        raise DomainError(f"gamma shape must be positive, got {shape}")
    if shape >= 1.0:
        return _log_gamma_marsaglia_tsang(stream, shape)
    log_g = _log_gamma_marsaglia_tsang(stream, shape + 1.0)
    return log_g + math.log(stream.next_uniform()) / shape


def sample_gamma(stream: RandomStream, shape: float) -> float:
    """Gamma(shape, 1) variate, floored at the smallest positive double."""
    return max(math.exp(sample_log_gamma(stream, shape)), SMALLEST_POSITIVE)
