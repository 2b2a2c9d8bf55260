"""Deterministic random number generation.

All randomness in this package flows through SplitMix64 (Steele, Lea & Flood,
"Fast splittable pseudorandom number generators", OOPSLA 2014): the state is a
plain 64-bit counter advanced by a fixed odd constant, and every output is a
bijective avalanche mix of that counter. Integer-only arithmetic makes the
streams identical on every platform and independent of any library's RNG
internals. The numba kernels in ``_tree`` re-implement the same functions on
``uint64``; ``tests/test_rng.py`` pins both streams against each other.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """Finalizing avalanche mix of a 64-bit value (bijective on uint64)."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


def derive_stream(seed: int, index: int) -> int:
    """Mix (seed, index) into the starting state of an independent substream.

    Used to give each tree of a forest its own reproducible stream: the result
    depends only on the two integers, never on scheduling or thread count.
    """
    return mix64(mix64(seed & MASK64) ^ mix64((index & MASK64) ^ GOLDEN))


class SplitMix64:
    """Sequential SplitMix64 stream."""

    def __init__(self, seed: int):
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + GOLDEN) & MASK64
        return mix64(self._state)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n), unbiased via rejection sampling."""
        if n <= 0:
            raise ValueError("bound must be positive")
        threshold = (1 << 64) % n
        while True:
            r = self.next_u64()
            if r >= threshold:
                return r % n

    def shuffle(self, values) -> None:
        """In-place Fisher-Yates shuffle of a mutable sequence or 1-D array."""
        for i in range(len(values) - 1, 0, -1):
            j = self.below(i + 1)
            values[i], values[j] = values[j], values[i]
