"""Seeded pseudorandom numbers used everywhere randomness enters the pipeline.

The generator is SplitMix64: the k-th output (k = 1, 2, ...) for seed ``s`` is

    z = s + k * 0x9E3779B97F4A7C15            (mod 2**64)
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9  (mod 2**64)
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB  (mod 2**64)
    out = z ^ (z >> 31)

Because each output depends only on ``(s, k)``, blocks of outputs are computed
with vectorized uint64 arithmetic and the stream is identical on every
platform. Uniform doubles take the top 53 bits: ``(out >> 11) * 2**-53``.
"""

from __future__ import annotations

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_MASK64 = (1 << 64) - 1


class Rng:
    """Counter-based SplitMix64 stream."""

    def __init__(self, seed: int):
        self.seed = int(seed) & _MASK64
        self.counter = 0

    def next_u64(self, n: int) -> np.ndarray:
        k = np.arange(self.counter + 1, self.counter + n + 1, dtype=np.uint64)
        self.counter += n
        with np.errstate(over="ignore"):
            z = np.uint64(self.seed) + k * _GOLDEN
            z = (z ^ (z >> np.uint64(30))) * _MIX1
            z = (z ^ (z >> np.uint64(27))) * _MIX2
        return z ^ (z >> np.uint64(31))

    def random(self, n: int) -> np.ndarray:
        """``n`` doubles uniform on [0, 1)."""
        return (self.next_u64(n) >> np.uint64(11)).astype(np.float64) * (2.0**-53)

    def uniform(self, low: float, high: float, shape) -> np.ndarray:
        shape = (shape,) if isinstance(shape, int) else tuple(shape)
        n = int(np.prod(shape)) if shape else 1
        return (low + (high - low) * self.random(n)).reshape(shape)

    def permutation(self, n: int) -> np.ndarray:
        """Fisher-Yates shuffle of ``range(n)``, swapping from the end."""
        perm = np.arange(n)
        if n < 2:
            return perm
        u = self.random(n - 1)
        for step, i in enumerate(range(n - 1, 0, -1)):
            j = int(u[step] * (i + 1))
            perm[i], perm[j] = perm[j], perm[i]
        return perm

    def shuffle(self, items: list) -> list:
        return [items[i] for i in self.permutation(len(items))]


def derive_seed(seed: int, *tags: str) -> int:
    """Independent sub-seed for a named component, stable across runs."""
    value = int(seed) & _MASK64
    for tag in tags:
        for byte in tag.encode("utf-8"):
            value = (value * 0x100000001B3 ^ byte) & _MASK64
        value = int(Rng(value).next_u64(1)[0])
    return value
