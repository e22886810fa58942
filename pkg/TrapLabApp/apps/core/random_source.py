# apps/core/random_source.py
# --------------------------------
# Reproducible random streams.
# A RandomSource is (64-bit seed, stream key); the same pair always yields the
# same sequence (PCG64 seeded through SeedSequence). Child streams come from
# spawn(i), which extends the key, so replica i of an experiment is spawn(i).

from __future__ import annotations

import math
from typing import Tuple, Union

import numpy as np

SEED_MASK = (1 << 64) - 1
BLOCK_SIZE = 4096


class RandomSource:
    """Seeded stream of random numbers. Draws advance the stream."""

    def __init__(self, seed: int, stream: Union[int, Tuple[int, ...]] = 0):
        self.seed = int(seed) & SEED_MASK
        self.key: Tuple[int, ...] = (stream,) if isinstance(stream, int) else tuple(stream)
        sequence = np.random.SeedSequence(self.seed, spawn_key=self.key)
        self.generator = np.random.Generator(np.random.PCG64(sequence))

    @property
    def stream(self) -> int:
        return self.key[-1]

    def spawn(self, index: int) -> "RandomSource":
        """Independent child stream; does not consume from this one."""
        return RandomSource(self.seed, self.key + (int(index),))

    def __repr__(self) -> str:
        return f"RandomSource(seed={self.seed}, key={self.key})"


RandomLike = Union[RandomSource, np.random.Generator, int]


def as_generator(rng: RandomLike) -> np.random.Generator:
    if isinstance(rng, RandomSource):
        return rng.generator
    if isinstance(rng, np.random.Generator):
        return rng
    return RandomSource(int(rng)).generator


class BufferedDraws:
    """Block-buffered uniforms on (0, 1] for per-step simulation loops.

    Drawing one number at a time from numpy is slow; blocks keep the
    consumption order identical to a single long uniform stream.
    """

    def __init__(self, rng: RandomLike, block: int = BLOCK_SIZE):
        self._gen = as_generator(rng)
        self._block = block
        self._buf = np.empty(0)
        self._pos = 0

    def uniform(self) -> float:
        if self._pos >= self._buf.size:
            # 1 - U maps [0, 1) onto (0, 1]
            self._buf = 1.0 - self._gen.random(self._block)
            self._pos = 0
        value = self._buf[self._pos]
        self._pos += 1
        return float(value)

    def exponential(self, mean: float = 1.0) -> float:
        """Inversion: -mean * ln U."""
        return -mean * math.log(self.uniform())

    def index(self, n: int) -> int:
        """Uniform index in range(n)."""
        k = int((1.0 - self.uniform()) * n)
        return k if k < n else n - 1
