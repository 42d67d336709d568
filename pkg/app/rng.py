"""Seeded random streams.

Every random draw in powsim comes from numpy's ``PCG64`` bit generator seeded
through ``SeedSequence``. Streams are derived from a run seed plus a tuple of
non-negative integer keys, so two components never share a stream and a
result never depends on the order in which nodes are visited. The generator
family is part of the output contract: changing it changes every trace.
"""

from typing import Optional

import numpy as np

# Stream ids
PRODUCTION = 1
ADVERSARY = 2
POLICY = 3
LATENCY = 4
ROLES = 5
PARTITION = 6
DELAY = 7
INITIAL_POLICY = 8
SURPLUS = 9
RACES = 10
MISMATCH = 11
PROFILES = 12
TOPOLOGY = 13


def _entropy(seed: int, keys) -> list:
    words = [int(seed) & 0xFFFFFFFFFFFFFFFF]
    for key in keys:
        if key < 0:
            raise ValueError(f"rng keys must be non-negative, got {key}")
        words.append(int(key))
    return words


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    """Return an independent PCG64 generator for (seed, *keys)."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(_entropy(seed, keys))))


def sub_seed(seed: int, *keys: int) -> int:
    """Derive a 32-bit integer seed, for libraries that take plain ints."""
    return int(np.random.SeedSequence(_entropy(seed, keys)).generate_state(1)[0])


class NodeDraws:
    """Pre-drawn uniforms for one node at one tick.

    Provides the two ``numpy.random.Generator`` methods ``step_policy``
    calls, ``random()`` and ``integers(high)``. Draws are
    consumed in order from a fixed-width row; running out means the caller
    asked for more draws than one kernel step can use.
    """

    __slots__ = ("_row", "_pos")

    def __init__(self, row):
        self._row = row
        self._pos = 0

    def _next(self) -> float:
        if self._pos >= len(self._row):
            raise IndexError("NodeDraws exhausted")
        value = float(self._row[self._pos])
        self._pos += 1
        return value

    def random(self) -> float:
        return self._next()

    def integers(self, low: int, high: Optional[int] = None) -> int:
        if high is None:
            low, high = 0, low
        return low + min(int(self._next() * (high - low)), high - low - 1)


DRAWS_PER_NODE = 3


def tick_draws(seed: int, tick: int, node_count: int) -> np.ndarray:
    """Uniform matrix of shape (node_count, DRAWS_PER_NODE) for one tick."""
    return make_rng(seed, POLICY, tick).random((node_count, DRAWS_PER_NODE))
