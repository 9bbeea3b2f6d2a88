"""Deterministic pseudo-random primitives for fold shuffling.

Cross-validation folds must be replicable from (seed, repeat_index) alone,
on any machine and in any port of this code. Library generators do not give
that guarantee across versions, so shuffling is built on splitmix64, which
is fully specified in a handful of integer operations:

    state <- (state + 0x9E3779B97F4A7C15) mod 2^64
    z <- state
    z <- (z XOR (z >> 30)) * 0xBF58476D1CE4E5B9  mod 2^64
    z <- (z XOR (z >> 27)) * 0x94D049BB133111EB  mod 2^64
    output = z XOR (z >> 31)

Shuffles are in-place Fisher-Yates, drawing ``j = next() mod (i + 1)`` for
``i = n-1 .. 1``. The modulo bias is irrelevant at these sizes; exact
replicability is the point. Golden fold fixtures in the test suite pin the
whole discipline.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


class SplitMix64:
    """splitmix64 stream over 64-bit unsigned outputs."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def shuffle(self, items: list) -> None:
        """Fisher-Yates shuffle, descending index, modulo draw."""
        for i in range(len(items) - 1, 0, -1):
            j = self.next_u64() % (i + 1)
            items[i], items[j] = items[j], items[i]


def stream_for_repeat(seed: int, repeat_index: int) -> SplitMix64:
    """Stream seeded as ``seed + (repeat_index + 1) * gamma`` mod 2^64.

    Each CV repeat gets an independent, documented starting state; repeats
    never share draws.
    """
    return SplitMix64((seed + (repeat_index + 1) * _GAMMA) & _MASK64)
