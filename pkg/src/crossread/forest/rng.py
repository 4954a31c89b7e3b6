"""Pinned pseudo-random generator for every stochastic step.

SplitMix64 is small enough to specify exactly, so trained models are
reproducible bit-for-bit across platforms and releases.  The state
update and output mix are the reference constants; derived draws are
defined here once and nowhere else:

- float64 in [0, 1): top 53 bits of the next output, divided by 2^53
- bounded int below n: next output modulo n (n is tiny against 2^64,
  so modulo bias is negligible and the rule stays one line)
- shuffle: Fisher-Yates from the last index down
- sample without replacement: partial Fisher-Yates, first k slots
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, seed: int) -> None:
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        return z ^ (z >> 31)

    def random(self) -> float:
        return (self.next_u64() >> 11) * 2.0**-53

    def randbelow(self, n: int) -> int:
        if n <= 0:
            raise ValueError(f"randbelow needs n >= 1, got {n}")
        return self.next_u64() % n

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]

    def sample_indices(self, n: int, k: int) -> list[int]:
        """k distinct indices from range(n), order defined by the draw."""
        if not 0 <= k <= n:
            raise ValueError(f"cannot sample {k} from {n}")
        pool = list(range(n))
        for i in range(k):
            j = i + self.randbelow(n - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]

    def bootstrap_indices(self, n: int, size: int) -> list[int]:
        """`size` draws from range(n) with replacement."""
        return [self.randbelow(n) for _ in range(size)]
