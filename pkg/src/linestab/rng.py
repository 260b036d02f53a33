"""Deterministic random rationals from a SplitMix64 stream.

The generator is fixed forever: SplitMix64 (Steele, Lea, Flood's public
domain mixer) over unsigned 64-bit integers, with the usual constants.  It is
implemented here in a dozen lines instead of delegating to the stdlib so the
byte stream is pinned by this file alone and cannot drift with interpreter
versions.  All derived samples (integers, rationals, subsets) are defined in
terms of next_u64 only.  The first outputs for seed 0 are frozen in the test
fixtures.
"""

from __future__ import annotations

from .scalar import Rat, ceil_rat, floor_rat, rat

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def _mix(z: int) -> int:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK
    return z ^ (z >> 31)


class Rng:
    """SplitMix64 stream with rational sampling helpers."""

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        return _mix(self._state)

    def spawn(self, index: int) -> "Rng":
        """Independent child stream; deterministic in (seed, index)."""
        return Rng(_mix((self._state + (index + 1) * _GAMMA) & _MASK))

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi], rejection-sampled to kill modulo bias."""
        if lo > hi:
            raise ValueError("empty range")
        span = hi - lo + 1
        limit = (1 << 64) - ((1 << 64) % span)
        u = self.next_u64()
        while u >= limit:
            u = self.next_u64()
        return lo + (u % span)

    def sign(self) -> int:
        return 1 if self.next_u64() & 1 else -1

    def fraction(self, lo, hi, max_den: int = 64) -> Rat:
        """Uniform-ish rational in [lo, hi]: pick a denominator, then a numerator."""
        lo, hi = rat(lo), rat(hi)
        if lo > hi:
            raise ValueError("empty range")
        den = self.randint(1, max_den)
        n_lo = ceil_rat(lo * den)
        n_hi = floor_rat(hi * den)
        if n_lo > n_hi:
            # Range narrower than 1/den; fall back to the left endpoint.
            return lo
        return Rat(self.randint(n_lo, n_hi), den)

    def jitter(self, bound, steps: int = 1000) -> Rat:
        """Uniform on the grid {-bound, ..., -bound/steps, 0, ..., bound}."""
        return rat(bound) * Rat(self.randint(-steps, steps), steps)

    def choice(self, seq):
        if not seq:
            raise ValueError("empty sequence")
        return seq[self.randint(0, len(seq) - 1)]

    def subset(self, seq, size: int) -> list:
        """Sample `size` distinct elements, preserving order of `seq`."""
        if size > len(seq):
            raise ValueError("subset larger than population")
        pool = list(range(len(seq)))
        picked = []
        for _ in range(size):
            picked.append(pool.pop(self.randint(0, len(pool) - 1)))
        return [seq[i] for i in sorted(picked)]
