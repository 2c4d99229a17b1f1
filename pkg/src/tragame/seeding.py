"""Deterministic seed derivation for hierarchical experiment streams.

SplitMix64 finalizer over (master seed, stream index): cheap, stateless,
and statistically independent enough that sibling streams (instances, runs
within an instance) do not correlate the way naive ``master + index``
seeding does with Mersenne Twister.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def derive_seed(master: int, index: int) -> int:
    """Derive the 64-bit seed of substream ``index`` under ``master``.

    Injective in index for fixed master (the finalizer is a bijection
    composed with distinct inputs), so substreams never collide.
    """
    if index < 0:
        raise ValueError("substream index must be non-negative")
    x = (master + (index + 1) * _GAMMA) & _MASK64
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & _MASK64
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & _MASK64
    x ^= x >> 31
    return x
