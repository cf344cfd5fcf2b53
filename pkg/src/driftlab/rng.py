"""Deterministic random streams shared by every simulation lane.

The generator is xoshiro256++ seeded through splitmix64.  The compiled
kernels re-implement the same update rules on native 64-bit integers, so a
pure-Python run and a compiled run consume identical random words and
produce identical histories for equal seeds.  Independent streams (per
replica, per site, per purpose) are derived from a master seed with
``derive_seed`` so that evaluation order never matters.
"""

from __future__ import annotations

import math

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_DERIVE_SALT = 0xD1B54A32D192ED03

# 1/2^53, the spacing of the uniform grid produced by to_u01.
_U01_SCALE = 2.0**-53


def mix64(z: int) -> int:
    """splitmix64 output scrambler; a bijection on 64-bit words."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def splitmix64(state: int) -> tuple[int, int]:
    """Advance a splitmix64 state by one step; return (new_state, output)."""
    state = (state + GOLDEN) & MASK64
    return state, mix64(state)


def derive_seed(master: int, *ids: int) -> int:
    """Derive a stream seed from a master seed and a path of integer ids.

    Distinct id paths give statistically independent streams.  The same
    chain runs in the compiled kernels, so both lanes agree on every
    derived stream.
    """
    z = mix64((master & MASK64) ^ _DERIVE_SALT)
    for i in ids:
        z = mix64(z ^ ((i & MASK64) * GOLDEN & MASK64))
    return z


def to_u01(word: int) -> float:
    """Map a 64-bit word to the uniform grid {0, 1, ..., 2^53-1} / 2^53."""
    return (word >> 11) * _U01_SCALE


def site_uniform(seed: int, site: int) -> float:
    """Stateless per-site uniform in [0, 1); the hash behind frozen draws.

    Negative sites are folded through the 64-bit two's complement mask,
    matching the signed-to-unsigned cast in the compiled lane.
    """
    return to_u01(derive_seed(seed, site))


class Xoshiro256pp:
    """xoshiro256++ with the canonical splitmix64 seeding fill."""

    __slots__ = ("s0", "s1", "s2", "s3")

    def __init__(self, seed: int):
        state = seed & MASK64
        state, self.s0 = splitmix64(state)
        state, self.s1 = splitmix64(state)
        state, self.s2 = splitmix64(state)
        state, self.s3 = splitmix64(state)

    @classmethod
    def from_state(cls, s: tuple[int, int, int, int]) -> "Xoshiro256pp":
        rng = cls.__new__(cls)
        rng.s0, rng.s1, rng.s2, rng.s3 = (x & MASK64 for x in s)
        return rng

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self.s0, self.s1, self.s2, self.s3
        x = (s0 + s3) & MASK64
        result = (((x << 23) & MASK64 | (x >> 41)) + s0) & MASK64
        t = (s1 << 17) & MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        self.s0 = s0
        self.s1 = s1
        self.s2 = s2
        self.s3 = ((s3 << 45) & MASK64) | (s3 >> 19)
        return result

    def u01(self) -> float:
        """Uniform in [0, 1)."""
        return (self.next_u64() >> 11) * _U01_SCALE

    def expo(self, rate: float) -> float:
        """Exponential waiting time with the given rate."""
        return -math.log(1.0 - self.u01()) / rate

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n) via the multiply-shift reduction.

        The reduction bias is at most n/2^64, far below anything a
        statistical test at desk scale can see, and it is branch-free so
        both lanes consume exactly one word per call.
        """
        return (self.next_u64() * n) >> 64

    def bernoulli(self, p: float) -> int:
        """One draw with success probability p; consumes one word."""
        return 1 if self.u01() < p else 0
