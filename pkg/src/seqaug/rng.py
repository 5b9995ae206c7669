"""Deterministic per-(utterance, epoch) random streams.

Generator: xoshiro256** (Blackman & Vigna), state seeded by splitmix64.

Seed derivation, all arithmetic modulo 2**64::

    h   = fnv1a64(utf8(utterance_id))
    k   = mix64(global_seed + GOLDEN)
    k   = mix64((k ^ h) + GOLDEN)
    k   = mix64((k ^ epoch) + GOLDEN)
    s_i = mix64(k + (i + 1) * GOLDEN)        for i = 0..3

where ``GOLDEN = 0x9E3779B97F4A7C15`` and ``mix64`` is the splitmix64
finalizer. This recipe is frozen: changing it changes every output byte.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from . import _kernels as K

GOLDEN = 0x9E3779B97F4A7C15
MASK64 = K.MASK64
FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3


def mix64(z: int) -> int:
    """splitmix64 finalizer."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


@lru_cache(maxsize=1 << 16)
def _id_hash(utterance_id: str) -> int:
    return fnv1a64(utterance_id.encode("utf-8"))


def fnv1a64(data: bytes) -> int:
    h = FNV_OFFSET
    for byte in data:
        h = ((h ^ byte) * FNV_PRIME) & MASK64
    return h


def derive_seed(global_seed: int, utterance_id: str, epoch: int) -> int:
    h = _id_hash(utterance_id)
    k = mix64(global_seed + GOLDEN)
    k = mix64((k ^ h) + GOLDEN)
    return mix64((k ^ (epoch & MASK64)) + GOLDEN)


def seed_state(key: int) -> np.ndarray:
    state = [mix64(key + (i + 1) * GOLDEN) for i in range(4)]
    if not any(state):
        state[0] = 1
    return np.array(state, dtype=np.uint64)


class RandomStream:
    """Single-owner xoshiro256** stream.

    Never share one instance across threads; derive one per task instead.
    """

    __slots__ = ("state",)

    def __init__(self, seed: int = 0):
        self.state = seed_state(seed & MASK64)

    @classmethod
    def from_state(cls, state) -> RandomStream:
        obj = cls.__new__(cls)
        obj.state = np.array(state, dtype=np.uint64)
        return obj

    def copy(self) -> RandomStream:
        return RandomStream.from_state(self.state)

    def next_u64(self) -> int:
        return int(K.next_u64(self.state))

    def next_unit_real(self) -> float:
        """Uniform on [0, 1) with 53 bits of resolution."""
        return float(K.unit_real(self.state))

    def next_int_inclusive(self, a: int, b: int) -> int:
        """Uniform on ``{a..b}`` by bitmask rejection; ``a == b`` draws nothing."""
        if b < a:
            raise ValueError(f"empty range [{a}, {b}]")
        return int(K.int_inclusive(self.state, a, b))

    def sample_without_replacement(self, n: int, m: int) -> np.ndarray:
        if not 0 <= m <= n:
            raise ValueError(f"cannot sample {m} of {n}")
        return K.sample_without_replacement(self.state, n, m)


def derive_stream(global_seed: int, utterance_id: str, epoch: int) -> RandomStream:
    """The sole randomness source for one utterance in one epoch."""
    if epoch < 0:
        raise ValueError("epoch must be >= 0")
    stream = RandomStream.__new__(RandomStream)
    stream.state = seed_state(derive_seed(global_seed, utterance_id, epoch))
    return stream
