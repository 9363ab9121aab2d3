"""Counter-based random streams.

Every random number of a simulation is a pure function of
``(master_seed, run_index, stream_tag, counter)``: the stream key is a
SplitMix64 hash of the first three, and the ``i``-th draw is the SplitMix64
finaliser applied to ``key + (i + 1) * GOLDEN``. The compiled kernel
implements exactly the same arithmetic, so both backends agree bit for bit.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
TAG_MULT = 0xD1B54A32D192ED03
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_INV_2_53 = 1.0 / 9007199254740992.0

TAG_OUTCOMES = 0
TAG_DRAW = 0x100
TAG_TIEBREAK = 0x200


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def stream_key(master_seed: int, run_index: int, tag: int) -> int:
    base = mix64(mix64(master_seed) ^ ((tag * TAG_MULT) & MASK64))
    return mix64(base + (run_index + 1) * GOLDEN)


def to_unit(x: int) -> float:
    """Top 53 bits as a double in [0, 1)."""
    return (x >> 11) * _INV_2_53


class CounterStream:
    """Sequential view of one counter-based stream."""

    __slots__ = ("key", "counter")

    def __init__(self, key: int, counter: int = 0):
        self.key = key
        self.counter = counter

    @classmethod
    def for_run(cls, master_seed: int, run_index: int, tag: int) -> CounterStream:
        return cls(stream_key(master_seed, run_index, tag))

    def next_u64(self) -> int:
        self.counter += 1
        return mix64(self.key + self.counter * GOLDEN)

    def random(self) -> float:
        return to_unit(self.next_u64())

    def below(self, n: int) -> int:
        """Integer in ``[0, n)`` by multiply-shift on the high 32 bits."""
        return ((self.next_u64() >> 32) * n) >> 32

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]


def mix64_array(z: np.ndarray) -> np.ndarray:
    z = z.astype(np.uint64, copy=True)
    z ^= z >> np.uint64(30)
    z *= np.uint64(_M1)
    z ^= z >> np.uint64(27)
    z *= np.uint64(_M2)
    z ^= z >> np.uint64(31)
    return z


def unit_block(key: int, count: int) -> np.ndarray:
    """The first ``count`` draws of a stream as doubles in [0, 1)."""
    counters = np.arange(1, count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        raw = mix64_array(np.uint64(key) + counters * np.uint64(GOLDEN))
    return (raw >> np.uint64(11)).astype(np.float64) * _INV_2_53


def stream_keys(master_seed: int, run_start: int, run_stop: int, tag: int) -> np.ndarray:
    """``stream_key`` for every run in ``[run_start, run_stop)`` at once."""
    base = mix64(mix64(master_seed) ^ ((tag * TAG_MULT) & MASK64))
    runs = np.arange(run_start + 1, run_stop + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return mix64_array(np.uint64(base) + runs * np.uint64(GOLDEN))
