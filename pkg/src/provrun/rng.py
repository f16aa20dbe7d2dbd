"""SplitMix64: the fixed deterministic generator behind the demo event source.

The constants are the standard public ones, so any implementation seeded
identically produces the identical stream; event payloads are reproducible
byte-for-byte because of this.
"""

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

# one draw consumes the top 53 bits, giving a uniform double in [0, 1)
_DOUBLE_SCALE = 1.0 / (1 << 53)


class SplitMix64:
    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_uint64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)

    def next_double(self) -> float:
        return (self.next_uint64() >> 11) * _DOUBLE_SCALE
