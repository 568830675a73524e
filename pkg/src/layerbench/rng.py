"""Deterministic 64-bit generator shared with the game front end.

Both the workbench and the browser game must derive identical disturbance
sequences from a session seed, so the generator is pinned exactly rather than
delegating to a runtime's default RNG:

    SplitMix64 (Steele, Lea, Flood 2014):
        state = (state + 0x9E3779B97F4A7C15) mod 2^64
        z = state
        z = (z XOR (z >> 30)) * 0xBF58476D1CE4E5B9   mod 2^64
        z = (z XOR (z >> 27)) * 0x94D049BB133111EB   mod 2^64
        output = z XOR (z >> 31)

    next_double = (output >> 11) * 2^-53        # uniform in [0, 1)

The top 53 bits of the output convert to an IEEE-754 double exactly, so any
implementation performing the same integer operations yields bit-identical
doubles. Any reimplementation can be checked against `REFERENCE_SEQUENCE`.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """Sequential SplitMix64 stream seeded by a 64-bit integer."""

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        return z ^ (z >> 31)

    def next_double(self) -> float:
        """Uniform double in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * 2.0 ** -53

    def next_signed_unit(self) -> float:
        """Uniform double in [-1, 1)."""
        return 2.0 * self.next_double() - 1.0

    def next_sign(self) -> int:
        """+1 or -1 from the top output bit."""
        return 1 if (self.next_u64() >> 63) else -1


# First outputs for seed 0, used by cross-implementation parity tests.
REFERENCE_SEQUENCE = (
    0xE220A8397B1DCDAF,
    0x6E789E6AA1B965F4,
    0x06C45D188009454F,
    0xF88BB8A8724C81EC,
    0x1B39896A51A8749B,
)
