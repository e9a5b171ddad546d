"""Portable deterministic random streams for noise injection.

Every verse gets its own stream, derived only from the run seed and the
verse identity, so corruption is reproducible byte-for-byte regardless of
processing order or parallelism. The construction is fully specified here
so an independent implementation can replay it:

Stream derivation
    ``state0`` = the first 8 bytes, big-endian, of
    ``SHA-256(f"{seed}|{label}|{book}|{chapter}|{verse}".encode("utf-8"))``.
    ``label`` tags the purpose of the stream: ``"corrupt"`` for the
    character passes, ``"select"`` for the per-verse corruption draw.

Generator
    SplitMix64 (Steele, Lea & Flood's standard constants). One step::

        state = (state + 0x9E3779B97F4A7C15) mod 2^64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) mod 2^64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) mod 2^64
        output = z ^ (z >> 31)

Uniform draws
    ``(output >> 11) * 2.0**-53``, i.e. the top 53 bits as an IEEE double
    in [0, 1).

Sub-seeds (noise-rate sweeps)
    ``SHA-256(f"{seed}|rate|{rate:.6f}")``, first 8 bytes big-endian,
    interpreted as the unsigned 64-bit seed of that corpus variant.
"""

from __future__ import annotations

import hashlib

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """Minimal SplitMix64 stream; state advances once per output."""

    __slots__ = ("_state",)

    def __init__(self, state: int):
        self._state = state & _MASK64

    def next_uint64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)

    def uniform(self) -> float:
        """Next double in [0, 1), from the top 53 bits."""
        return (self.next_uint64() >> 11) * 2.0**-53


def derive_state(seed: int, label: str, key: str) -> int:
    digest = hashlib.sha256(f"{seed}|{label}|{key}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def verse_stream(seed: int, label: str, verse_id) -> SplitMix64:
    """The stream for one verse: derived from (seed, label, verse identity)."""
    key = f"{verse_id.book}|{verse_id.chapter}|{verse_id.verse}"
    return SplitMix64(derive_state(seed, label, key))


def rate_subseed(seed: int, rate: float) -> int:
    """Deterministic per-rate sub-seed for sweep variants."""
    digest = hashlib.sha256(f"{seed}|rate|{rate:.6f}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")
