"""Counter-based random number streams.

Every random quantity in the package is a pure function of
``(master seed, stream id, sample index, site / draw counter)``.  The
generator is Philox-4x32 with 10 rounds, evaluated at a counter built
from those four coordinates, so

* regeneration is exact: the same coordinates always yield the same
  uniform, independently of evaluation order or batching,
* lattice sites get independent streams, which makes coupled weight
  arrays (same uniforms, different rates) exact deterministic
  rescalings of one another,
* parallel generation needs no communication.

Stream ids partition the counter space between unrelated consumers
(weight lattices, auxiliary draws, event clocks); see :mod:`lpplab.streams`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit, uint64

__all__ = [
    "SeedRecord",
    "site_uniforms",
    "uniform_at",
    "UniformSequence",
    "MASK32",
    "MASK64",
]

MASK32 = 0xFFFFFFFF
MASK64 = 0xFFFFFFFFFFFFFFFF

# Philox-4x32 multipliers and key schedule (Weyl) constants.
_M0 = uint64(0xD2511F53)
_M1 = uint64(0xCD9E8D57)
_W0 = uint64(0x9E3779B9)
_W1 = uint64(0xBB67AE85)
_MASK32 = uint64(0xFFFFFFFF)
_U53 = uint64((1 << 53) - 1)
_INV53 = 2.0**-53


@njit(inline="always")
def philox_u53(c0, c1, c2, c3, k0, k1):
    """One 53-bit uniform in (0, 1) from a 4x32 counter and 2x32 key."""
    x0 = uint64(c0) & _MASK32
    x1 = uint64(c1) & _MASK32
    x2 = uint64(c2) & _MASK32
    x3 = uint64(c3) & _MASK32
    key0 = uint64(k0) & _MASK32
    key1 = uint64(k1) & _MASK32
    for _ in range(10):
        p0 = _M0 * x0
        p1 = _M1 * x2
        hi0 = p0 >> uint64(32)
        lo0 = p0 & _MASK32
        hi1 = p1 >> uint64(32)
        lo1 = p1 & _MASK32
        x0 = hi1 ^ x1 ^ key0
        x1 = lo1
        x2 = hi0 ^ x3 ^ key1
        x3 = lo0
        key0 = (key0 + _W0) & _MASK32
        key1 = (key1 + _W1) & _MASK32
    bits = ((x0 << uint64(21)) ^ (x1 >> uint64(11))) & _U53
    # +0.5 keeps the value strictly inside (0, 1); -log() stays finite.
    return (bits + 0.5) * _INV53


@njit(cache=True)
def _fill_site_uniforms(out, sample, stream, k0, k1):
    m1, n1 = out.shape
    for i in range(m1):
        for j in range(n1):
            out[i, j] = philox_u53(i, j, sample, stream, k0, k1)


@njit(cache=True)
def _uniform_at(i, j, sample, stream, k0, k1):
    return philox_u53(i, j, sample, stream, k0, k1)


@njit(cache=True)
def _fill_sequence(out, start, run, stream, k0, k1):
    for k in range(out.size):
        out[k] = philox_u53(start + k, run, 0, stream, k0, k1)


def split_seed(seed: int) -> tuple[int, int]:
    """Split a 64-bit master seed into the two 32-bit Philox key words."""
    s = int(seed) & MASK64
    return s & MASK32, (s >> 32) & MASK32


@dataclass(frozen=True)
class SeedRecord:
    """Coordinates that regenerate an array's randomness bit-identically."""

    seed: int
    stream: int = 0
    sample: int = 0

    def key_words(self) -> tuple[int, int]:
        return split_seed(self.seed)


def site_uniforms(m: int, n: int, record: SeedRecord) -> np.ndarray:
    """Uniforms for every lattice site of an ``(m+1, n+1)`` array.

    Entry ``(i, j)`` depends only on ``(seed, stream, sample, i, j)``.
    """
    if m < 0 or n < 0:
        raise ValueError("lattice dimensions must be nonnegative")
    k0, k1 = record.key_words()
    out = np.empty((m + 1, n + 1), dtype=np.float64)
    _fill_site_uniforms(out, record.sample, record.stream, k0, k1)
    return out


def uniform_at(i: int, j: int, record: SeedRecord) -> float:
    """Single site uniform; equals ``site_uniforms(...)[i, j]`` exactly."""
    k0, k1 = record.key_words()
    return float(_uniform_at(i, j, record.sample, record.stream, k0, k1))


class UniformSequence:
    """Sequential uniform stream for event-driven simulation.

    Draw ``k`` of run ``run`` on stream ``stream`` is
    ``philox(counter=(k, run, 0, stream), key=seed)``, so a run's whole
    draw sequence is reproducible and independent of other runs.
    """

    _BLOCK = 1024

    def __init__(self, record: SeedRecord):
        self._record = record
        self._k0, self._k1 = record.key_words()
        self._buf = np.empty(self._BLOCK, dtype=np.float64)
        self._next = 0
        self._fill_from = 0
        self._refill()

    def _refill(self) -> None:
        _fill_sequence(
            self._buf,
            self._fill_from,
            self._record.sample,
            self._record.stream,
            self._k0,
            self._k1,
        )
        self._fill_from += self._BLOCK

    def uniform(self) -> float:
        if self._next == self._BLOCK:
            self._refill()
            self._next = 0
        u = self._buf[self._next]
        self._next += 1
        return float(u)

    def exponential(self, rate: float) -> float:
        return -np.log(self.uniform()) / rate

    def bernoulli(self, p: float) -> bool:
        return self.uniform() < p
