"""Park-Miller and Knuth LCGs and the Blum-Blum-Shub generator.

Each generator turns a seed into a deterministic :class:`BitSequence`.
LCG output words are cut down to their most significant bits (the low
bits of an LCG are weak); BBS yields the low bit of each squaring.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .bits import BitSequence
from .errors import ConfigError

try:  # ~3x faster modular squaring for the 1024-bit BBS modulus
    from gmpy2 import mpz as _bigint
except ImportError:  # pragma: no cover
    _bigint = int

__all__ = [
    "PM_MODULUS",
    "PM_MULTIPLIER",
    "KNUTH_MULTIPLIER",
    "KNUTH_INCREMENT",
    "BBS_DEFAULT_P",
    "BBS_DEFAULT_Q",
    "pm_next",
    "knuth_next",
    "bbs_next",
    "GeneratorSpec",
    "generate",
]

PM_MODULUS = 2**31 - 1
PM_MULTIPLIER = 16807

KNUTH_MULTIPLIER = 6364136223846793005
KNUTH_INCREMENT = 1442695040888963407
_MASK64 = 2**64 - 1

# 512-bit primes, both = 3 (mod 4): the largest below 2**512 and the
# largest below 3 * 2**510.
BBS_DEFAULT_P = int(
    "1340780792994259709957402499820584612747936582059239337772356144372176403007"
    "3546976801874298166903427690031858186486050853753882811946569946433649006083527"
)
BBS_DEFAULT_Q = int(
    "1005585594745694782468051874865438459560952436544429503329267108279132302255"
    "5160232601405723625177570767523893639864538140315412108959927459825236754561259"
)

KINDS = ("pm", "knuth", "bbs")


def pm_next(x: int) -> int:
    """One step of the minimal-standard multiplicative LCG."""
    return (PM_MULTIPLIER * x) % PM_MODULUS


def knuth_next(x: int) -> int:
    """One step of the 64-bit MMIX mixed LCG."""
    return (KNUTH_MULTIPLIER * x + KNUTH_INCREMENT) & _MASK64


def bbs_next(x: int, modulus: int) -> tuple[int, int]:
    """Square modulo ``modulus``; return the new state and its low bit."""
    x = x * x % modulus
    return x, int(x & 1)


def _words_to_bits(words: np.ndarray, word_bits: int, keep: int) -> np.ndarray:
    shifts = np.arange(word_bits - 1, word_bits - 1 - keep, -1, dtype=np.uint64)
    return ((words[:, None] >> shifts) & np.uint64(1)).astype(np.uint8).ravel()


def _pm_bits(seed: int, n: int, keep: int) -> np.ndarray:
    count = -(-n // keep)
    words = np.empty(count, dtype=np.uint64)
    x = seed
    for i in range(count):
        x = PM_MULTIPLIER * x % PM_MODULUS
        words[i] = x
    return _words_to_bits(words, 31, keep)[:n]


def _knuth_bits(seed: int, n: int, keep: int) -> np.ndarray:
    count = -(-n // keep)
    words = np.empty(count, dtype=np.uint64)
    x = seed
    for i in range(count):
        x = (KNUTH_MULTIPLIER * x + KNUTH_INCREMENT) & _MASK64
        words[i] = x
    return _words_to_bits(words, 64, keep)[:n]


def _bbs_bits(x0: int, modulus: int, n: int) -> np.ndarray:
    out = bytearray(n)
    x = _bigint(x0)
    m = _bigint(modulus)
    for i in range(n):
        x = x * x % m
        out[i] = x & 1
    return np.frombuffer(bytes(out), dtype=np.uint8)


@dataclass(frozen=True)
class GeneratorSpec:
    """A generator kind plus its seed material.

    ``seed`` seeds the LCGs; BBS uses ``p``, ``q`` and ``x0``.
    ``bits_per_word`` is how many leading bits of each LCG word are kept
    (defaults: 8 for Park-Miller, 32 for Knuth).
    """

    kind: str
    seed: int = 1
    p: int = BBS_DEFAULT_P
    q: int = BBS_DEFAULT_Q
    x0: int = 3
    bits_per_word: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown generator {self.kind!r}; choose from {', '.join(KINDS)}")
        self.validate()

    @property
    def word_bits(self) -> int:
        if self.bits_per_word is not None:
            return self.bits_per_word
        return 8 if self.kind == "pm" else 32

    def validate(self) -> None:
        if self.kind == "pm":
            if not 0 < self.seed < PM_MODULUS:
                raise ConfigError(f"Park-Miller seed must lie in [1, {PM_MODULUS - 1}], got {self.seed}")
            if not 1 <= self.word_bits <= 31:
                raise ConfigError("pm.bits_per_word must be in 1..31")
        elif self.kind == "knuth":
            if not 0 <= self.seed <= _MASK64:
                raise ConfigError("Knuth seed must be a 64-bit unsigned integer")
            if not 1 <= self.word_bits <= 64:
                raise ConfigError("knuth.bits_per_word must be in 1..64")
        else:
            p, q = self.p, self.q
            if p == q or p % 4 != 3 or q % 4 != 3:
                raise ConfigError("BBS needs distinct p, q with p = q = 3 (mod 4)")
            m = p * q
            if not 1 < self.x0 < m or math.gcd(self.x0, m) != 1:
                raise ConfigError("BBS x0 must satisfy 1 < x0 < pq and gcd(x0, pq) = 1")

    @property
    def modulus(self) -> int:
        return self.p * self.q

    def for_sequence(self, k: int) -> "GeneratorSpec":
        """Seed material for sequence ``k`` of a campaign.

        LCGs use seed + k; BBS uses (x0 + k)^2 mod pq.
        """
        if self.kind == "pm":
            return replace(self, seed=self.seed + k)
        if self.kind == "knuth":
            return replace(self, seed=(self.seed + k) & _MASK64)
        return replace(self, x0=pow(self.x0 + k, 2, self.modulus))

    def generate(self, n: int) -> BitSequence:
        if n < 1:
            raise ConfigError("bit count must be >= 1")
        if self.kind == "pm":
            arr = _pm_bits(self.seed, n, self.word_bits)
        elif self.kind == "knuth":
            arr = _knuth_bits(self.seed, n, self.word_bits)
        else:
            arr = _bbs_bits(self.x0, self.modulus, n)
        return BitSequence._wrap(arr)


def generate(kind: str, n: int, **seed) -> BitSequence:
    """``generate("bbs", 3, p=7, q=11, x0=2)`` and friends."""
    return GeneratorSpec(kind, **seed).generate(n)
