"""Tests 5-6: binary matrix rank and discrete Fourier transform."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bits import BitSequence, to_signed
from .errors import DomainError
from .result import TestResult, recommend
from .special import erfc, igamc

__all__ = ["RANK_PROBABILITIES", "RankCounts", "gf2_rank", "rank_counts", "matrix_rank_test", "dft_magnitudes", "dft_test"]

# full rank, rank M-1, rank <= M-2 (the last class absorbs everything below)
RANK_PROBABILITIES = (0.2888, 0.5776, 0.1336)
MATRIX_SIZE = 32


def _rank_of_rows(rows: list[int]) -> int:
    """Rank over GF(2) of rows packed as Python ints."""
    rank = 0
    rows = [r for r in rows if r]
    while rows:
        pivot = rows.pop()
        rank += 1
        low = pivot & -pivot
        rows = [r ^ pivot if r & low else r for r in rows]
        rows = [r for r in rows if r]
    return rank


def gf2_rank(matrix) -> int:
    """Rank over GF(2) of a 2-D 0/1 array (Gaussian elimination)."""
    a = np.asarray(matrix, dtype=np.uint8)
    if a.ndim != 2 or 0 in a.shape:
        raise DomainError("matrix must be 2-D and non-empty")
    rows = [int("".join(map(str, r)), 2) for r in a.tolist()]
    return _rank_of_rows(rows)


@dataclass(frozen=True)
class RankCounts:
    full: int
    minus_one: int
    lower: int

    @property
    def N(self) -> int:
        return self.full + self.minus_one + self.lower

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.full, self.minus_one, self.lower)


def rank_counts(seq: BitSequence, size: int = MATRIX_SIZE) -> RankCounts:
    N = seq.n // (size * size)
    mats = seq.bits[: N * size * size].reshape(N, size, size)
    weights = np.left_shift(np.uint64(1), np.arange(size - 1, -1, -1, dtype=np.uint64))
    packed = (mats.astype(np.uint64) * weights).sum(axis=2)
    ranks = [_rank_of_rows(row.tolist()) for row in packed]
    ranks = np.asarray(ranks)
    full = int(np.count_nonzero(ranks == size))
    minus_one = int(np.count_nonzero(ranks == size - 1))
    return RankCounts(full, minus_one, N - full - minus_one)


def matrix_rank_test(seq: BitSequence) -> TestResult:
    need = 38 * MATRIX_SIZE * MATRIX_SIZE
    if seq.n < need:
        raise DomainError(f"matrix rank test needs n >= {need}, got {seq.n}")
    counts = rank_counts(seq)
    N = counts.N
    chi2 = sum((f - N * p) ** 2 / (N * p) for f, p in zip(counts.as_tuple(), RANK_PROBABILITIES))
    # two degrees of freedom: igamc(1, x) = exp(-x)
    p = igamc(1.0, chi2 / 2.0)
    return TestResult(5, (p,), {"chi2": chi2, "N": N, "F_M": counts.full, "F_M1": counts.minus_one, "F_M2": counts.lower})


def dft_magnitudes(seq: BitSequence) -> np.ndarray:
    """|F_j| for j = 0 .. n/2 - 1 of the +/-1 sequence."""
    x = to_signed(seq).astype(np.float64)
    return np.abs(np.fft.fft(x)[: seq.n // 2])


def dft_test(seq: BitSequence, log_base: str = "e", variance_divisor: int = 2) -> TestResult:
    """Spectral test.

    ``log_base`` selects the log in the peak threshold sqrt(log(1/0.05) n);
    ``variance_divisor`` is the 2 in sqrt(n * 0.95 * 0.05 / 2) (4 gives the
    later NIST correction).
    """
    n = seq.n
    if n % 2:
        raise DomainError(f"DFT test needs an even bit count, got {n}")
    recommend(n >= 1000, f"DFT test on n={n} bits; at least 1000 recommended")
    if log_base == "e":
        log20 = math.log(20.0)
    elif log_base == "10":
        log20 = math.log10(20.0)
    else:
        raise DomainError("log_base must be 'e' or '10'")
    if variance_divisor not in (2, 4):
        raise DomainError("variance_divisor must be 2 or 4")
    mags = dft_magnitudes(seq)
    T = math.sqrt(log20 * n)
    N0 = 0.95 * n / 2.0
    N1 = int(np.count_nonzero(mags < T))
    d = (N1 - N0) / math.sqrt(n * 0.95 * 0.05 / variance_divisor)
    p = erfc(abs(d) / math.sqrt(2.0))
    return TestResult(6, (p,), {"T": T, "N0": N0, "N1": N1, "d": d})
