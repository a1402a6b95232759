"""Tests 9-12: Maurer's universal statistic, linear complexity, serial and
approximate entropy."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bits import BitSequence
from .errors import DomainError
from .result import TestResult, recommend
from .special import erfc, igamc
from .templates import window_values

__all__ = [
    "UNIVERSAL_TABLE",
    "LINEAR_COMPLEXITY_PI",
    "PsiSquare",
    "universal_block_length",
    "universal_statistic",
    "universal_test",
    "berlekamp_massey",
    "linear_complexity_mean",
    "linear_complexity_test",
    "pattern_counts",
    "psi_square",
    "serial_test",
    "default_serial_m",
    "approximate_entropy_test",
]

# L -> (expected value of f_n, variance)
UNIVERSAL_TABLE = {
    6: (5.2177052, 2.954),
    7: (6.1962507, 3.125),
    8: (7.1836656, 3.238),
    9: (8.1764248, 3.311),
    10: (9.1723243, 3.356),
    11: (10.170032, 3.384),
    12: (11.168765, 3.401),
    13: (12.168070, 3.410),
    14: (13.167693, 3.416),
    15: (14.167488, 3.419),
    16: (15.167379, 3.421),
}


def universal_block_length(n: int) -> int:
    """Largest L in 6..16 with 10*2^L*L + 1000*2^L*L <= n."""
    best = None
    for L in UNIVERSAL_TABLE:
        if 1010 * 2**L * L <= n:
            best = L
    if best is None:
        raise DomainError(f"universal test needs n >= {1010 * 64 * 6}, got {n}")
    return best


def universal_statistic(bits: np.ndarray, L: int, Q: int) -> tuple[float, int]:
    """Return (f_n, K): mean log2 distance to the previous occurrence of each
    test-segment block value.

    Blocks are numbered from 1. A value not seen before counts as last seen
    at block 0.
    """
    total = bits.size // L
    K = total - Q
    if Q < 1 or K < 1:
        raise DomainError(f"need Q >= 1 and K >= 1 blocks, got Q={Q}, K={K}")
    weights = 1 << np.arange(L - 1, -1, -1, dtype=np.int64)
    values = bits[: total * L].reshape(total, L).astype(np.int64) @ weights
    index = np.arange(1, total + 1)
    order = np.lexsort((index, values))
    sorted_vals = values[order]
    sorted_idx = index[order]
    previous = np.zeros(total, dtype=np.int64)
    same = sorted_vals[1:] == sorted_vals[:-1]
    prev_sorted = np.where(same, sorted_idx[:-1], 0)
    previous[order[1:]] = prev_sorted
    test = slice(Q, total)
    fn = float(np.sum(np.log2(index[test] - previous[test]))) / K
    return fn, K


def universal_test(seq: BitSequence, L: int | None = None, Q: int | None = None) -> TestResult:
    n = seq.n
    if L is None:
        L = universal_block_length(n)
    if L not in UNIVERSAL_TABLE:
        raise DomainError(f"no expected value/variance for L={L}; use 6..16")
    if Q is None:
        Q = 10 * 2**L
    recommend(n >= 1342400, f"universal test on n={n}; 1342400 recommended")
    fn, K = universal_statistic(seq.bits, L, Q)
    expected, variance = UNIVERSAL_TABLE[L]
    c = 0.7 - 0.8 / L + (4.0 + 32.0 / L) * K ** (-3.0 / L) / 15.0
    sigma = c * math.sqrt(variance / K)
    x = abs(fn - expected) / (math.sqrt(2.0) * sigma)
    return TestResult(9, (erfc(x),), {"f_n": fn, "L": L, "Q": Q, "K": K, "sigma": sigma, "x": x})


def berlekamp_massey(block) -> int:
    """Length of the shortest LFSR over GF(2) that generates ``block``."""
    if isinstance(block, BitSequence):
        bits = block.bits.tolist()
    elif isinstance(block, np.ndarray):
        bits = block.tolist()
    else:
        bits = list(block)
    # polynomials as ints, bit j = coefficient of x^j; `window` has bit j =
    # s[i - j] so the discrepancy is the parity of C & window.
    C = B = 1
    L = 0
    shift = 1
    window = 0
    for i, b in enumerate(bits):
        window = (window << 1) | b
        if (C & window).bit_count() & 1:
            T = C
            C ^= B << shift
            if 2 * L <= i:
                L = i + 1 - L
                B = T
                shift = 1
                continue
        shift += 1
    return L


LINEAR_COMPLEXITY_PI = (0.01047, 0.03125, 0.125, 0.5, 0.25, 0.0625, 0.02078)


def linear_complexity_mean(M: int) -> float:
    return M / 2.0 + (9.0 + (-1) ** (M + 1)) / 36.0 - (M / 3.0 + 2.0 / 9.0) / 2.0**M


def linear_complexity_test(seq: BitSequence, M: int = 500) -> TestResult:
    n = seq.n
    if M < 1 or M > n:
        raise DomainError(f"block size M={M} must lie in 1..n={n}")
    recommend(500 <= M <= 5000, f"linear complexity with M={M}; 500..5000 recommended")
    recommend(n >= 10**6, f"linear complexity on n={n}; 10^6 recommended")
    N = n // M
    mu = linear_complexity_mean(M)
    sign = -1.0 if M % 2 else 1.0
    blocks = seq.bits[: N * M].reshape(N, M)
    L = np.array([berlekamp_massey(b) for b in blocks], dtype=np.float64)
    T = sign * (L - mu) + 2.0 / 9.0
    # V0: T <= -2.5, V1..V5: (-2.5,-1.5] .. (1.5,2.5], V6: T > 2.5
    classes = np.searchsorted(np.array([-2.5, -1.5, -0.5, 0.5, 1.5, 2.5]), T, side="left")
    nu = np.bincount(classes, minlength=7)
    expected = N * np.asarray(LINEAR_COMPLEXITY_PI)
    chi2 = float(np.sum((nu - expected) ** 2 / expected))
    p = igamc(3.0, chi2 / 2.0)
    return TestResult(10, (p,), {"chi2": chi2, "N": N, "M": M, "mu": mu, "nu": tuple(int(v) for v in nu)})


def pattern_counts(bits: np.ndarray, w: int) -> np.ndarray:
    """Counts of every w-bit pattern over the sequence wrapped by its first w-1 bits."""
    if w < 1:
        return np.array([bits.size], dtype=np.int64)
    ext = np.concatenate([bits, bits[: w - 1]])
    return np.bincount(window_values(ext, w), minlength=2**w)


def psi_square(bits: np.ndarray, w: int) -> float:
    """(2^w / n) * sum(count^2) - n; zero for w <= 0."""
    if w <= 0:
        return 0.0
    n = bits.size
    counts = pattern_counts(bits, w)
    sq = int(np.dot(counts, counts))
    return (2**w * sq - n * n) / n


@dataclass(frozen=True)
class PsiSquare:
    psi_m: float
    psi_m1: float
    psi_m2: float

    @property
    def del1(self) -> float:
        return self.psi_m - self.psi_m1

    @property
    def del2(self) -> float:
        return self.psi_m - 2.0 * self.psi_m1 + self.psi_m2


def default_serial_m(n: int) -> int:
    return max(1, min(16, int(math.floor(math.log2(n))) - 2))


def serial_test(seq: BitSequence, m: int | None = None) -> TestResult:
    n = seq.n
    if m is None:
        m = default_serial_m(n)
    if m < 1 or (n >= 8 and m > int(math.floor(math.log2(n))) - 2) or 2**m > n:
        raise DomainError(f"serial test pattern length m={m} too large for n={n}")
    psi = PsiSquare(*(psi_square(seq.bits, w) for w in (m, m - 1, m - 2)))
    # both differences are non-negative quadratic forms; clip rounding noise
    d1 = max(psi.del1, 0.0)
    d2 = max(psi.del2, 0.0)
    p1 = igamc(2.0 ** (m - 2), d1 / 2.0)
    p2 = igamc(2.0 ** (m - 3), d2 / 2.0)
    return TestResult(
        11,
        (p1, p2),
        {"m": m, "psi_m": psi.psi_m, "psi_m1": psi.psi_m1, "psi_m2": psi.psi_m2, "del1": psi.del1, "del2": psi.del2},
        labels=("del1", "del2"),
    )


def _phi(bits: np.ndarray, w: int) -> float:
    n = bits.size
    counts = pattern_counts(bits, w)
    c = counts[counts > 0] / n  # 0 * ln 0 := 0
    return float(np.sum(c * np.log(c)))


def approximate_entropy_test(seq: BitSequence, m: int = 2) -> TestResult:
    n = seq.n
    if m < 1 or 2 ** (m + 1) > n:
        raise DomainError(f"approximate entropy needs 1 <= m and 2^(m+1) <= n, got m={m}, n={n}")
    recommend(n >= 100, f"approximate entropy on n={n}; at least 100 recommended")
    phi_m = _phi(seq.bits, m)
    phi_m1 = _phi(seq.bits, m + 1)
    apen = phi_m - phi_m1
    chi2 = 2.0 * n * (math.log(2.0) - apen)
    p = igamc(2.0 ** (m - 1), max(chi2, 0.0) / 2.0)
    return TestResult(12, (p,), {"m": m, "ApEn": apen, "chi2": chi2, "phi_m": phi_m, "phi_m1": phi_m1})
