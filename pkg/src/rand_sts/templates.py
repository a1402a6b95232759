"""Tests 7-8: non-overlapping and overlapping template matching."""

from __future__ import annotations

import numpy as np

from .bits import BitSequence, from_ascii
from .errors import DomainError
from .result import TestResult, recommend
from .special import igamc

__all__ = [
    "DEFAULT_TEMPLATE",
    "OVERLAP_PI",
    "OVERLAP_PI_PUBLISHED",
    "overlap_class_probabilities",
    "is_aperiodic",
    "window_values",
    "count_non_overlapping",
    "count_overlapping_ones",
    "non_overlapping_template",
    "overlapping_template",
]

DEFAULT_TEMPLATE = "000000001"

OVERLAP_K = 5


def overlap_class_probabilities(M: int, m: int, K: int = OVERLAP_K) -> tuple[float, ...]:
    """Exact law of the number of overlapping m-ones matches in a random M-bit
    block, classes 0..K-1 and >= K.

    Markov chain over (current run of ones capped at m, matches capped at K).
    """
    dist = np.zeros((m + 1, K + 1))
    dist[0, 0] = 1.0
    for _ in range(M):
        nxt = np.zeros_like(dist)
        nxt[0] = 0.5 * dist.sum(axis=0)
        nxt[1:m] += 0.5 * dist[: m - 1]
        # a 1 that completes (or extends) a run of m ones is one more match
        hit = 0.5 * (dist[m - 1] + dist[m])
        nxt[m, 1:] += hit[:-1]
        nxt[m, K] += hit[K]
        dist = nxt
    return tuple(float(v) for v in dist.sum(axis=0))


# m=9, M=1032 (lambda = 2): 0.364091, 0.185659, 0.139381, 0.100571, 0.070432, 0.139865
OVERLAP_PI = overlap_class_probabilities(1032, 9)

# Older published table for the same (M, m); it overstates the tail classes
# and drives the test-8 P-values of good generators toward 0.
OVERLAP_PI_PUBLISHED = (0.324652, 0.182617, 0.142670, 0.106645, 0.077147, 0.166269)


def _template_bits(template) -> np.ndarray:
    if isinstance(template, str):
        template = from_ascii(template)
    if isinstance(template, BitSequence):
        return template.bits
    return BitSequence(template).bits


def is_aperiodic(template) -> bool:
    """True if no proper prefix of the template equals its suffix."""
    t = _template_bits(template).tolist()
    return all(t[:k] != t[-k:] for k in range(1, len(t)))


def window_values(bits: np.ndarray, m: int) -> np.ndarray:
    """Integer value of every length-m window, MSB first (len(bits) - m + 1 of them)."""
    count = bits.size - m + 1
    vals = np.zeros(count, dtype=np.int64)
    for j in range(m):
        vals = (vals << 1) | bits[j : j + count]
    return vals


def count_non_overlapping(block: np.ndarray, template: np.ndarray) -> int:
    """Matches found by a window that jumps past each hit and slides 1 otherwise."""
    m = template.size
    if block.size < m:
        return 0
    target = int(window_values(template, m)[0])
    hits = np.flatnonzero(window_values(block, m) == target)
    if hits.size == 0:
        return 0
    if np.all(np.diff(hits) >= m):
        return int(hits.size)
    count = 0
    next_free = -1
    for pos in hits.tolist():
        if pos >= next_free:
            count += 1
            next_free = pos + m
    return count


def non_overlapping_template(seq: BitSequence, template=DEFAULT_TEMPLATE, N: int = 8) -> TestResult:
    tpl = _template_bits(template)
    m = tpl.size
    if not 1 <= m <= 16:
        raise DomainError(f"template length must be 1..16, got {m}")
    if N < 1:
        raise DomainError("block count N must be >= 1")
    M = seq.n // N
    if m >= M:
        raise DomainError(f"template length {m} must be below the block size {M}")
    recommend(seq.n >= 1048576, f"non-overlapping template on n={seq.n}; 1048576 recommended")
    blocks = seq.bits[: N * M].reshape(N, M)
    W = np.array([count_non_overlapping(b, tpl) for b in blocks], dtype=np.float64)
    mu = (M - m + 1) / 2.0**m
    var = M * (1.0 / 2.0**m - (2.0 * m - 1.0) / 2.0 ** (2 * m))
    chi2 = float(np.sum((W - mu) ** 2) / var)
    p = igamc(N / 2.0, chi2 / 2.0)
    return TestResult(7, (p,), {"chi2": chi2, "mu": mu, "sigma2": var, "N": N, "M": M, "W": tuple(int(w) for w in W)})


def count_overlapping_ones(blocks: np.ndarray, m: int) -> np.ndarray:
    """Per row, the number of positions starting a run of m ones (window slides by 1)."""
    csum = np.zeros((blocks.shape[0], blocks.shape[1] + 1), dtype=np.int32)
    np.cumsum(blocks, axis=1, out=csum[:, 1:])
    return np.count_nonzero(csum[:, m:] - csum[:, :-m] == m, axis=1)


def overlapping_template(seq: BitSequence, m: int = 9, M: int = 1032, table: str = "exact") -> TestResult:
    """``table="published"`` swaps in OVERLAP_PI_PUBLISHED (m=9, M=1032 only)."""
    n = seq.n
    if n < M:
        raise DomainError(f"overlapping template test needs n >= M={M}, got {n}")
    if not 1 <= m < M:
        raise DomainError(f"template length m={m} must be in 1..M-1")
    recommend(n >= 10**6, f"overlapping template on n={n}; 10^6 recommended")
    lam = (M - m + 1) / 2.0**m
    if table == "published":
        if (M, m) != (1032, 9):
            raise DomainError("the published class table covers only m=9, M=1032")
        pi = OVERLAP_PI_PUBLISHED
    elif table == "exact":
        pi = OVERLAP_PI if (M, m) == (1032, 9) else overlap_class_probabilities(M, m)
    else:
        raise DomainError("table must be 'exact' or 'published'")
    N = n // M
    blocks = seq.bits[: N * M].reshape(N, M)
    counts = count_overlapping_ones(blocks, m)
    nu = np.bincount(np.minimum(counts, OVERLAP_K), minlength=OVERLAP_K + 1)
    expected = N * np.asarray(pi)
    chi2 = float(np.sum((nu - expected) ** 2 / expected))
    p = igamc(OVERLAP_K / 2.0, chi2 / 2.0)
    return TestResult(
        8, (p,), {"chi2": chi2, "N": N, "M": M, "lambda": lam, "eta": lam / 2.0, "nu": tuple(int(v) for v in nu)}
    )
