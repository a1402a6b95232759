"""Tests 1-4: monobit, block frequency, runs and longest run of ones."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bits import BitSequence
from .errors import DomainError
from .result import TestResult, not_applicable, recommend
from .special import erfc, igamc

__all__ = [
    "LongestRunConfig",
    "LONGEST_RUN_CONFIGS",
    "monobit",
    "block_frequency",
    "default_block_size",
    "runs",
    "longest_run",
    "longest_run_config",
]


def monobit(seq: BitSequence) -> TestResult:
    n = seq.n
    recommend(n >= 100, f"monobit on n={n} bits; at least 100 recommended")
    s_n = 2 * seq.ones() - n
    s_obs = abs(s_n) / math.sqrt(n)
    p = erfc(s_obs / math.sqrt(2.0))
    return TestResult(1, (p,), {"S_n": s_n, "S_obs": s_obs})


def default_block_size(n: int) -> int:
    return 128 if n >= 9000 else max(20, n // 10)


def block_frequency(seq: BitSequence, M: int | None = None) -> TestResult:
    n = seq.n
    if M is None:
        M = min(default_block_size(n), n)
    if M < 1 or M > n:
        raise DomainError(f"block size M={M} must lie in 1..n={n}")
    N = n // M
    ones = seq.bits[: N * M].reshape(N, M).sum(axis=1, dtype=np.int64)
    # 4M * sum (ones/M - 1/2)^2 = sum (2*ones - M)^2 / M, exact in integers
    chi2 = float(np.sum((2 * ones - M) ** 2)) / M
    p = igamc(N / 2.0, chi2 / 2.0)
    return TestResult(2, (p,), {"chi2": chi2, "N": N, "M": M})


def runs(seq: BitSequence) -> TestResult:
    n = seq.n
    if n < 2:
        raise DomainError("runs test needs at least 2 bits")
    recommend(n >= 100, f"runs test on n={n} bits; at least 100 recommended")
    ones = seq.ones()
    pi = ones / n
    tau = 2.0 / math.sqrt(n)
    # |pi - 1/2| >= 2/sqrt(n) in integers, so the gate is exact and symmetric
    if (2 * ones - n) ** 2 >= 16 * n:
        return not_applicable(3, "prerequisite frequency failure", pi=pi, tau=tau)
    b = seq.bits
    v_obs = 1 + int(np.count_nonzero(b[1:] != b[:-1]))
    pq = pi * (1.0 - pi)
    x = abs(v_obs - 2.0 * n * pq) / (2.0 * math.sqrt(2.0 * n) * pq)
    return TestResult(3, (erfc(x),), {"pi": pi, "V_obs": v_obs, "x": x})


@dataclass(frozen=True)
class LongestRunConfig:
    """Block size M, degrees of freedom K and class probabilities.

    Class 0 collects longest runs <= ``lowest``; class K collects runs
    >= ``lowest + K``.
    """

    M: int
    K: int
    lowest: int
    pi: tuple[float, ...]
    min_n: int

    def classify(self, longest: np.ndarray) -> np.ndarray:
        return np.clip(longest - self.lowest, 0, self.K)


# Class probabilities transcribed from NIST SP 800-22 rev1a, section 3.4.
# The M=8 row is exact (55/256, 94/256, 59/256, 48/256).
LONGEST_RUN_CONFIGS = {
    8: LongestRunConfig(8, 3, 1, (0.21484375, 0.3671875, 0.23046875, 0.1875), 128),
    128: LongestRunConfig(
        128, 5, 4, (0.1174035788, 0.242955959, 0.249363483, 0.17517706, 0.102701071, 0.112398847), 6272
    ),
    512: LongestRunConfig(512, 5, 6, (0.1170, 0.2460, 0.2523, 0.1755, 0.1015, 0.1077), 6272),
    1000: LongestRunConfig(1000, 5, 7, (0.1307, 0.2437, 0.2452, 0.1714, 0.1002, 0.1088), 6272),
    10000: LongestRunConfig(10000, 6, 10, (0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727), 750000),
}


def longest_run_config(n: int) -> LongestRunConfig:
    if n >= 750000:
        return LONGEST_RUN_CONFIGS[10000]
    if n >= 6272:
        return LONGEST_RUN_CONFIGS[128]
    return LONGEST_RUN_CONFIGS[8]


def _longest_ones(blocks: np.ndarray) -> np.ndarray:
    """Length of the longest run of 1s in each row."""
    N, M = blocks.shape
    # index of the most recent 0 at or before each column (-1 if none)
    idx = np.where(blocks == 0, np.arange(M), -1)
    last_zero = np.maximum.accumulate(idx, axis=1)
    run = np.arange(M) - last_zero
    return run.max(axis=1)


def longest_run(seq: BitSequence, M: int | None = None) -> TestResult:
    n = seq.n
    if n < 128:
        raise DomainError(f"longest-run test needs n >= 128, got {n}")
    cfg = longest_run_config(n) if M is None else LONGEST_RUN_CONFIGS.get(M)
    if cfg is None:
        raise DomainError(f"no class table for M={M}; choose from {sorted(LONGEST_RUN_CONFIGS)}")
    if M is not None:
        recommend(n >= cfg.min_n, f"longest run with M={M} wants n >= {cfg.min_n}")
    N = n // cfg.M
    if N < 1:
        raise DomainError(f"M={cfg.M} exceeds n={n}")
    blocks = seq.bits[: N * cfg.M].reshape(N, cfg.M)
    classes = cfg.classify(_longest_ones(blocks))
    nu = np.bincount(classes, minlength=cfg.K + 1)
    expected = N * np.asarray(cfg.pi)
    chi2 = float(np.sum((nu - expected) ** 2 / expected))
    p = igamc(cfg.K / 2.0, chi2 / 2.0)
    return TestResult(4, (p,), {"chi2": chi2, "N": N, "M": cfg.M, "K": cfg.K, "nu": tuple(int(v) for v in nu)})
