"""Tests 13-15: cumulative sums, random excursions and the excursion variant."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .bits import BitSequence, to_signed
from .result import TestResult, not_applicable, recommend
from .special import erfc, igamc, normal_cdf, probability

__all__ = [
    "EXCURSION_STATES",
    "VARIANT_STATES",
    "MIN_CYCLES",
    "excursion_pi",
    "WalkPath",
    "cusum_p_value",
    "cumulative_sums_test",
    "random_excursions_test",
    "random_excursions_variant_test",
]

EXCURSION_STATES = (-4, -3, -2, -1, 1, 2, 3, 4)
VARIANT_STATES = tuple(s for s in range(-9, 10) if s)
MIN_CYCLES = 500


def excursion_pi(s: int) -> tuple[float, ...]:
    """Probabilities of exactly 0..4 and of >= 5 visits to state s within one cycle."""
    a = abs(s)
    stay = 1.0 - 1.0 / (2 * a)
    pi = [stay]
    pi += [1.0 / (4 * a * a) * stay ** (k - 1) for k in range(1, 5)]
    pi.append(1.0 / (2 * a) * stay**4)
    return tuple(pi)


# Beyond this |argument| the Gaussian CDF is 0 or 1 to double precision.
_PHI_SATURATION = 40.0


def _cusum_from_max(z: int, n: int) -> float:
    rn = math.sqrt(n)
    # terms with every argument beyond +/-40 contribute exactly nothing
    reach = int((_PHI_SATURATION * rn / z + 3) / 4) + 1

    def k_range(lo, hi):
        return range(max(lo, -reach), min(hi, reach) + 1)

    first = math.fsum(
        normal_cdf((4 * k + 1) * z / rn) - normal_cdf((4 * k - 1) * z / rn)
        for k in k_range(math.floor((-n / z + 1) / 4), math.floor((n / z - 1) / 4))
    )
    second = math.fsum(
        normal_cdf((4 * k + 3) * z / rn) - normal_cdf((4 * k + 1) * z / rn)
        for k in k_range(math.floor((-n / z - 3) / 4), math.floor((n / z - 1) / 4))
    )
    return probability(1.0 - first + second)


def cusum_p_value(seq: BitSequence, mode: str = "forward") -> tuple[float, int]:
    """P-value and maximal excursion z for one direction of the walk."""
    if mode not in ("forward", "backward"):
        raise ValueError("mode must be 'forward' or 'backward'")
    steps = to_signed(seq)
    if mode == "backward":
        steps = steps[::-1]
    z = int(np.max(np.abs(np.cumsum(steps, dtype=np.int64))))
    return _cusum_from_max(z, seq.n), z


def cumulative_sums_test(seq: BitSequence) -> TestResult:
    recommend(seq.n >= 100, f"cumulative sums on n={seq.n}; at least 100 recommended")
    p_fwd, z_fwd = cusum_p_value(seq, "forward")
    p_bwd, z_bwd = cusum_p_value(seq, "backward")
    return TestResult(13, (p_fwd, p_bwd), {"z_forward": z_fwd, "z_backward": z_bwd}, labels=("forward", "backward"))


@dataclass(frozen=True)
class WalkPath:
    """Partial sums S_1..S_n of the +/-1 walk, cut into zero-to-zero cycles.

    A final S_{n+1} = 0 is implied, so the last cycle is always closed.
    """

    partial_sums: np.ndarray

    @classmethod
    def of(cls, seq: BitSequence) -> "WalkPath":
        return cls(np.cumsum(to_signed(seq), dtype=np.int64))

    @cached_property
    def J(self) -> int:
        s = self.partial_sums
        return int(np.count_nonzero(s == 0)) + int(s[-1] != 0)

    @cached_property
    def cycle_ids(self) -> np.ndarray:
        zero = (self.partial_sums == 0).astype(np.int64)
        ids = np.empty_like(zero)
        ids[0] = 0
        np.cumsum(zero[:-1], out=ids[1:])
        return ids

    def visits_per_cycle(self, state: int) -> np.ndarray:
        """Visits to ``state`` in each of the J cycles."""
        return np.bincount(self.cycle_ids[self.partial_sums == state], minlength=self.J)

    def visit_classes(self, state: int) -> np.ndarray:
        """nu_k(state), k = 0..5: cycles with exactly k visits (5 means >= 5)."""
        return np.bincount(np.minimum(self.visits_per_cycle(state), 5), minlength=6)

    def total_visits(self, state: int) -> int:
        return int(np.count_nonzero(self.partial_sums == state))


def random_excursions_test(seq: BitSequence, min_cycles: int = MIN_CYCLES) -> TestResult:
    recommend(seq.n >= 10**6, f"random excursions on n={seq.n}; 10^6 recommended")
    walk = WalkPath.of(seq)
    J = walk.J
    labels = tuple(f"s={s:+d}" for s in EXCURSION_STATES)
    if J < min_cycles:
        return _gated(14, J, min_cycles, labels)
    p_values = []
    stats = {"J": J}
    for s in EXCURSION_STATES:
        nu = walk.visit_classes(s)
        expected = J * np.asarray(excursion_pi(s))
        chi2 = float(np.sum((nu - expected) ** 2 / expected))
        stats[f"chi2[{s:+d}]"] = chi2
        p_values.append(igamc(2.5, chi2 / 2.0))
    return TestResult(14, tuple(p_values), stats, labels=labels)


def random_excursions_variant_test(seq: BitSequence, min_cycles: int = MIN_CYCLES) -> TestResult:
    recommend(seq.n >= 10**6, f"random excursions variant on n={seq.n}; 10^6 recommended")
    walk = WalkPath.of(seq)
    J = walk.J
    labels = tuple(f"s={s:+d}" for s in VARIANT_STATES)
    if J < min_cycles:
        return _gated(15, J, min_cycles, labels)
    p_values = []
    stats = {"J": J}
    for s in VARIANT_STATES:
        xi = walk.total_visits(s)
        x = abs(xi - J) / math.sqrt(2.0 * J * (4 * abs(s) - 2))
        stats[f"xi[{s:+d}]"] = xi
        p_values.append(erfc(x))
    return TestResult(15, tuple(p_values), stats, labels=labels)


def _gated(test_id: int, J: int, min_cycles: int, labels: tuple[str, ...]) -> TestResult:
    return not_applicable(test_id, f"too few cycles: J={J} < {min_cycles}", labels, J=J)
