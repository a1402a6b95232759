"""Test registry: numbering 1..15, Table A lengths and tunable parameters."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from . import complexity, frequency, structure, templates, walks
from .bits import BitSequence
from .result import ARITY, TestResult


@dataclass(frozen=True)
class TestParams:
    """Per-test knobs; ``None`` means the size-dependent default."""

    __test__ = False

    blockfreq_M: int | None = None
    longest_run_M: int | None = None
    dft_log_base: str = "e"
    dft_variance_divisor: int = 2
    template: str = templates.DEFAULT_TEMPLATE
    template_blocks: int = 8
    t8_m: int = 9
    t8_M: int = 1032
    t8_table: str = "exact"
    universal_L: int | None = None
    lc_M: int = 500
    serial_m: int | None = None
    apen_m: int = 2
    min_cycles: int = walks.MIN_CYCLES


@dataclass(frozen=True)
class TestInfo:
    __test__ = False

    test_id: int
    name: str
    min_n: int
    used_n: int
    run: Callable[[BitSequence, TestParams], TestResult]

    @property
    def arity(self) -> int:
        return ARITY[self.test_id]


TESTS: dict[int, TestInfo] = {
    t.test_id: t
    for t in [
        TestInfo(1, "Frequency (Monobit) Test", 100, 100, lambda s, p: frequency.monobit(s)),
        TestInfo(2, "Frequency Test within a Block", 9000, 9000, lambda s, p: frequency.block_frequency(s, p.blockfreq_M)),
        TestInfo(3, "Runs Test", 100, 100, lambda s, p: frequency.runs(s)),
        TestInfo(
            4, "Test for the Longest Run of Ones in a Block", 128, 128, lambda s, p: frequency.longest_run(s, p.longest_run_M)
        ),
        TestInfo(5, "Binary Matrix Rank Test", 38912, 38912, lambda s, p: structure.matrix_rank_test(s)),
        TestInfo(
            6,
            "Discrete Fourier Transform (Spectral) Test",
            1000,
            1000,
            lambda s, p: structure.dft_test(s, p.dft_log_base, p.dft_variance_divisor),
        ),
        TestInfo(
            7,
            "Non-overlapping Template Matching Test",
            1048576,
            1048576,
            lambda s, p: templates.non_overlapping_template(s, p.template, p.template_blocks),
        ),
        TestInfo(
            8,
            "Overlapping Template Matching Test",
            1000000,
            1000000,
            lambda s, p: templates.overlapping_template(s, p.t8_m, p.t8_M, p.t8_table),
        ),
        TestInfo(
            9, "Maurer's \"Universal Statistical\" Test", 1342400, 1342400, lambda s, p: complexity.universal_test(s, p.universal_L)
        ),
        TestInfo(10, "Linear Complexity Test", 1000000, 1000000, lambda s, p: complexity.linear_complexity_test(s, p.lc_M)),
        TestInfo(11, "Serial Test", 1000000, 1000000, lambda s, p: complexity.serial_test(s, p.serial_m)),
        TestInfo(12, "Approximate Entropy Test", 100, 100, lambda s, p: complexity.approximate_entropy_test(s, p.apen_m)),
        TestInfo(13, "Cumulative Sums (Cusum) Test", 100, 100, lambda s, p: walks.cumulative_sums_test(s)),
        TestInfo(14, "Random Excursions Test", 1000000, 1000000, lambda s, p: walks.random_excursions_test(s, p.min_cycles)),
        TestInfo(
            15,
            "Random Excursions Variant Test",
            1000000,
            1000000,
            lambda s, p: walks.random_excursions_variant_test(s, p.min_cycles),
        ),
    ]
}

ALL_TESTS = tuple(TESTS)


def run_test(test_id: int, seq: BitSequence, params: TestParams | None = None) -> TestResult:
    return TESTS[test_id].run(seq, params or TestParams())


def parse_selection(text: str) -> tuple[int, ...]:
    """'all' or a comma list like '1,3,6' (ranges such as '7-11' allowed)."""
    text = text.strip().lower()
    if text == "all":
        return ALL_TESTS
    ids: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part:
            lo, hi = part.split("-", 1)
            ids.extend(range(int(lo), int(hi) + 1))
        else:
            ids.append(int(part))
    for i in ids:
        if i not in TESTS:
            raise ValueError(f"unknown test number {i}; tests are 1..15")
    return tuple(sorted(set(ids)))
