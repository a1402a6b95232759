from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Mapping

from .errors import RecommendationWarning

# P-values emitted per test, keyed by test number.
ARITY = {1: 1, 2: 1, 3: 1, 4: 1, 5: 1, 6: 1, 7: 1, 8: 1, 9: 1, 10: 1, 11: 2, 12: 1, 13: 2, 14: 8, 15: 18}


@dataclass(frozen=True)
class TestResult:
    """Outcome of one test on one sequence.

    ``labels`` names each P-value for multi-valued tests (cusum mode,
    excursion state); it is empty for single-valued tests.
    """

    __test__ = False  # keep pytest from collecting this class

    test_id: int
    p_values: tuple[float, ...]
    statistics: Mapping[str, object] = field(default_factory=dict)
    applicable: bool = True
    fail_reason: str | None = None
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        if len(self.p_values) != ARITY[self.test_id]:
            raise ValueError(
                f"test {self.test_id} yields {ARITY[self.test_id]} P-values, got {len(self.p_values)}"
            )
        if not self.applicable and (self.fail_reason is None or any(self.p_values)):
            raise ValueError("inapplicable result needs a reason and all-zero P-values")

    @property
    def p_value(self) -> float:
        return self.p_values[0]

    def passed(self, alpha: float = 0.01) -> bool:
        return self.applicable and all(p >= alpha for p in self.p_values)


def not_applicable(test_id: int, reason: str, labels: tuple[str, ...] = (), **statistics: float) -> TestResult:
    return TestResult(
        test_id,
        (0.0,) * ARITY[test_id],
        statistics,
        applicable=False,
        fail_reason=reason,
        labels=labels,
    )


def recommend(ok: bool, message: str) -> None:
    if not ok:
        warnings.warn(message, RecommendationWarning, stacklevel=3)
