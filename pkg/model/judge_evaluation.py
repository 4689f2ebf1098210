"""Per-judge marking evaluation over one scope."""

from __future__ import annotations

import math
from collections.abc import Iterable
from typing import NamedTuple


def root_mean_square(values: Iterable[float]) -> float:
    """Square root of the mean of the squared values.

    Args:
        values (Iterable[float]): Nonempty values.

    Raises:
        ValueError: If there are no values.

    Returns:
        float: sqrt(mean(v**2)).
    """
    squares = [value * value for value in values]
    if not squares:
        raise ValueError("no values")
    return math.sqrt(math.fsum(squares) / len(squares))


class PerformanceScore(NamedTuple):
    """A judge's result on one performance.

    Attributes:
        performance_id (str): The performance.
        e_hat (float): Judging discrepancy, mark minus control score.
        marking_score (float): Discrepancy over the intrinsic variability.
        outlier (bool): Whether the mark was flagged as an outlier.
    """

    performance_id: str
    e_hat: float
    marking_score: float
    outlier: bool = False


class JudgeEvaluation(NamedTuple):
    """A judge's marking evaluation over one scope.

    Attributes:
        judge_id (str): The judge.
        scope (str): Apparatus or discipline code.
        per_performance (tuple[PerformanceScore, ...]): One entry per mark.
        overall_marking_score (float): Root mean square of the marking scores.
    """

    judge_id: str
    scope: str
    per_performance: tuple[PerformanceScore, ...]
    overall_marking_score: float

    @property
    def n(self) -> int:
        """Number of performances evaluated."""
        return len(self.per_performance)

    def violations(self, tolerance: float = 1e-12) -> list[str]:
        """List the invariants this evaluation breaks.

        Args:
            tolerance (float, optional): Slack on the recomputed overall
                score. Defaults to 1e-12.

        Returns:
            list[str]: Violation messages, empty when valid.
        """
        problems = []
        if not self.per_performance:
            return ["judge has no evaluations"]
        rms = root_mean_square(
            entry.marking_score for entry in self.per_performance
        )
        if abs(rms - self.overall_marking_score) > tolerance:
            problems.append("overall score is not the RMS of per-performance")
        if self.overall_marking_score < 0:
            problems.append("overall score must be nonnegative")
        return problems
