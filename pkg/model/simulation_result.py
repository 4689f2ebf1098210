"""Outcome of a synthetic-judge experiment."""

from __future__ import annotations

from collections.abc import Mapping
from typing import NamedTuple


class SyntheticJudge(NamedTuple):
    """Scores of one synthetic judge.

    Attributes:
        index (int): Judge index, from 0.
        marking_score (float): Overall marking score.
        k_set1 (float): Ranking score under parameter set 1.
        k_set2 (float): Ranking score under parameter set 2.
        k_set3 (float): Ranking score under parameter set 3.
    """

    index: int
    marking_score: float
    k_set1: float
    k_set2: float
    k_set3: float


class SimulationResult(NamedTuple):
    """Per-judge scores and their correlations.

    Attributes:
        seed (int): Seed the experiment ran with.
        per_judge (tuple[SyntheticJudge, ...]): One row per synthetic judge.
        correlations (Mapping[str, float]): Pearson correlation of marking
            score against each ranking score, keyed by parameter set name.
        rank_correlations (Mapping[str, float]): Spearman correlations,
            keyed the same way.
    """

    seed: int
    per_judge: tuple[SyntheticJudge, ...]
    correlations: Mapping[str, float]
    rank_correlations: Mapping[str, float]

    def violations(self, n_judges: int) -> list[str]:
        """List the invariants this result breaks.

        Args:
            n_judges (int): The configured judge count.

        Returns:
            list[str]: Violation messages, empty when valid.
        """
        if len(self.per_judge) != n_judges:
            return ["per_judge length differs from the judge count"]
        return []
