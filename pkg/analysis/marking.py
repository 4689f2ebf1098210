"""Per-performance and overall marking scores of judges."""

from __future__ import annotations

import logging
from collections import defaultdict
from typing import TYPE_CHECKING, NamedTuple

import numpy as np

from model import (
    JudgeEvaluation,
    MissingModelError,
    PerformanceScore,
    root_mean_square,
)

from .outlier import OutlierMode, outlier_threshold
from .variability import sigma_at

if TYPE_CHECKING:
    from collections.abc import Iterable, Mapping, Sequence

    from model import ControlScore, MarkRecord, SigmaModel

_logger = logging.getLogger(__name__)


class ScoringPolicy(NamedTuple):
    """Choices that shape a judge evaluation.

    Attributes:
        by_apparatus (bool): Evaluate per apparatus rather than per
            discipline. Defaults to True.
        include_aborted (bool | None): Count marks given to routines that
            were not completed; None leaves them out for trampoline only.
        outlier_mode (OutlierMode): Threshold mode of the outlier flags.
    """

    by_apparatus: bool = True
    include_aborted: bool | None = None
    outlier_mode: OutlierMode = OutlierMode.SCALED

    def includes(self, record: MarkRecord) -> bool:
        """Whether a mark enters the evaluation under this policy.

        Args:
            record (MarkRecord): The mark.

        Returns:
            bool: True if the mark counts.
        """
        if record.completed:
            return True
        if self.include_aborted is None:
            return not record.discipline.excludes_aborted()
        return self.include_aborted


class ScopeSummary(NamedTuple):
    """Distribution of overall marking scores within one group."""

    scope: str
    n_judges: int
    minimum: float
    q1: float
    median: float
    q3: float
    maximum: float
    mean: float


def performance_marking_score(
    mark: float, control: float, model: SigmaModel
) -> float:
    """A judge's discrepancy in units of the intrinsic variability.

    Args:
        mark (float): The judge's mark.
        control (float): The control score.
        model (SigmaModel): Variability model of the scope.

    Returns:
        float: (mark - control) / sigma(control).
    """
    return (mark - control) / sigma_at(model, control)


def overall_marking_score(marking_scores: Sequence[float]) -> float:
    """Root mean square of a judge's per-performance marking scores.

    Args:
        marking_scores (Sequence[float]): Nonempty marking scores.

    Raises:
        ValueError: If the judge has no evaluations.

    Returns:
        float: sqrt(mean(m**2)).
    """
    if len(marking_scores) == 0:
        raise ValueError("judge has no evaluations")
    return root_mean_square(marking_scores)


def evaluate_judges(
    records: Iterable[MarkRecord],
    control_scores: Mapping[str, ControlScore],
    models: Mapping[str, SigmaModel],
    policy: ScoringPolicy = ScoringPolicy(),
) -> list[JudgeEvaluation]:
    """Evaluate every judge on every scope it marked.

    A judge appearing on several scopes gets one evaluation per scope. Each
    evaluated mark is also tested against the judge's outlier threshold.

    Args:
        records (Iterable[MarkRecord]): The marks.
        control_scores (Mapping[str, ControlScore]): Control scores.
        models (Mapping[str, SigmaModel]): Variability model per scope.
        policy (ScoringPolicy, optional): Evaluation choices.

    Raises:
        MissingModelError: If a scope in the records has no model.

    Returns:
        list[JudgeEvaluation]: Evaluations sorted by judge, then scope.
    """
    grouped: dict[tuple[str, str], list[MarkRecord]] = defaultdict(list)
    for record in records:
        if policy.includes(record):
            grouped[(record.judge_id, record.scope(policy.by_apparatus))].append(
                record
            )

    evaluations = []
    for judge_id, scope in sorted(grouped):
        if (model := models.get(scope)) is None:
            raise MissingModelError(scope)
        marks = grouped[(judge_id, scope)]
        controls = [control_scores[record.performance_id].value for record in marks]
        e_hats = [record.mark - c for record, c in zip(marks, controls)]
        scores = [
            performance_marking_score(record.mark, c, model)
            for record, c in zip(marks, controls)
        ]
        overall = overall_marking_score(scores)
        per_performance = tuple(
            PerformanceScore(
                record.performance_id,
                e_hat,
                score,
                abs(e_hat)
                > outlier_threshold(model, c, overall, policy.outlier_mode),
            )
            for record, c, e_hat, score in zip(marks, controls, e_hats, scores)
        )
        evaluations.append(
            JudgeEvaluation(judge_id, scope, per_performance, overall)
        )
    _logger.info("evaluated %d judge/scope pairs", len(evaluations))
    return evaluations


def summarize_scopes(
    evaluations: Iterable[JudgeEvaluation],
) -> list[ScopeSummary]:
    """Box-plot statistics of overall marking scores per scope.

    Args:
        evaluations (Iterable[JudgeEvaluation]): Judge evaluations.

    Returns:
        list[ScopeSummary]: One summary per scope, sorted by scope.
    """
    scores: dict[str, list[float]] = defaultdict(list)
    for evaluation in evaluations:
        scores[evaluation.scope].append(evaluation.overall_marking_score)
    return [summarize_group(scope, scores[scope]) for scope in sorted(scores)]


def summarize_group(name: str, values: Sequence[float]) -> ScopeSummary:
    """Five-number summary and mean of a group of marking scores.

    Args:
        name (str): Group name.
        values (Sequence[float]): Nonempty marking scores.

    Returns:
        ScopeSummary: The summary.
    """
    array = np.asarray(values, dtype=float)
    q1, median, q3 = np.percentile(array, [25, 50, 75])
    return ScopeSummary(
        name,
        len(array),
        float(array.min()),
        float(q1),
        float(median),
        float(q3),
        float(array.max()),
        float(array.mean()),
    )


def label_for(
    marking_score: float, table: Sequence[tuple[float, str]]
) -> str:
    """Qualitative label of a marking score.

    Args:
        marking_score (float): Overall marking score.
        table (Sequence[tuple[float, str]]): (upper bound, label) pairs; a
            score takes the label of the smallest bound it does not exceed,
            and the label with the largest bound when it exceeds them all.

    Raises:
        ValueError: If the table is empty.

    Returns:
        str: The label.
    """
    if not table:
        raise ValueError("label table is empty")
    ordered = sorted(table)
    for bound, label in ordered:
        if marking_score <= bound:
            return label
    return ordered[-1][1]
