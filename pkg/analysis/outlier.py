"""Outlier marks, with thresholds scaled by each judge's own accuracy."""

from __future__ import annotations

import logging
from collections import defaultdict
from enum import Enum
from typing import TYPE_CHECKING, NamedTuple

from model import MissingModelError, root_mean_square

from .variability import sigma_at

if TYPE_CHECKING:
    from collections.abc import Iterable, Mapping, Sequence

    from model import ControlScore, JudgeEvaluation, MarkRecord, SigmaModel

_logger = logging.getLogger(__name__)

THRESHOLD_FLOOR = 0.1
SIGMA_MULTIPLIER = 2.0


class OutlierMode(Enum):
    """How outlier thresholds are set."""

    SCALED = "scaled"
    FIXED = "fixed"


class OutlierRow(NamedTuple):
    """Outcome of the outlier test for one mark; control is the control score."""

    performance_id: str
    judge_id: str
    judge_country: str
    gymnast_country: str
    e_hat: float
    threshold: float
    flagged: bool
    same_country: bool
    control: float


def outlier_threshold(
    model: SigmaModel,
    c: float,
    marking_score: float,
    mode: OutlierMode = OutlierMode.SCALED,
) -> float:
    """Largest discrepancy a judge can give before the mark is flagged.

    Args:
        model (SigmaModel): Variability model of the scope.
        c (float): Control score of the performance.
        marking_score (float): The judge's overall marking score M_j.
        mode (OutlierMode, optional): SCALED gives max(2 sigma M_j, 0.1);
            FIXED gives 2 sigma for every judge. Defaults to SCALED.

    Raises:
        ValueError: If the marking score is negative.

    Returns:
        float: The threshold.
    """
    if marking_score < 0:
        raise ValueError("marking score must be nonnegative")
    sigma = sigma_at(model, c)
    if mode is OutlierMode.FIXED:
        return SIGMA_MULTIPLIER * sigma
    return max(SIGMA_MULTIPLIER * sigma * marking_score, THRESHOLD_FLOOR)


def flag_outliers(
    evaluations: Iterable[JudgeEvaluation],
    records: Iterable[MarkRecord],
    control_scores: Mapping[str, ControlScore],
    models: Mapping[str, SigmaModel],
    mode: OutlierMode = OutlierMode.SCALED,
    leave_one_out: bool = False,
) -> list[OutlierRow]:
    """Test every evaluated mark against its judge's threshold.

    Args:
        evaluations (Iterable[JudgeEvaluation]): Judge evaluations whose
            overall scores were computed over the scope being examined.
        records (Iterable[MarkRecord]): The marks, for country and
            competition metadata.
        control_scores (Mapping[str, ControlScore]): Control scores.
        models (Mapping[str, SigmaModel]): Variability model per scope.
        mode (OutlierMode, optional): Threshold mode. Defaults to SCALED.
        leave_one_out (bool, optional): Score each mark against M_j computed
            without the competition it belongs to. Defaults to False.

    Raises:
        MissingModelError: If an evaluation's scope has no model.

    Returns:
        list[OutlierRow]: One row per evaluated mark, in evaluation order.
    """
    by_key = {record.key: record for record in records}
    rows = []
    for evaluation in evaluations:
        if (model := models.get(evaluation.scope)) is None:
            raise MissingModelError(evaluation.scope)
        marking_scores = (
            _leave_one_out_scores(evaluation, by_key)
            if leave_one_out
            else {}
        )
        for entry in evaluation.per_performance:
            record = by_key[(entry.performance_id, evaluation.judge_id)]
            c = control_scores[entry.performance_id].value
            marking_score = marking_scores.get(
                record.competition_id, evaluation.overall_marking_score
            )
            threshold = outlier_threshold(model, c, marking_score, mode)
            rows.append(
                OutlierRow(
                    performance_id=entry.performance_id,
                    judge_id=evaluation.judge_id,
                    judge_country=record.judge_country,
                    gymnast_country=record.gymnast_country,
                    e_hat=entry.e_hat,
                    threshold=threshold,
                    flagged=abs(entry.e_hat) > threshold,
                    same_country=record.same_country,
                    control=c,
                )
            )
    return rows


def flagged_fraction(rows: Sequence[OutlierRow]) -> float:
    """Share of the tested marks that were flagged.

    Args:
        rows (Sequence[OutlierRow]): Outlier test rows.

    Returns:
        float: Flagged rows over all rows; 0 when there are none.
    """
    if not rows:
        return 0.0
    return sum(row.flagged for row in rows) / len(rows)


def _leave_one_out_scores(
    evaluation: JudgeEvaluation,
    by_key: Mapping[tuple[str, str], MarkRecord],
) -> dict[str, float]:
    """A judge's overall marking score without each of its competitions.

    A competition that is the judge's only one keeps the in-sample score.

    Args:
        evaluation (JudgeEvaluation): The judge's evaluation.
        by_key (Mapping): Records by (performance_id, judge_id).

    Returns:
        dict[str, float]: M_j excluding each competition, by competition id.
    """
    per_competition: dict[str, list[float]] = defaultdict(list)
    for entry in evaluation.per_performance:
        record = by_key[(entry.performance_id, evaluation.judge_id)]
        per_competition[record.competition_id].append(entry.marking_score)

    scores = {}
    for competition in per_competition:
        others = [
            score
            for other, values in per_competition.items()
            if other != competition
            for score in values
        ]
        if others:
            scores[competition] = root_mean_square(others)
        else:
            _logger.info(
                "judge %s only judged %s; using the in-sample marking score",
                evaluation.judge_id,
                competition,
            )
    return scores
