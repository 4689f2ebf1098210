"""Control scores and the official execution-score aggregation."""

from __future__ import annotations

import logging
from collections import defaultdict
from typing import TYPE_CHECKING, NamedTuple

import numpy as np

from model import ControlScore, JudgeRole

if TYPE_CHECKING:
    from collections.abc import Iterable, Mapping, Sequence

    from model import MarkRecord

_logger = logging.getLogger(__name__)

EXECUTION_PANEL_SIZE = 5
REFERENCE_PANEL_SIZE = 2

# The two tolerances of the merge rule are not public; these are placeholders.
DEFAULT_GAP_TOL = 0.3
DEFAULT_REF_AGREEMENT_TOL = 0.2


class PanelTolerances(NamedTuple):
    """Thresholds of the reference-score merge rule.

    Attributes:
        gap_tol (float): Panel/reference gap above which the rule may fire.
        ref_agreement_tol (float): Reference judges must differ by less than
            this for the rule to fire.
    """

    gap_tol: float = DEFAULT_GAP_TOL
    ref_agreement_tol: float = DEFAULT_REF_AGREEMENT_TOL


class OfficialScore(NamedTuple):
    """The execution score a performance receives under the official rules."""

    performance_id: str
    panel: float
    reference: float
    final: float

    @property
    def merged(self) -> bool:
        """Whether the reference score was merged into the final score."""
        return self.final != self.panel


def control_score(marks: Sequence[float]) -> float:
    """The median of a performance's marks.

    Args:
        marks (Sequence[float]): Every mark of the enlarged panel.

    Raises:
        ValueError: If there are no marks.

    Returns:
        float: The median; the mean of the middle two for even counts.
    """
    if len(marks) == 0:
        raise ValueError("no marks")
    return float(np.median(np.asarray(marks, dtype=float)))


def control_scores(records: Iterable[MarkRecord]) -> dict[str, ControlScore]:
    """Control scores of every performance in a dataset.

    Marks from every role present in the data enter the median: reference
    judges, superior juries and video reviews all enlarge the panel.

    Args:
        records (Iterable[MarkRecord]): The marks.

    Returns:
        dict[str, ControlScore]: Control score per performance id, in order
            of first appearance.
    """
    marks: dict[str, list[float]] = defaultdict(list)
    for record in records:
        marks[record.performance_id].append(record.mark)
    return {
        performance_id: ControlScore(
            performance_id, control_score(values), len(values)
        )
        for performance_id, values in marks.items()
    }


def execution_panel_score(marks: Sequence[float]) -> float:
    """Trimmed mean of the middle three of five execution marks.

    Args:
        marks (Sequence[float]): Exactly five execution marks.

    Raises:
        ValueError: If there are not exactly five marks.

    Returns:
        float: The mean of the three middle order statistics.
    """
    if len(marks) != EXECUTION_PANEL_SIZE:
        raise ValueError(
            f"expected {EXECUTION_PANEL_SIZE} execution marks,"
            f" got {len(marks)}"
        )
    return float(np.mean(np.sort(np.asarray(marks, dtype=float))[1:-1]))


def reference_score(marks: Sequence[float]) -> float:
    """Arithmetic mean of the two reference judges' marks.

    Args:
        marks (Sequence[float]): Exactly two reference marks.

    Raises:
        ValueError: If there are not exactly two marks.

    Returns:
        float: The mean.
    """
    if len(marks) != REFERENCE_PANEL_SIZE:
        raise ValueError(
            f"expected {REFERENCE_PANEL_SIZE} reference marks,"
            f" got {len(marks)}"
        )
    return (marks[0] + marks[1]) / 2


def final_execution_score(
    panel: float,
    reference: float,
    ref_marks: Sequence[float],
    gap_tol: float = DEFAULT_GAP_TOL,
    ref_agreement_tol: float = DEFAULT_REF_AGREEMENT_TOL,
) -> float:
    """Apply the reference-judge merge rule.

    The final score is the mean of the panel and reference scores when the
    two are further apart than gap_tol while the reference judges agree to
    within ref_agreement_tol; otherwise it is the panel score.

    Args:
        panel (float): Execution panel score.
        reference (float): Reference score.
        ref_marks (Sequence[float]): The two reference marks.
        gap_tol (float, optional): Gap tolerance. Defaults to 0.3.
        ref_agreement_tol (float, optional): Reference agreement tolerance.
            Defaults to 0.2.

    Raises:
        ValueError: If a tolerance is not positive or there are not two
            reference marks.

    Returns:
        float: The final execution score.
    """
    if gap_tol <= 0 or ref_agreement_tol <= 0:
        raise ValueError("tolerances must be positive")
    if len(ref_marks) != REFERENCE_PANEL_SIZE:
        raise ValueError("expected 2 reference marks")
    gap = abs(panel - reference)
    agreement = abs(ref_marks[0] - ref_marks[1])
    if gap > gap_tol and agreement < ref_agreement_tol:
        return (panel + reference) / 2
    return panel


def official_execution_scores(
    records: Iterable[MarkRecord],
    tolerances: PanelTolerances = PanelTolerances(),
) -> list[OfficialScore]:
    """Official execution scores of the performances with a full panel.

    Only performances with exactly five execution and two reference marks
    follow the official process; others are skipped.

    Args:
        records (Iterable[MarkRecord]): The marks.
        tolerances (PanelTolerances, optional): Merge rule thresholds.

    Returns:
        list[OfficialScore]: One entry per eligible performance.
    """
    by_role: Mapping[str, dict[JudgeRole, list[float]]] = defaultdict(
        lambda: defaultdict(list)
    )
    for record in records:
        by_role[record.performance_id][record.judge_role].append(record.mark)

    scores = []
    skipped = 0
    for performance_id, marks in by_role.items():
        execution = marks.get(JudgeRole.EXECUTION, [])
        references = marks.get(JudgeRole.REFERENCE, [])
        if (
            len(execution) != EXECUTION_PANEL_SIZE
            or len(references) != REFERENCE_PANEL_SIZE
        ):
            skipped += 1
            continue
        panel = execution_panel_score(execution)
        reference = reference_score(references)
        final = final_execution_score(
            panel, reference, references, *tolerances
        )
        scores.append(OfficialScore(performance_id, panel, reference, final))
    if skipped:
        _logger.info(
            "%d performance(s) lack a 5+2 panel; no official score", skipped
        )
    return scores
