"""One judge's mark for one performance."""

from __future__ import annotations

from decimal import Decimal, InvalidOperation
from typing import NamedTuple

from .discipline import Discipline
from .judge_role import Gender, JudgeRole

MIN_MARK = 0
MAX_MARK = 10
GRID_HUNDREDTHS = 5
GRID_TOLERANCE = Decimal("1e-9")


def mark_violation(mark: float | Decimal | str) -> tuple[str, str] | None:
    """Check a mark against the [0, 10] range and the 0.05 grid.

    The grid test runs on exact decimals scaled by 100 so that values such as
    8.35 are never rejected through binary rounding.

    Args:
        mark (float | Decimal | str): The mark to check.

    Returns:
        tuple[str, str] | None: An (error code, message) pair describing the
            violation, or None if the mark is valid.
    """
    try:
        value = mark if isinstance(mark, Decimal) else Decimal(str(mark))
    except InvalidOperation:
        return ("mark_nan", f"mark '{mark}' is not a number")
    if not value.is_finite():
        return ("mark_nan", f"mark '{mark}' is not a number")
    if value < MIN_MARK or value > MAX_MARK:
        return ("mark_range", f"mark out of range: {mark}")
    hundredths = value * 100
    remainder = hundredths % GRID_HUNDREDTHS
    if min(remainder, GRID_HUNDREDTHS - remainder) > GRID_TOLERANCE * 100:
        return ("mark_grid", f"mark off 0.05 grid: {mark}")
    return None


class MarkRecord(NamedTuple):
    """One judge's mark for one performance, with panel metadata.

    Attributes:
        competition_id (str): The competition the performance belongs to.
        discipline (Discipline): The gymnastics discipline.
        apparatus (str): The apparatus code, e.g. "FX_M" or "IND".
        phase (str): Qualification, final, and so on.
        performance_id (str): The performance being judged.
        gymnast_id (str): The gymnast performing.
        gymnast_country (str): ISO-3 code of the gymnast's federation.
        judge_id (str): The judge giving the mark.
        judge_country (str): ISO-3 code of the judge's federation.
        judge_role (JudgeRole): The judge's role on this panel.
        judge_gender (Gender): The judge's gender, possibly UNKNOWN.
        mark (float): The mark, in [0, 10] on a 0.05 grid.
        completed (bool): Whether the routine was completed.
    """

    competition_id: str
    discipline: Discipline
    apparatus: str
    phase: str
    performance_id: str
    gymnast_id: str
    gymnast_country: str
    judge_id: str
    judge_country: str
    judge_role: JudgeRole
    judge_gender: Gender
    mark: float
    completed: bool = True

    @property
    def key(self) -> tuple[str, str]:
        """The (performance_id, judge_id) pair, unique within a dataset."""
        return (self.performance_id, self.judge_id)

    @property
    def same_country(self) -> bool:
        """Whether the judge and the gymnast represent the same country."""
        return self.judge_country == self.gymnast_country

    def scope(self, by_apparatus: bool = True) -> str:
        """The variability scope this mark belongs to.

        Args:
            by_apparatus (bool, optional): Use the apparatus code rather than
                the discipline code. Defaults to True.

        Returns:
            str: The scope code.
        """
        return self.apparatus if by_apparatus else self.discipline.value

    def violations(self) -> list[str]:
        """List every model invariant this record breaks.

        Returns:
            list[str]: Violation messages, empty when the record is valid.
        """
        problems = []
        if (problem := mark_violation(self.mark)) is not None:
            problems.append(problem[1])
        for name in ("performance_id", "judge_id", "apparatus"):
            if not getattr(self, name):
                problems.append(f"{name} is empty")
        return problems
