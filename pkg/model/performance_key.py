"""Identity and context of a single performance."""

from __future__ import annotations

from typing import TYPE_CHECKING, NamedTuple

from .discipline import Discipline

if TYPE_CHECKING:
    from .mark_record import MarkRecord


class PerformanceKey(NamedTuple):
    """Identity and context of a single performance.

    The true quality of a performance is never observed; its control score
    stands in for it everywhere in the engine.
    """

    performance_id: str
    discipline: Discipline
    apparatus: str
    phase: str
    completed: bool

    @classmethod
    def of(cls, record: MarkRecord) -> PerformanceKey:
        """Build the key of the performance a mark belongs to.

        Args:
            record (MarkRecord): Any mark given to the performance.

        Returns:
            PerformanceKey: The performance key.
        """
        return cls(
            record.performance_id,
            record.discipline,
            record.apparatus,
            record.phase,
            record.completed,
        )
