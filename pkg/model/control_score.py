"""The control score of a performance."""

from __future__ import annotations

from collections.abc import Sequence
from typing import NamedTuple

import numpy as np

# medians of an even panel land halfway between two 0.05 steps
CONTROL_GRID = 0.025
GRID_TOLERANCE = 1e-9


class ControlScore(NamedTuple):
    """The median mark of a performance's enlarged panel.

    Attributes:
        performance_id (str): The performance.
        value (float): The median mark.
        panel_size (int): How many marks the median was taken over.
    """

    performance_id: str
    value: float
    panel_size: int

    def violations(self, marks: Sequence[float] | None = None) -> list[str]:
        """List the invariants this control score breaks.

        Args:
            marks (Sequence[float] | None, optional): The marks it was
                computed from; when given, the median is re-checked.
                Defaults to None.

        Returns:
            list[str]: Violation messages, empty when valid.
        """
        problems = []
        if self.panel_size < 1:
            problems.append("panel_size must be positive")
        if not 0 <= self.value <= 10:
            problems.append(f"control score out of range: {self.value}")
        steps = self.value / CONTROL_GRID
        if abs(steps - round(steps)) > GRID_TOLERANCE / CONTROL_GRID:
            problems.append(f"control score off grid: {self.value}")
        if marks is not None:
            if len(marks) != self.panel_size:
                problems.append("panel_size differs from the mark count")
            elif abs(float(np.median(marks)) - self.value) > GRID_TOLERANCE:
                problems.append("value is not the median of its marks")
        return problems
