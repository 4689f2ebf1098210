"""Parameters of the generalized Kendall tau distance."""

from __future__ import annotations

from enum import Enum
from typing import NamedTuple

import numpy as np
import numpy.typing as npt


class ParameterSet(Enum):
    """Named parameter sets of the ranking score."""

    SET1 = "SET1"
    SET2 = "SET2"
    SET3 = "SET3"
    CUSTOM = "CUSTOM"


class RankingParams(NamedTuple):
    """Element weights, position swap costs and element swap costs.

    Attributes:
        set_id (ParameterSet): Which parameter set these are.
        w (np.ndarray): Element weights, one per position.
        delta (np.ndarray): Position swap costs; delta[0] is always 1.
        D (np.ndarray): Symmetric nonnegative swap cost matrix, zero diagonal.
    """

    set_id: ParameterSet
    w: npt.NDArray[np.float64]
    delta: npt.NDArray[np.float64]
    D: npt.NDArray[np.float64]

    @property
    def n(self) -> int:
        """Number of positions the parameters are dimensioned for."""
        return len(self.w)

    def violations(self) -> list[str]:
        """List the invariants these parameters break.

        Returns:
            list[str]: Violation messages, empty when valid.
        """
        problems = []
        n = self.n
        if self.delta.shape != (n,) or self.D.shape != (n, n):
            return ["w, delta and D dimensions disagree"]
        if n and self.delta[0] != 1:
            problems.append("delta[1] must be 1")
        if np.any(self.delta <= 0):
            problems.append("position swap costs must be positive")
        if not np.allclose(self.D, self.D.T, rtol=0.0, atol=1e-12):
            problems.append("D must be symmetric")
        if np.any(np.diag(self.D) != 0):
            problems.append("D must have a zero diagonal")
        if np.any(self.D < 0):
            problems.append("D must be nonnegative")
        return problems
