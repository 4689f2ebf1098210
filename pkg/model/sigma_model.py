"""Fitted intrinsic judging error variability of one scope."""

from __future__ import annotations

from collections.abc import Mapping
from typing import Any, NamedTuple

import numpy as np
import numpy.typing as npt

DEFAULT_FLOOR = 0.05

_JSON_FIELDS = (
    "scope",
    "alpha",
    "beta",
    "gamma",
    "floor",
    "rmsd",
    "n_marks",
    "c_min",
    "c_max",
)


class SigmaModel(NamedTuple):
    """Parameters of sigma(c) = max(alpha + beta * exp(gamma * c), floor).

    Attributes:
        scope (str): Apparatus or discipline code the model was fitted for.
        alpha (float): Additive constant of the curve.
        beta (float): Scale of the exponential term.
        gamma (float): Rate of the exponential term.
        floor (float): Lower bound applied when the curve is evaluated.
        rmsd (float): Frequency-weighted RMSD of the fit.
        n_marks (int): Number of marks the fit was trained on.
        fitted_range (tuple[float, float]): Lowest and highest bin centre.
    """

    scope: str
    alpha: float
    beta: float
    gamma: float
    floor: float = DEFAULT_FLOOR
    rmsd: float = 0.0
    n_marks: int = 0
    fitted_range: tuple[float, float] = (0.0, 10.0)

    def curve(self, c: float | npt.ArrayLike) -> Any:
        """Evaluate the fitted curve without the floor.

        Args:
            c (float | ArrayLike): Control score(s).

        Returns:
            float | np.ndarray: alpha + beta * exp(gamma * c).
        """
        return self.alpha + self.beta * np.exp(self.gamma * np.asarray(c))

    def violations(self) -> list[str]:
        """List the invariants this model breaks.

        Returns:
            list[str]: Violation messages, empty when valid.
        """
        problems = []
        if not self.floor > 0:
            problems.append("floor must be positive")
        if self.rmsd < 0:
            problems.append("rmsd must be nonnegative")
        if not all(np.isfinite([self.alpha, self.beta, self.gamma])):
            problems.append("parameters must be finite")
        return problems

    def to_dict(self) -> dict[str, Any]:
        """The JSON document persisted for this model.

        Returns:
            dict[str, Any]: Flat mapping with c_min and c_max spelled out.
        """
        c_min, c_max = self.fitted_range
        return {
            "scope": self.scope,
            "alpha": self.alpha,
            "beta": self.beta,
            "gamma": self.gamma,
            "floor": self.floor,
            "rmsd": self.rmsd,
            "n_marks": self.n_marks,
            "c_min": c_min,
            "c_max": c_max,
        }

    @classmethod
    def from_dict(cls, document: Mapping[str, Any]) -> SigmaModel:
        """Rebuild a model from its JSON document.

        Args:
            document (Mapping[str, Any]): The persisted mapping.

        Raises:
            ValueError: If a field is missing or the model is invalid.

        Returns:
            SigmaModel: The model.
        """
        missing = [name for name in _JSON_FIELDS if name not in document]
        if missing:
            raise ValueError(f"model document lacks {', '.join(missing)}")
        model = cls(
            scope=str(document["scope"]),
            alpha=float(document["alpha"]),
            beta=float(document["beta"]),
            gamma=float(document["gamma"]),
            floor=float(document["floor"]),
            rmsd=float(document["rmsd"]),
            n_marks=int(document["n_marks"]),
            fitted_range=(float(document["c_min"]), float(document["c_max"])),
        )
        if problems := model.violations():
            raise ValueError(f"invalid model '{model.scope}': {problems[0]}")
        return model
