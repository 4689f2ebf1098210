"""Exceptions raised by the judging engine."""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from analysis.ingest import ValidationReport


class JudgingError(ValueError):
    """Root of every error the engine raises on bad input."""


class DatasetError(JudgingError):
    """A mark dataset failed validation."""

    def __init__(self, report: ValidationReport) -> None:
        """Create the error from a failed validation report.

        Args:
            report (ValidationReport): The report listing every error.
        """
        self.report = report
        first = report.errors[0] if report.errors else None
        summary = f"{len(report.errors)} validation error(s)"
        if first is not None:
            summary += f"; first at line {first.line}: {first.message}"
        super().__init__(summary)


class FitError(JudgingError):
    """The variability curve could not be fitted."""


class MissingModelError(JudgingError):
    """No fitted variability model covers a scope."""

    def __init__(self, scope: str) -> None:
        self.scope = scope
        super().__init__(f"no variability model for scope '{scope}'")


class RankingError(JudgingError):
    """Rankings or ranking parameters are inconsistent."""


class StatisticsError(JudgingError):
    """A statistic is undefined for the given samples."""


class SynthSpecError(JudgingError):
    """A synthetic competition spec is invalid."""
