"""Read, validate and write mark datasets in CSV form."""

from __future__ import annotations

import csv
import io
import logging
import re
from collections import Counter
from pathlib import Path
from typing import IO, TYPE_CHECKING, NamedTuple

import pandas as pd

from model import (
    DatasetError,
    Discipline,
    Gender,
    JudgeRole,
    MarkRecord,
    PerformanceKey,
    mark_violation,
)

if TYPE_CHECKING:
    from collections.abc import Iterable, Mapping, MutableSequence, Sequence
    from os import PathLike

_logger = logging.getLogger(__name__)

COLUMNS = (
    "competition_id",
    "discipline",
    "apparatus",
    "phase",
    "performance_id",
    "gymnast_id",
    "gymnast_country",
    "judge_id",
    "judge_country",
    "judge_role",
    "judge_gender",
    "mark",
    "completed",
)

MIN_PANEL_SIZE = 3
HEADER_LINE = 1

_BOOLEANS = {"true": True, "false": False}
_PARSER_LINE = re.compile(r"line (\d+)")


class ReportEntry(NamedTuple):
    """One finding of a validation pass.

    Attributes:
        line (int): File line the finding refers to; the header is line 1.
        code (str): Machine-readable finding code.
        message (str): Human-readable description.
    """

    line: int
    code: str
    message: str

    def __str__(self) -> str:
        return f"line {self.line}: [{self.code}] {self.message}"


class ValidationReport(NamedTuple):
    """Outcome of validating a dataset.

    A dataset is accepted if and only if it has no errors.
    """

    n_records: int
    errors: tuple[ReportEntry, ...] = ()
    warnings: tuple[ReportEntry, ...] = ()

    @property
    def accepted(self) -> bool:
        """Whether the dataset passed validation."""
        return not self.errors


def parse_marks_csv(
    source: str | PathLike[str] | IO[bytes] | IO[str],
) -> list[MarkRecord]:
    """Parse a mark dataset, failing on the first invalid dataset.

    Columns are matched by header name, so their order does not matter.
    Every row is checked before failing, so the raised report lists all the
    problems in the file, each with its line number.

    Args:
        source (str | PathLike | IO): Path or UTF-8 stream of the CSV file.

    Raises:
        DatasetError: If any row or cross-record check fails.

    Returns:
        list[MarkRecord]: The records, in file order.
    """
    records, report = read_dataset(source)
    if not report.accepted:
        raise DatasetError(report)
    return records


def read_dataset(
    source: str | PathLike[str] | IO[bytes] | IO[str],
) -> tuple[list[MarkRecord], ValidationReport]:
    """Parse a mark dataset and validate it without raising.

    Findings cite the physical file line where the record starts, also
    when a quoted field spans several lines.

    Args:
        source (str | PathLike | IO): Path or UTF-8 stream of the CSV file.

    Raises:
        OSError: If the file cannot be read.

    Returns:
        tuple[list[MarkRecord], ValidationReport]: The rows that could be
            parsed, and the report over the whole file.
    """
    errors: MutableSequence[ReportEntry] = []
    try:
        text = _read_text(source)
    except UnicodeDecodeError as exc:
        line = exc.object[: exc.start].count(b"\n") + 1
        report = ValidationReport(
            0,
            (
                ReportEntry(
                    line,
                    "encoding",
                    f"not valid UTF-8: byte 0x{exc.object[exc.start]:02x}",
                ),
            ),
        )
        return [], report
    try:
        frame = pd.read_csv(
            io.StringIO(text),
            dtype=str,
            keep_default_na=False,
            na_filter=False,
            skip_blank_lines=False,
        )
    except pd.errors.EmptyDataError:
        report = ValidationReport(
            0, (ReportEntry(HEADER_LINE, "empty", "file is empty"),)
        )
        return [], report
    except pd.errors.ParserError as exc:
        match = _PARSER_LINE.search(str(exc))
        line = int(match.group(1)) if match else HEADER_LINE
        report = ValidationReport(
            0, (ReportEntry(line, "malformed_row", f"malformed CSV: {exc}"),)
        )
        return [], report

    if sorted(frame.columns) != sorted(COLUMNS):
        missing = sorted(set(COLUMNS) - set(frame.columns))
        extra = sorted(set(frame.columns) - set(COLUMNS))
        message = f"header mismatch; missing {missing}, unexpected {extra}"
        report = ValidationReport(
            0, (ReportEntry(HEADER_LINE, "header", message),)
        )
        return [], report

    starts = _record_lines(text)
    records: list[MarkRecord] = []
    lines: list[int] = []
    for index, row in enumerate(frame.to_dict(orient="records")):
        line = starts[index] if index < len(starts) else index + HEADER_LINE + 1
        record = _parse_row(row, line, errors)
        if record is not None:
            records.append(record)
            lines.append(line)

    report = validate_dataset(records, lines)
    report = report._replace(
        n_records=len(frame),
        errors=tuple(sorted([*errors, *report.errors])),
    )
    for warning in report.warnings:
        _logger.warning("%s", warning)
    return records, report


def validate_dataset(
    records: Sequence[MarkRecord], lines: Sequence[int] | None = None
) -> ValidationReport:
    """Check records against every model invariant and each other.

    Args:
        records (Sequence[MarkRecord]): The parsed records.
        lines (Sequence[int] | None, optional): File line of each record.
            Defaults to file order after a single header line.

    Returns:
        ValidationReport: Errors for invariant violations, duplicate
            (performance, judge) pairs and conflicting performance metadata;
            warnings for panels too small to give a reliable control score.
    """
    if lines is None:
        lines = [index + HEADER_LINE + 1 for index in range(len(records))]
    errors: list[ReportEntry] = []
    warnings: list[ReportEntry] = []
    seen: set[tuple[str, str]] = set()
    performances: dict[str, tuple[PerformanceKey, int]] = {}
    panel_sizes: Counter[str] = Counter()

    for record, line in zip(records, lines):
        for problem in record.violations():
            errors.append(ReportEntry(line, "invariant", problem))
        if record.key in seen:
            errors.append(
                ReportEntry(
                    line,
                    "duplicate",
                    f"duplicate mark for performance {record.performance_id}"
                    f" by judge {record.judge_id}",
                )
            )
            continue
        seen.add(record.key)
        panel_sizes[record.performance_id] += 1

        key = PerformanceKey.of(record)
        first = performances.setdefault(record.performance_id, (key, line))
        if first[0] != key:
            errors.append(
                ReportEntry(
                    line,
                    "conflict",
                    f"performance {record.performance_id} conflicts with"
                    f" line {first[1]}: {_describe_conflict(first[0], key)}",
                )
            )

    for performance_id, (_, line) in performances.items():
        if (size := panel_sizes[performance_id]) < MIN_PANEL_SIZE:
            warnings.append(
                ReportEntry(
                    line,
                    "small_panel",
                    f"panel too small for performance {performance_id}:"
                    f" {size} mark(s)",
                )
            )
    return ValidationReport(len(records), tuple(errors), tuple(warnings))


def write_marks_csv(
    records: Iterable[MarkRecord],
    target: str | PathLike[str] | IO[str],
) -> None:
    """Write records in the ingestion format.

    Args:
        records (Iterable[MarkRecord]): The records to write.
        target (str | PathLike | IO[str]): Destination path or text stream.
    """
    rows = [
        {
            **record._asdict(),
            "discipline": record.discipline.value,
            "judge_role": record.judge_role.value,
            "judge_gender": record.judge_gender.value,
            "mark": f"{record.mark:.2f}",
            "completed": "true" if record.completed else "false",
        }
        for record in records
    ]
    frame = pd.DataFrame(rows, columns=list(COLUMNS))
    frame.to_csv(target, index=False, lineterminator="\n")


def _read_text(source: str | PathLike[str] | IO[bytes] | IO[str]) -> str:
    """Whole file as text; raises UnicodeDecodeError on invalid UTF-8."""
    data = source.read() if hasattr(source, "read") else Path(source).read_bytes()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return data.removeprefix("\ufeff")


def _record_lines(text: str) -> list[int]:
    """Physical start line of every data record."""
    reader = csv.reader(io.StringIO(text))
    starts: list[int] = []
    end = 0
    try:
        for _ in reader:
            starts.append(end + 1)
            end = reader.line_num
    except csv.Error:
        pass
    return starts[1:]


def _parse_row(
    row: Mapping[str, object], line: int, errors: MutableSequence[ReportEntry]
) -> MarkRecord | None:
    """Turn one CSV row into a record, collecting every problem found.

    Args:
        row (Mapping[str, object]): Column name to raw cell.
        line (int): The row's file line.
        errors (MutableSequence[ReportEntry]): Where problems are appended.

    Returns:
        MarkRecord | None: The record, or None if the row is invalid.
    """
    if any(not isinstance(value, str) for value in row.values()):
        errors.append(
            ReportEntry(line, "malformed_row", "row has missing fields")
        )
        return None
    cells = {name: str(value).strip() for name, value in row.items()}
    before = len(errors)

    parsed: dict[str, object] = {}
    for name, parser in (
        ("discipline", Discipline.parse),
        ("judge_role", JudgeRole.parse),
        ("judge_gender", Gender.parse),
    ):
        try:
            parsed[name] = parser(cells[name])
        except ValueError as exc:
            errors.append(ReportEntry(line, "unknown_enum", str(exc)))

    if (problem := mark_violation(cells["mark"])) is not None:
        errors.append(ReportEntry(line, *problem))
    if cells["completed"] not in _BOOLEANS:
        errors.append(
            ReportEntry(
                line,
                "bad_boolean",
                f"completed must be true or false, got '{cells['completed']}'",
            )
        )
    for name in ("performance_id", "judge_id", "apparatus"):
        if not cells[name]:
            errors.append(ReportEntry(line, "empty_field", f"{name} is empty"))

    if len(errors) > before:
        return None
    return MarkRecord(
        competition_id=cells["competition_id"],
        discipline=parsed["discipline"],  # type: ignore[arg-type]
        apparatus=cells["apparatus"],
        phase=cells["phase"],
        performance_id=cells["performance_id"],
        gymnast_id=cells["gymnast_id"],
        gymnast_country=cells["gymnast_country"],
        judge_id=cells["judge_id"],
        judge_country=cells["judge_country"],
        judge_role=parsed["judge_role"],  # type: ignore[arg-type]
        judge_gender=parsed["judge_gender"],  # type: ignore[arg-type]
        mark=float(cells["mark"]),
        completed=_BOOLEANS[cells["completed"]],
    )


def _describe_conflict(first: PerformanceKey, other: PerformanceKey) -> str:
    """Name the fields on which two keys of one performance disagree.

    Args:
        first (PerformanceKey): The key seen first.
        other (PerformanceKey): The conflicting key.

    Returns:
        str: e.g. "apparatus FX_M vs PH".
    """
    return ", ".join(
        f"{name} {getattr(first, name)} vs {getattr(other, name)}"
        for name in PerformanceKey._fields
        if getattr(first, name) != getattr(other, name)
    )
