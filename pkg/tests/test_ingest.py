import io
import logging

import pytest

from analysis.ingest import (
    COLUMNS,
    parse_marks_csv,
    read_dataset,
    validate_dataset,
    write_marks_csv,
)
from model import DatasetError, Discipline, Gender, JudgeRole, MarkRecord


def panel_rows(make_row, performance_id="P1", marks=("9.0", "9.1", "9.2", "9.3", "9.4")):
    return [
        make_row(performance_id, f"J{index}", mark)
        for index, mark in enumerate(marks, start=1)
    ]


def test_parse_valid_row(csv_text, make_row):
    records = parse_marks_csv(io.StringIO(csv_text(make_row(mark="8.5"))))
    assert records == [
        MarkRecord(
            competition_id="C1",
            discipline=Discipline.ART,
            apparatus="FX_M",
            phase="QF",
            performance_id="P1",
            gymnast_id="G-P1",
            gymnast_country="USA",
            judge_id="J1",
            judge_country="FRA",
            judge_role=JudgeRole.EXECUTION,
            judge_gender=Gender.F,
            mark=8.5,
            completed=True,
        )
    ]


def test_columns_are_matched_by_name(csv_text):
    header = ",".join(reversed(COLUMNS))
    values = "C1,ART,FX_M,QF,P1,G1,USA,J1,FRA,EXECUTION,M,9.05,false".split(",")
    text = csv_text(",".join(reversed(values)), header=header)
    (record,) = parse_marks_csv(io.StringIO(text))
    assert record.mark == 9.05
    assert record.judge_gender is Gender.M
    assert record.completed is False


@pytest.mark.parametrize(
    ("mark", "code", "message"),
    [
        ("10.01", "mark_range", "mark out of range"),
        ("8.333", "mark_grid", "mark off 0.05 grid"),
        ("high", "mark_nan", "not a number"),
    ],
)
def test_bad_marks_are_rejected_with_line_numbers(csv_text, make_row, mark, code, message):
    text = csv_text(make_row("P1", "J1"), make_row("P1", "J2", mark))
    with pytest.raises(DatasetError) as info:
        parse_marks_csv(io.StringIO(text))
    (entry,) = info.value.report.errors
    assert entry.line == 3
    assert entry.code == code
    assert message in entry.message
    assert "line 3" in str(info.value)


def test_unknown_enum_and_boolean(csv_text, make_row):
    text = csv_text(
        make_row(role="COACH"),
        make_row("P1", "J2", completed="yes"),
        make_row("P1", "J3", discipline="GYM"),
    )
    _, report = read_dataset(io.StringIO(text))
    assert [(entry.line, entry.code) for entry in report.errors] == [
        (2, "unknown_enum"),
        (3, "bad_boolean"),
        (4, "unknown_enum"),
    ]
    assert not report.accepted


def test_every_problem_is_reported(csv_text, make_row):
    text = csv_text(make_row(mark="11"), make_row("P1", "J2", "8.333"))
    _, report = read_dataset(io.StringIO(text))
    assert [entry.line for entry in report.errors] == [2, 3]
    assert report.n_records == 2


def test_duplicate_marks(csv_text, make_row):
    text = csv_text(make_row("P1", "J1", "9.0"), make_row("P1", "J1", "9.1"))
    _, report = read_dataset(io.StringIO(text))
    (entry,) = report.errors
    assert entry.code == "duplicate"
    assert entry.line == 3


def test_conflicting_performance_metadata(csv_text, make_row):
    text = csv_text(
        make_row("P1", "J1"),
        make_row("P1", "J2"),
        make_row("P1", "J3", apparatus="PH_M"),
    )
    _, report = read_dataset(io.StringIO(text))
    (entry,) = report.errors
    assert entry.code == "conflict"
    assert "apparatus FX_M vs PH_M" in entry.message
    assert "line 2" in entry.message


def test_small_panel_is_a_warning(csv_text, make_row, caplog):
    text = csv_text(make_row("P1", "J1"), make_row("P1", "J2"))
    with caplog.at_level(logging.WARNING):
        records, report = read_dataset(io.StringIO(text))
    assert report.accepted
    assert len(records) == 2
    (warning,) = report.warnings
    assert warning.code == "small_panel"
    assert "panel too small" in warning.message
    assert "panel too small" in caplog.text


def test_clean_panel_has_no_findings(csv_text, make_row):
    _, report = read_dataset(io.StringIO(csv_text(*panel_rows(make_row))))
    assert report.errors == ()
    assert report.warnings == ()
    assert report.n_records == 5


def test_header_mismatch(csv_text, make_row):
    text = csv_text(make_row(), header=",".join(COLUMNS).replace("mark", "score"))
    records, report = read_dataset(io.StringIO(text))
    assert records == []
    (entry,) = report.errors
    assert entry.line == 1
    assert entry.code == "header"


def test_empty_file():
    _, report = read_dataset(io.StringIO(""))
    assert report.errors[0].code == "empty"


def test_extra_field_is_malformed(csv_text, make_row):
    text = csv_text(make_row(), make_row("P1", "J2") + ",extra")
    _, report = read_dataset(io.StringIO(text))
    (entry,) = report.errors
    assert entry.code == "malformed_row"
    assert entry.line == 3


def test_missing_file():
    with pytest.raises(OSError):
        parse_marks_csv("/nonexistent/marks.csv")


def test_invalid_utf8_is_reported_with_its_line(csv_text, make_row):
    data = csv_text(make_row(), make_row("P1", "J2")).encode("utf-8")
    data = data.replace(b"G-P1", b"G\xff\xfe", 2)
    _, report = read_dataset(io.BytesIO(data))
    (entry,) = report.errors
    assert entry.code == "encoding"
    assert entry.line == 2
    assert "0xff" in entry.message
    with pytest.raises(DatasetError, match="first at line 2: not valid UTF-8"):
        parse_marks_csv(io.BytesIO(data))


def test_lines_count_quoted_newlines(csv_text, make_row):
    first = make_row("P1", "J1").replace("C1,", '"C\n1",', 1)
    text = csv_text(first, make_row("P2", "J1", "8.333"))
    _, report = read_dataset(io.StringIO(text))
    (entry,) = [entry for entry in report.errors if entry.code == "mark_grid"]
    assert entry.line == 4


def test_validate_dataset_on_records(make_record):
    records = [make_record("P1", f"J{i}", 9.0) for i in range(3)]
    records.append(make_record("P1", "J0", 9.1))
    report = validate_dataset(records)
    assert [(entry.line, entry.code) for entry in report.errors] == [(5, "duplicate")]


def test_written_datasets_parse_back(csv_text, make_row):
    text = csv_text(*panel_rows(make_row), make_row("P2", "J1", "10", completed="false"))
    records = parse_marks_csv(io.StringIO(text))
    buffer = io.StringIO()
    write_marks_csv(records, buffer)
    assert buffer.getvalue().splitlines()[0] == ",".join(COLUMNS)
    assert parse_marks_csv(io.StringIO(buffer.getvalue())) == records
