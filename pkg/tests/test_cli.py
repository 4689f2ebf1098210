import json
import logging

import pytest

from analysis.ingest import write_marks_csv
from analysis.synth import SynthSpec, generate_competition
from main import get_args, main

REPORT_FILES = (
    "marks.csv",
    "truth.csv",
    "bins_ART.csv",
    "discrepancies_ART.csv",
    "judge_scores.csv",
    "outliers.csv",
    "official_scores.csv",
    "report.txt",
    "judges/E01_ART.csv",
)


@pytest.fixture
def spec_file(tmp_path):
    """A small synthetic spec whose discipline-level fit is reliable."""

    def factory(**fields):
        raw = {"n_performances": 1500, "panel_size": 5, "seed": 8, **fields}
        path = tmp_path / "spec.json"
        path.write_text(json.dumps(raw), encoding="utf-8")
        return str(path)

    return factory


def run_pipeline(root, spec):
    out, models = root / "out", root / "models"
    marks = str(out / "marks.csv")
    assert main(["synth", "--spec", spec, "--out-dir", str(out)]) == 0
    assert (
        main(
            [
                "fit",
                "--input",
                marks,
                "--scope",
                "discipline",
                "--models-dir",
                str(models),
                "--out-dir",
                str(out),
            ]
        )
        == 0
    )
    assert (
        main(
            [
                "report",
                "--input",
                marks,
                "--scope",
                "discipline",
                "--models-dir",
                str(models),
                "--out-dir",
                str(out),
            ]
        )
        == 0
    )
    return out, models


def test_pipeline_is_reproducible(tmp_path, spec_file, capsys):
    spec = spec_file()
    first, first_models = run_pipeline(tmp_path / "first", spec)
    second, second_models = run_pipeline(tmp_path / "second", spec)
    for name in REPORT_FILES:
        assert (first / name).read_bytes() == (second / name).read_bytes(), name
    assert (first_models / "ART.json").read_bytes() == (
        second_models / "ART.json"
    ).read_bytes()

    report = (first / "report.txt").read_text(encoding="utf-8")
    assert "Group comparison by role" in report
    assert "Group comparison by gender" in report
    assert "Official execution scores" in report
    assert "Group comparison by gender" in capsys.readouterr().out


def test_model_file_per_apparatus(tmp_path, spec_file):
    spec = spec_file(apparatus=["FX_M", "PH_M"], n_performances=4000)
    out, models = tmp_path / "out", tmp_path / "models"
    assert main(["synth", "--spec", spec, "--out-dir", str(out)]) == 0
    args = ["--input", str(out / "marks.csv"), "--models-dir", str(models)]
    assert main(["fit", *args, "--out-dir", str(out)]) == 0
    assert sorted(path.name for path in models.glob("*.json")) == [
        "FX_M.json",
        "PH_M.json",
    ]
    document = json.loads((models / "FX_M.json").read_text(encoding="utf-8"))
    assert set(document) == {
        "scope",
        "alpha",
        "beta",
        "gamma",
        "floor",
        "rmsd",
        "n_marks",
        "c_min",
        "c_max",
    }
    grid = (out / "discrepancies_PH_M.csv").read_text(encoding="utf-8")
    assert grid.startswith("c,e_hat,count\n")

    assert main(["score", *args, "--out-dir", str(out)]) == 0
    lines = (out / "judge_scores.csv").read_text(encoding="utf-8").splitlines()
    assert lines[0] == "judge_id,scope,n,overall_marking_score"
    details = sorted(path.name for path in (out / "judges").glob("*.csv"))
    assert len(details) == len(lines) - 1
    assert "E01_FX_M.csv" in details and "E01_PH_M.csv" in details
    detail = (out / "judges" / "E01_FX_M.csv").read_text(encoding="utf-8")
    assert detail.startswith("performance_id,e_hat,marking_score,outlier\n")
    assert main(["outliers", *args, "--out-dir", str(out), "--mode", "fixed"]) == 0
    assert (out / "outliers.csv").exists()
    assert (
        main(["compare", *args, "--out-dir", str(out), "--group-by", "gender"]) == 0
    )
    assert (out / "compare_gender.txt").read_text(encoding="utf-8").startswith(
        "Group comparison by gender"
    )


def test_missing_input_file(tmp_path, capsys):
    status = main(["fit", "--input", str(tmp_path / "absent.csv")])
    assert status == 1
    assert "Error:" in capsys.readouterr().err


def test_missing_model_names_the_scope(tmp_path, spec_file, capsys):
    out, models = tmp_path / "out", tmp_path / "models"
    assert main(["synth", "--spec", spec_file(), "--out-dir", str(out)]) == 0
    status = main(
        [
            "score",
            "--input",
            str(out / "marks.csv"),
            "--models-dir",
            str(models),
            "--out-dir",
            str(out),
        ]
    )
    assert status != 0
    assert "FX_M" in capsys.readouterr().err


def test_invalid_dataset_lists_every_error(tmp_path, csv_text, make_row, capsys):
    path = tmp_path / "marks.csv"
    path.write_text(
        csv_text(
            make_row("P1", "J1", "9.0"),
            make_row("P1", "J2", "12.0"),
            make_row("P1", "J3", "8.333"),
        ),
        encoding="utf-8",
    )
    assert main(["fit", "--input", str(path), "--out-dir", str(tmp_path)]) == 1
    err = capsys.readouterr().err
    assert "line 3: [mark_range]" in err
    assert "line 4: [mark_grid]" in err
    assert "Invalid dataset" in err


def test_undecodable_dataset_is_reported(tmp_path, csv_text, make_row, capsys):
    path = tmp_path / "marks.csv"
    path.write_bytes(csv_text(make_row()).encode("utf-8").replace(b"G-P1", b"G\xff\xfe"))
    assert main(["fit", "--input", str(path), "--out-dir", str(tmp_path)]) == 1
    err = capsys.readouterr().err
    assert "line 2: [encoding]" in err
    assert "Invalid dataset" in err


def test_thin_scope_is_skipped_with_a_warning(tmp_path, make_record, caplog):
    records, _ = generate_competition(SynthSpec(n_performances=1500, seed=8))
    records += [
        make_record("H0", f"J{judge}", 9.0 + 0.05 * judge, apparatus="HB_M")
        for judge in range(5)
    ]
    path = tmp_path / "marks.csv"
    write_marks_csv(records, path)
    with caplog.at_level(logging.WARNING):
        status = main(
            [
                "fit",
                "--input",
                str(path),
                "--models-dir",
                str(tmp_path / "models"),
                "--out-dir",
                str(tmp_path),
            ]
        )
    assert status == 0
    assert "skipping scope HB_M" in caplog.text


def test_simulation_is_reproducible(tmp_path, capsys):
    model = tmp_path / "FX_M.json"
    model.write_text(
        json.dumps(
            {
                "scope": "FX_M",
                "alpha": 0.59054,
                "beta": -0.0042441,
                "gamma": 0.5,
                "floor": 0.05,
                "rmsd": 0.01,
                "n_marks": 1000,
                "c_min": 6.5,
                "c_max": 9.5,
            }
        ),
        encoding="utf-8",
    )
    outputs = []
    for name in ("a", "b"):
        out = tmp_path / name
        args = ["simulate", "--model", str(model), "--n-judges", "200"]
        assert main([*args, "--out-dir", str(out)]) == 0
        outputs.append((out / "simulation.csv").read_bytes())
    assert outputs[0] == outputs[1]
    lines = outputs[0].decode().splitlines()
    assert lines[0] == "judge_index,marking_score,k_set1,k_set2,k_set3"
    assert len(lines) == 201
    assert "Simulation of 200 judges (seed 42)" in capsys.readouterr().out


def test_simulation_reads_control_scores(tmp_path, capsys):
    controls = tmp_path / "controls.csv"
    controls.write_text("control_score\n9.0\n8.5\n8.0\n", encoding="utf-8")
    model = tmp_path / "model.json"
    model.write_text(
        json.dumps(
            {
                "scope": "FX_M",
                "alpha": 0.3,
                "beta": 0.0,
                "gamma": 0.0,
                "floor": 0.05,
                "rmsd": 0.0,
                "n_marks": 10,
                "c_min": 8.0,
                "c_max": 9.0,
            }
        ),
        encoding="utf-8",
    )
    args = ["simulate", "--model", str(model), "--controls", str(controls)]
    assert main([*args, "--n-judges", "20", "--out-dir", str(tmp_path)]) == 0
    assert "Simulation of 20 judges" in capsys.readouterr().out

    model.write_text("{}", encoding="utf-8")
    assert main([*args, "--out-dir", str(tmp_path)]) == 1
    assert "lacks" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        ["simulate", "--model", "m.json", "--n-judges", "0"],
        ["fit", "--input", "x.csv", "--bin-width", "0"],
        ["fit", "--input", "x.csv", "--floor", "-1"],
        ["score"],
        ["bogus"],
    ],
)
def test_bad_arguments_exit(argv):
    with pytest.raises(SystemExit) as info:
        get_args(argv)
    assert info.value.code == 2


def test_argument_defaults():
    args = get_args(["simulate", "--model", "m.json"])
    assert args.seed == 42
    assert args.n_judges == 1000
    args = get_args(["synth", "--spec", "s.json"])
    assert args.seed is None
    args = get_args(["report", "--input", "x.csv", "--no-exclude-aborted"])
    assert args.exclude_aborted is False
    assert args.mode == "scaled"
    assert args.alternative == "two-sided"
