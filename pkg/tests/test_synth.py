import json
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from analysis.ingest import validate_dataset
from analysis.marking import evaluate_judges
from analysis.outlier import flag_outliers
from analysis.panel import control_scores
from analysis.synth import (
    GeneratingCurve,
    JudgeProfile,
    QualityDistribution,
    SynthSpec,
    TruthRow,
    generate_competition,
    write_truth_csv,
)
from analysis.variability import fit_scope_models, sigma_at
from model import JudgeRole, SigmaModel, SynthSpecError

BUNDLED_SPEC = Path(__file__).resolve().parent.parent / "data" / "artistic.json"


def test_default_spec():
    spec = SynthSpec()
    assert spec.violations() == []
    pool = spec.judge_pool()
    assert [judge.judge_id for judge in spec.pool(JudgeRole.EXECUTION)] == [
        f"E{index:02d}" for index in range(1, 8)
    ]
    assert [judge.judge_id for judge in spec.pool(JudgeRole.REFERENCE)] == ["R01", "R02"]
    assert len(pool) == 9


@pytest.mark.parametrize(
    ("changes", "message"),
    [
        ({"panel_size": 2}, "panel_size must be at least 3"),
        ({"n_performances": 0}, "n_performances must be positive"),
        ({"aborted_rate": 1.5}, "aborted_rate"),
        ({"quality": QualityDistribution(low=9.0, high=8.0)}, "quality distribution"),
        ({"curve": GeneratingCurve(floor=0.0)}, "floor"),
        (
            {"judges": (JudgeProfile("E1", "FRA"), JudgeProfile("E1", "GBR"))},
            "unique",
        ),
        (
            {"judges": (JudgeProfile("S1", "FRA", role=JudgeRole.SUPERIOR),)},
            "EXECUTION or REFERENCE",
        ),
        (
            {"judges": tuple(JudgeProfile(f"E{i}", "FRA") for i in range(4))},
            "4 execution judge(s) for a panel of 7",
        ),
    ],
)
def test_invalid_specs(changes, message):
    spec = SynthSpec()._replace(**changes)
    assert any(message in problem for problem in spec.violations())
    with pytest.raises(SynthSpecError, match="invalid synth spec"):
        generate_competition(spec)


def test_spec_from_dict():
    spec = SynthSpec.from_dict(
        {
            "competition_id": "X",
            "discipline": "TRA",
            "apparatus": ["IND"],
            "n_performances": 10,
            "panel_size": 5,
            "n_reference": 0,
            "quality": {"mean": 7.0},
            "judges": [
                {"judge_id": f"E{i}", "country": "FRA", "gender": "F"}
                for i in range(5)
            ],
        }
    )
    assert spec.competition_id == "X"
    assert spec.apparatus == ("IND",)
    assert spec.quality == QualityDistribution(mean=7.0)
    assert len(spec.judges) == 5


@pytest.mark.parametrize(
    ("raw", "message"),
    [
        ({"n_judges": 3}, "unknown spec field"),
        ({"quality": {"median": 8.0}}, "malformed"),
        ({"discipline": "GYM"}, "malformed"),
        ({"judges": [{"judge_id": "E1"}]}, "judge_id and a country"),
        ({"panel_size": 1}, "invalid synth spec"),
    ],
)
def test_spec_errors(raw, message):
    with pytest.raises(SynthSpecError, match=message):
        SynthSpec.from_dict(raw)


def test_load_rejects_bad_json(tmp_path):
    path = tmp_path / "spec.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(SynthSpecError, match="not valid JSON"):
        SynthSpec.load(path)
    path.write_text("[]", encoding="utf-8")
    with pytest.raises(SynthSpecError, match="JSON object"):
        SynthSpec.load(path)


def test_bundled_spec_loads():
    spec = SynthSpec.load(BUNDLED_SPEC)
    assert spec.violations() == []
    assert len(spec.apparatus) == 6
    raw = json.loads(BUNDLED_SPEC.read_text(encoding="utf-8"))
    assert spec.n_performances == raw["n_performances"]


def test_generation_is_deterministic():
    spec = SynthSpec(n_performances=50)
    assert generate_competition(spec) == generate_competition(spec)
    assert generate_competition(spec) != generate_competition(spec, seed=1)
    assert generate_competition(spec._replace(seed=1)) == generate_competition(
        spec, seed=1
    )


def test_generated_records():
    spec = SynthSpec(
        n_performances=120, apparatus=("FX_M", "PH_M"), aborted_rate=0.25, seed=4
    )
    records, truth = generate_competition(spec)
    assert len(records) == 120 * 9
    assert len(truth) == 120
    assert truth[0].performance_id == "SYN-P001"
    assert records[0].performance_id == "SYN-P001"
    assert {record.apparatus for record in records} == {"FX_M", "PH_M"}
    assert validate_dataset(records).errors == ()

    marks = np.array([record.mark for record in records])
    assert marks.min() >= 0 and marks.max() <= 10
    assert np.allclose(marks * 10, np.round(marks * 10))
    assert all(6.5 <= row.true_quality <= 9.5 for row in truth)

    aborted = {record.performance_id for record in records if not record.completed}
    assert 10 <= len(aborted) <= 50
    per_performance = pd.Series([record.performance_id for record in records])
    assert (per_performance.value_counts() == 9).all()


def test_panels_are_drawn_from_the_pool():
    judges = tuple(JudgeProfile(f"E{i:02d}", "FRA") for i in range(12)) + tuple(
        JudgeProfile(f"R{i}", "GBR", role=JudgeRole.REFERENCE) for i in range(3)
    )
    spec = SynthSpec(n_performances=200, panel_size=5, judges=judges)
    records, _ = generate_competition(spec)
    by_performance = {}
    for record in records:
        by_performance.setdefault(record.performance_id, []).append(record)
    for panel in by_performance.values():
        roles = [record.judge_role for record in panel]
        assert roles.count(JudgeRole.EXECUTION) == 5
        assert roles.count(JudgeRole.REFERENCE) == 2
        assert len({record.judge_id for record in panel}) == 7
    assert len({record.judge_id for record in records}) == 15


def test_write_truth_csv(tmp_path):
    path = tmp_path / "truth.csv"
    write_truth_csv([TruthRow("P1", 8.25), TruthRow("P2", 9.123456789)], path)
    assert path.read_text(encoding="utf-8") == (
        "performance_id,true_quality\nP1,8.250000\nP2,9.123457\n"
    )


def test_compatriot_bias_shows_in_outliers():
    judges = (
        JudgeProfile("E01", "FRA", compatriot_bias=0.3),
        *(JudgeProfile(f"E{i:02d}", "GBR") for i in range(2, 9)),
    )
    spec = SynthSpec(
        n_performances=1000,
        panel_size=5,
        n_reference=0,
        judges=judges,
        countries=("FRA", "GBR", "USA"),
        seed=12,
    )
    records, _ = generate_competition(spec)
    curve = GeneratingCurve()
    models = {"FX_M": SigmaModel("FX_M", curve.alpha, curve.beta, curve.gamma)}
    controls = control_scores(records)
    evaluations = evaluate_judges(records, controls, models)
    rows = [
        row
        for row in flag_outliers(evaluations, records, controls, models)
        if row.judge_id == "E01"
    ]
    home = [row.flagged for row in rows if row.same_country]
    away = [row.flagged for row in rows if not row.same_country]
    assert home and away
    assert np.mean(home) > 2 * np.mean(away)


def test_fit_recovers_the_generating_curve():
    spec = SynthSpec(
        n_performances=2000,
        quality=QualityDistribution(mean=7.75, sd=0.6, low=6.5, high=9.0),
        seed=31,
    )
    records, _ = generate_competition(spec)
    controls = control_scores(records)
    fitted = fit_scope_models(records, controls)
    model, _ = fitted["FX_M"]

    values = np.array([score.value for score in controls.values()])
    low, high = np.percentile(values, [5, 95])
    grid = np.linspace(low, high, 25)
    assert sigma_at(model, grid) == pytest.approx(spec.curve.sigma(grid), rel=0.1)


def test_bundled_dataset_fits_closely():
    records, _ = generate_competition(SynthSpec.load(BUNDLED_SPEC))
    fitted = fit_scope_models(records, control_scores(records), by_apparatus=False)
    model, _ = fitted["ART"]
    assert model.rmsd <= 0.02
