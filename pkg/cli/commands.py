"""The subcommands of the command line.

Each command takes the parsed arguments, writes its files under the output
directory, prints a short summary on stdout and returns the exit status.
Errors propagate as JudgingError or OSError for main to report.
"""

from __future__ import annotations

import argparse
import logging
from pathlib import Path

from analysis import (
    Alternative,
    GroupBy,
    OutlierMode,
    ScoringPolicy,
    SynthSpec,
    bins_frame,
    compare_groups,
    compute_discrepancies,
    control_scores,
    discrepancy_grid,
    evaluate_judges,
    fit_scope_models,
    flag_outliers,
    generate_competition,
    group_marking_scores,
    official_execution_scores,
    parse_marks_csv,
    summarize_group,
    summarize_scopes,
    write_marks_csv,
    write_truth_csv,
)
from model import JudgeEvaluation, MarkRecord, SigmaModel
from ranking import DEFAULT_FINAL_CONTROLS, ranking_vs_marking_experiment

from . import reports, storage

_logger = logging.getLogger(__name__)

MARKS_FILE = "marks.csv"
TRUTH_FILE = "truth.csv"
JUDGES_FILE = "judge_scores.csv"
JUDGES_DIR = "judges"
SUMMARY_FILE = "scope_summary.csv"
OUTLIERS_FILE = "outliers.csv"
SIMULATION_FILE = "simulation.csv"
OFFICIAL_FILE = "official_scores.csv"
REPORT_FILE = "report.txt"


def cmd_fit(args: argparse.Namespace) -> int:
    """Fit and persist one variability model per scope.

    Args:
        args (argparse.Namespace): input, scope, bin_width, floor,
            exclude_aborted, models_dir and out_dir.

    Returns:
        int: Exit status.
    """
    records = parse_marks_csv(args.input)
    controls = control_scores(records)
    by_apparatus = _by_apparatus(args)
    fitted = fit_scope_models(
        records,
        controls,
        by_apparatus=by_apparatus,
        bin_width=args.bin_width,
        floor=args.floor,
        exclude_aborted=args.exclude_aborted,
    )
    if not fitted:
        _logger.warning("no scope had enough data for a fit")
    out_dir = _out_dir(args)
    for scope, (model, bins) in fitted.items():
        storage.save_model(model, args.models_dir)
        reports.write_csv(bins_frame(bins), out_dir / f"bins_{scope}.csv")
        scope_records = [r for r in records if r.scope(by_apparatus) == scope]
        reports.write_csv(
            discrepancy_grid(compute_discrepancies(scope_records, controls)),
            out_dir / f"discrepancies_{scope}.csv",
        )
    models = {scope: model for scope, (model, _) in fitted.items()}
    print(reports.render_models(models), end="")
    return 0


def cmd_score(args: argparse.Namespace) -> int:
    """Evaluate every judge against the persisted models.

    Args:
        args (argparse.Namespace): input, models_dir, scope, exclude_aborted,
            labels and out_dir.

    Returns:
        int: Exit status.
    """
    records, evaluations, _ = _evaluate(args)
    labels = storage.load_labels(args.labels) if args.labels else None
    out_dir = _out_dir(args)
    reports.write_csv(
        reports.judges_frame(evaluations, labels), out_dir / JUDGES_FILE
    )
    _write_judge_details(evaluations, out_dir)
    summaries = summarize_scopes(evaluations)
    reports.write_csv(reports.summaries_frame(summaries), out_dir / SUMMARY_FILE)
    print(reports.render_summaries("Marking scores per scope", summaries), end="")
    _logger.info("scored %d marks", len(records))
    return 0


def cmd_outliers(args: argparse.Namespace) -> int:
    """Flag the marks beyond their judge's outlier threshold.

    Args:
        args (argparse.Namespace): input, models_dir, scope, mode,
            leave_one_out and out_dir.

    Returns:
        int: Exit status.
    """
    records, evaluations, models = _evaluate(args)
    rows = flag_outliers(
        evaluations,
        records,
        control_scores(records),
        models,
        OutlierMode(args.mode),
        args.leave_one_out,
    )
    reports.write_csv(
        reports.outliers_frame(rows), _out_dir(args) / OUTLIERS_FILE
    )
    print(reports.render_outliers(rows), end="")
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    """Run the synthetic-judge experiment on a final.

    Args:
        args (argparse.Namespace): model, controls, n_judges, seed and
            out_dir.

    Returns:
        int: Exit status.
    """
    model = storage.load_model(args.model)
    controls = (
        storage.load_controls(args.controls)
        if args.controls
        else list(DEFAULT_FINAL_CONTROLS)
    )
    result = ranking_vs_marking_experiment(
        controls, model, args.n_judges, args.seed
    )
    reports.write_csv(
        reports.simulation_frame(result), _out_dir(args) / SIMULATION_FILE
    )
    print(reports.render_simulation(result), end="")
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    """Compare marking scores between judge groups.

    Args:
        args (argparse.Namespace): input, models_dir, scope, group_by,
            alternative and out_dir.

    Returns:
        int: Exit status.
    """
    records, evaluations, _ = _evaluate(args)
    text = _comparison(
        records,
        evaluations,
        GroupBy(args.group_by),
        Alternative(args.alternative),
    )
    target = _out_dir(args) / f"compare_{args.group_by}.txt"
    target.write_text(text, encoding="utf-8")
    print(text, end="")
    return 0


def cmd_synth(args: argparse.Namespace) -> int:
    """Generate a synthetic dataset and its truth table.

    Args:
        args (argparse.Namespace): spec, seed and out_dir.

    Returns:
        int: Exit status.
    """
    spec = SynthSpec.load(args.spec)
    records, truth = generate_competition(spec, args.seed)
    out_dir = _out_dir(args)
    write_marks_csv(records, out_dir / MARKS_FILE)
    write_truth_csv(truth, out_dir / TRUTH_FILE)
    print(f"wrote {len(records)} marks for {len(truth)} performances to {out_dir}")
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    """Write every analysis of a dataset into one report bundle.

    Args:
        args (argparse.Namespace): input, models_dir, scope, exclude_aborted,
            mode, alternative and out_dir.

    Returns:
        int: Exit status.
    """
    records, evaluations, models = _evaluate(args)
    controls = control_scores(records)
    rows = flag_outliers(
        evaluations, records, controls, models, OutlierMode(args.mode)
    )
    official = official_execution_scores(records)
    out_dir = _out_dir(args)

    reports.write_csv(reports.judges_frame(evaluations), out_dir / JUDGES_FILE)
    _write_judge_details(evaluations, out_dir)
    reports.write_csv(reports.outliers_frame(rows), out_dir / OUTLIERS_FILE)
    reports.write_csv(reports.official_frame(official), out_dir / OFFICIAL_FILE)

    alternative = Alternative(args.alternative)
    sections = [
        reports.render_models(models),
        reports.render_summaries(
            "Marking scores per scope", summarize_scopes(evaluations)
        ),
        reports.render_outliers(rows),
        f"Official execution scores\n  {len(official)} performance(s),"
        f" {sum(score.merged for score in official)} merged with the"
        " reference score\n",
    ]
    for group_by in GroupBy:
        sections.append(_comparison(records, evaluations, group_by, alternative))
    text = "\n".join(sections)
    (out_dir / REPORT_FILE).write_text(text, encoding="utf-8")
    print(text, end="")
    return 0


def _evaluate(
    args: argparse.Namespace,
) -> tuple[list[MarkRecord], list[JudgeEvaluation], dict[str, SigmaModel]]:
    """Parse the input and evaluate its judges against stored models."""
    records = parse_marks_csv(args.input)
    by_apparatus = _by_apparatus(args)
    include_aborted = (
        None if args.exclude_aborted is None else not args.exclude_aborted
    )
    mode = OutlierMode(getattr(args, "mode", OutlierMode.SCALED.value))
    policy = ScoringPolicy(by_apparatus, include_aborted, mode)
    scopes = {
        record.scope(by_apparatus) for record in records if policy.includes(record)
    }
    models = storage.load_models(args.models_dir, scopes)
    evaluations = evaluate_judges(
        records, control_scores(records), models, policy
    )
    return records, evaluations, models


def _comparison(
    records: list[MarkRecord],
    evaluations: list[JudgeEvaluation],
    group_by: GroupBy,
    alternative: Alternative,
) -> str:
    groups = group_marking_scores(evaluations, records, group_by)
    comparison = compare_groups(groups, group_by, alternative)
    summaries = [summarize_group(name, scores) for name, scores in groups.items()]
    return comparison.render() + reports.render_summaries(
        f"Marking score distribution by {group_by.value}", summaries
    )


def _write_judge_details(
    evaluations: list[JudgeEvaluation], out_dir: Path
) -> None:
    details = out_dir / JUDGES_DIR
    details.mkdir(exist_ok=True)
    for evaluation in evaluations:
        reports.write_csv(
            reports.judge_detail_frame(evaluation),
            details / reports.judge_detail_name(evaluation),
        )


def _by_apparatus(args: argparse.Namespace) -> bool:
    return args.scope == "apparatus"


def _out_dir(args: argparse.Namespace) -> Path:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    return out_dir
