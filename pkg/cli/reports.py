"""Tables and text blocks the commands emit.

Every table is a pandas frame written with fixed float formats so that
repeated runs produce byte-identical files.
"""

from __future__ import annotations

import math
import re
from os import PathLike
from typing import TYPE_CHECKING

import pandas as pd

from analysis import OutlierRow, label_for

if TYPE_CHECKING:
    from collections.abc import Iterable, Mapping, Sequence

    from analysis import OfficialScore, ScopeSummary
    from model import JudgeEvaluation, SigmaModel, SimulationResult

FLOAT_FORMAT = "%.6f"
_UNSAFE = re.compile(r"[^A-Za-z0-9._-]")


def write_csv(frame: pd.DataFrame, path: str | PathLike[str]) -> None:
    """Write a table with the report float format and Unix line endings.

    Args:
        frame (pd.DataFrame): The table.
        path (str | PathLike): Destination file.
    """
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def judges_frame(
    evaluations: Iterable[JudgeEvaluation],
    labels: Sequence[tuple[float, str]] | None = None,
) -> pd.DataFrame:
    """One row per judge and scope with the overall marking score.

    Args:
        evaluations (Iterable[JudgeEvaluation]): Judge evaluations.
        labels (Sequence[tuple[float, str]] | None, optional): Label table;
            adds a `label` column when given.

    Returns:
        pd.DataFrame: Columns judge_id, scope, n, overall_marking_score and
            optionally label.
    """
    rows = []
    for evaluation in evaluations:
        row = {
            "judge_id": evaluation.judge_id,
            "scope": evaluation.scope,
            "n": evaluation.n,
            "overall_marking_score": evaluation.overall_marking_score,
        }
        if labels:
            row["label"] = label_for(evaluation.overall_marking_score, labels)
        rows.append(row)
    columns = ["judge_id", "scope", "n", "overall_marking_score"]
    return pd.DataFrame(rows, columns=columns + (["label"] if labels else []))


def judge_detail_frame(evaluation: JudgeEvaluation) -> pd.DataFrame:
    """One row per performance a judge marked within a scope."""
    return pd.DataFrame(
        list(evaluation.per_performance),
        columns=["performance_id", "e_hat", "marking_score", "outlier"],
    )


def judge_detail_name(evaluation: JudgeEvaluation) -> str:
    """File name of a judge's detail table, safe on any file system."""
    stem = _UNSAFE.sub("_", f"{evaluation.judge_id}_{evaluation.scope}")
    return f"{stem}.csv"


def outliers_frame(rows: Iterable[OutlierRow]) -> pd.DataFrame:
    """The outlier test rows as a table."""
    return pd.DataFrame(list(rows), columns=list(OutlierRow._fields))


def summaries_frame(summaries: Iterable[ScopeSummary]) -> pd.DataFrame:
    """Box-plot statistics per group."""
    return pd.DataFrame(
        list(summaries),
        columns=["scope", "n_judges", "minimum", "q1", "median", "q3",
                 "maximum", "mean"],
    )


def official_frame(scores: Iterable[OfficialScore]) -> pd.DataFrame:
    """Official execution scores with the merge flag."""
    return pd.DataFrame(
        [
            (score.performance_id, score.panel, score.reference, score.final,
             score.merged)
            for score in scores
        ],
        columns=["performance_id", "panel", "reference", "final", "merged"],
    )


def simulation_frame(result: SimulationResult) -> pd.DataFrame:
    """Per-judge scores of a simulation run."""
    return pd.DataFrame(
        list(result.per_judge),
        columns=["judge_index", "marking_score", "k_set1", "k_set2", "k_set3"],
    )


def render_models(models: Mapping[str, SigmaModel]) -> str:
    """Fitted parameters and RMSD per scope.

    Args:
        models (Mapping[str, SigmaModel]): Model per scope.

    Returns:
        str: The table, newline-terminated.
    """
    lines = [
        f"{'scope':<10}{'alpha':>12}{'beta':>14}{'gamma':>10}"
        f"{'rmsd':>10}{'marks':>8}"
    ]
    for scope, model in models.items():
        lines.append(
            f"{scope:<10}{model.alpha:>12.6f}{model.beta:>14.8f}"
            f"{model.gamma:>10.4f}{model.rmsd:>10.5f}{model.n_marks:>8d}"
        )
    return "\n".join(lines) + "\n"


def render_summaries(title: str, summaries: Iterable[ScopeSummary]) -> str:
    """Box-plot statistics of marking scores as text."""
    lines = [title, f"  {'group':<12}{'n':>5}{'min':>9}{'q1':>9}{'median':>9}"
             f"{'q3':>9}{'max':>9}{'mean':>9}"]
    for item in summaries:
        lines.append(
            f"  {item.scope:<12}{item.n_judges:>5}{item.minimum:>9.4f}"
            f"{item.q1:>9.4f}{item.median:>9.4f}{item.q3:>9.4f}"
            f"{item.maximum:>9.4f}{item.mean:>9.4f}"
        )
    return "\n".join(lines) + "\n"


def render_outliers(rows: Sequence[OutlierRow]) -> str:
    """Flagged counts overall and on compatriots."""
    flagged = sum(row.flagged for row in rows)
    compatriot = [row for row in rows if row.same_country]
    compatriot_flagged = sum(row.flagged for row in compatriot)
    lines = [
        "Outlier marks",
        f"  tested {len(rows)}, flagged {flagged}"
        f" ({_share(flagged, len(rows))})",
        f"  compatriot marks {len(compatriot)}, flagged {compatriot_flagged}"
        f" ({_share(compatriot_flagged, len(compatriot))})",
    ]
    return "\n".join(lines) + "\n"


def render_simulation(result: SimulationResult) -> str:
    """Correlations of marking score against each ranking score."""
    lines = [
        f"Simulation of {len(result.per_judge)} judges (seed {result.seed})",
        f"  {'set':<6}{'pearson':>10}{'spearman':>10}",
    ]
    for name, value in result.correlations.items():
        lines.append(
            f"  {name:<6}{_fixed(value):>10}"
            f"{_fixed(result.rank_correlations[name]):>10}"
        )
    return "\n".join(lines) + "\n"


def _share(part: int, whole: int) -> str:
    return "n/a" if whole == 0 else f"{100 * part / whole:.2f}%"


def _fixed(value: float) -> str:
    return "nan" if math.isnan(value) else f"{value:.4f}"
