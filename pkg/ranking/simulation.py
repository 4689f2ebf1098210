"""Synthetic judges marking a final, scored by marking and ranking scores."""

from __future__ import annotations

import logging
import math
from typing import TYPE_CHECKING

import numpy as np

from analysis.marking import overall_marking_score
from analysis.stats import pearson, spearman
from analysis.variability import sigma_at
from model import (
    ParameterSet,
    SimulationResult,
    StatisticsError,
    SyntheticJudge,
)

from .kendall import kendall_between, parameter_set, ranking_from_marks

if TYPE_CHECKING:
    from collections.abc import Callable, Mapping, Sequence

    import numpy.typing as npt

    from model import RankingParams, SigmaModel

    from .kendall import Ranking

_logger = logging.getLogger(__name__)

DEFAULT_SEED = 42
DEFAULT_N_JUDGES = 1000
NAMED_SETS = (ParameterSet.SET1, ParameterSet.SET2, ParameterSet.SET3)
# control scores of an eight-competitor floor final, best first
DEFAULT_FINAL_CONTROLS = (9.1, 8.975, 8.9, 8.85, 8.8, 8.725, 8.6, 8.4)
MARK_GRID = 0.05


def judge_stream(seed: int, index: int) -> np.random.Generator:
    """Random stream of one simulated judge.

    Equal to child `index` of `SeedSequence(seed).spawn(...)`.

    Args:
        seed (int): Simulation seed.
        index (int): Judge index, from 0.

    Returns:
        np.random.Generator: A PCG64 generator.
    """
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def simulate_marks(
    control_scores: Sequence[float],
    model: SigmaModel,
    n_judges: int,
    seed: int = DEFAULT_SEED,
    clamp: bool = True,
    rounding: bool = False,
) -> npt.NDArray[np.float64]:
    """Draw marks of independent synthetic judges.

    Mark (j, p) is Normal(c_p, sigma(c_p)). Judge j draws from its own PCG64
    stream derived from (seed, j), so a row does not depend on n_judges and
    judges can be generated in any order or in parallel.

    Args:
        control_scores (Sequence[float]): Control score per performance, at
            least two.
        model (SigmaModel): Variability model the judges follow.
        n_judges (int): Number of judges, at least one.
        seed (int, optional): Generator seed. Defaults to DEFAULT_SEED.
        clamp (bool, optional): Clip marks to [0, 10]. Defaults to True.
        rounding (bool, optional): Round marks to the 0.05 grid, for
            sensitivity runs. Defaults to False.

    Raises:
        ValueError: If there are fewer than two performances or no judges.

    Returns:
        np.ndarray: n_judges x n matrix of marks.
    """
    controls = np.asarray(control_scores, dtype=float)
    if controls.ndim != 1 or len(controls) < 2:
        raise ValueError("need at least two control scores")
    if n_judges < 1:
        raise ValueError(f"need at least one judge, got {n_judges}")

    sigmas = np.array([sigma_at(model, float(c)) for c in controls])
    marks = np.stack(
        [
            judge_stream(seed, index).normal(controls, sigmas)
            for index in range(n_judges)
        ]
    )
    if rounding:
        marks = np.round(marks / MARK_GRID) * MARK_GRID
    if clamp:
        marks = np.clip(marks, 0.0, 10.0)
    return marks


def judge_scores(
    marks: Sequence[float],
    control_scores: Sequence[float],
    model: SigmaModel,
    reference: Ranking,
    params: Mapping[ParameterSet, RankingParams],
) -> tuple[float, float, float, float]:
    """Marking score and the three ranking scores of one judge.

    Args:
        marks (Sequence[float]): The judge's mark per performance.
        control_scores (Sequence[float]): Control score per performance.
        model (SigmaModel): Variability model.
        reference (Ranking): Ranking by control score.
        params (Mapping[ParameterSet, RankingParams]): SET1, SET2 and SET3
            parameters indexed by reference position.

    Returns:
        tuple[float, float, float, float]: M, K'[SET1], K'[SET2], K'[SET3].
    """
    marking = overall_marking_score(
        [
            (mark - c) / sigma_at(model, c)
            for mark, c in zip(marks, control_scores)
        ]
    )
    ranking = ranking_from_marks(marks)
    k1, k2, k3 = (
        kendall_between(ranking, reference, params[set_id])
        for set_id in NAMED_SETS
    )
    return marking, k1, k2, k3


def ranking_vs_marking_experiment(
    control_scores: Sequence[float],
    model: SigmaModel,
    n_judges: int = DEFAULT_N_JUDGES,
    seed: int = DEFAULT_SEED,
    clamp: bool = True,
) -> SimulationResult:
    """Compare marking scores with ranking scores over synthetic judges.

    The reference ranking orders the competitors by control score, and the
    swap costs of SET2 and SET3 take the control scores in that order.

    Args:
        control_scores (Sequence[float]): Control score per performance.
        model (SigmaModel): Variability model the judges follow.
        n_judges (int, optional): Number of judges. Defaults to 1000.
        seed (int, optional): Generator seed. Defaults to DEFAULT_SEED.
        clamp (bool, optional): Clip marks to [0, 10]. Defaults to True.

    Returns:
        SimulationResult: Scores per judge and their correlations.
    """
    marks = simulate_marks(control_scores, model, n_judges, seed, clamp=clamp)
    reference = ranking_from_marks(control_scores)
    in_rank_order = [c for _, c in sorted(zip(reference.ranks, control_scores))]
    params = {
        set_id: parameter_set(set_id, in_rank_order) for set_id in NAMED_SETS
    }

    per_judge = tuple(
        SyntheticJudge(
            index,
            *judge_scores(
                [float(mark) for mark in row],
                control_scores,
                model,
                reference,
                params,
            ),
        )
        for index, row in enumerate(marks)
    )

    marking = [judge.marking_score for judge in per_judge]
    columns = {
        ParameterSet.SET1: [judge.k_set1 for judge in per_judge],
        ParameterSet.SET2: [judge.k_set2 for judge in per_judge],
        ParameterSet.SET3: [judge.k_set3 for judge in per_judge],
    }
    correlations = {}
    rank_correlations = {}
    for set_id, scores in columns.items():
        correlations[set_id.value] = _correlation(pearson, marking, scores)
        rank_correlations[set_id.value] = _correlation(spearman, marking, scores)
    _logger.info(
        "simulated %d judges on %d performances", n_judges, len(control_scores)
    )
    return SimulationResult(seed, per_judge, correlations, rank_correlations)


def _correlation(
    function: Callable[[Sequence[float], Sequence[float]], float],
    x: Sequence[float],
    y: Sequence[float],
) -> float:
    try:
        return function(x, y)
    except StatisticsError as exc:
        _logger.warning("correlation undefined: %s", exc)
        return math.nan
