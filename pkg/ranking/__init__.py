"""Rank distances and the synthetic-judge experiment built on them."""

from .kendall import (
    Ranking,
    TieBreak,
    generalized_kendall,
    kendall_between,
    parameter_set,
    ranking_from_marks,
)
from .simulation import (
    DEFAULT_FINAL_CONTROLS,
    DEFAULT_N_JUDGES,
    DEFAULT_SEED,
    judge_scores,
    judge_stream,
    ranking_vs_marking_experiment,
    simulate_marks,
)
