"""Generalized Kendall tau distance between rankings.

A ranking r gives, for every competitor i, its rank r[i] (1 is best). The
distance of r from the identity ranking sums, over every inverted pair of
positions s > t with r[s] < r[t], the cost w[s] w[t] pbar(s) pbar(t) D[s, t],
where pbar(i) is the mean position swap cost of moving element i from
position i to position r[i]. With unit weights and costs it is the classic
Kendall tau distance, the number of adjacent swaps a bubble sort needs.

The swap cost matrix D is indexed by position in the reference ranking:
D[i, j] relates the competitors ranked i-th and j-th by the reference.
"""

from __future__ import annotations

from enum import Enum
from typing import TYPE_CHECKING, NamedTuple

import numpy as np

from model import ParameterSet, RankingError, RankingParams

if TYPE_CHECKING:
    from collections.abc import Sequence

    import numpy.typing as npt


class TieBreak(Enum):
    """How equal marks are ordered."""

    BY_INDEX = "by-index"
    RANDOM = "random"


class Ranking(NamedTuple):
    """The rank of every competitor, a permutation of 1..n."""

    ranks: tuple[int, ...]

    @property
    def n(self) -> int:
        """Number of competitors."""
        return len(self.ranks)

    def violations(self) -> list[str]:
        """List the invariants this ranking breaks.

        Returns:
            list[str]: Violation messages, empty when valid.
        """
        if sorted(self.ranks) != list(range(1, self.n + 1)):
            return [f"ranks {self.ranks} are not a permutation of 1..{self.n}"]
        return []

    def inverse(self) -> Ranking:
        """The competitor holding each rank, as a ranking.

        Returns:
            Ranking: The inverse permutation.
        """
        inverse = [0] * self.n
        for competitor, rank in enumerate(self.ranks, start=1):
            inverse[rank - 1] = competitor
        return Ranking(tuple(inverse))

    def compose(self, other: Ranking) -> Ranking:
        """The permutation i -> self[other[i]].

        Args:
            other (Ranking): Applied first.

        Raises:
            RankingError: If the sizes differ.

        Returns:
            Ranking: The composition.
        """
        if other.n != self.n:
            raise RankingError(
                f"cannot compose rankings of size {self.n} and {other.n}"
            )
        return Ranking(tuple(self.ranks[index - 1] for index in other.ranks))

    @classmethod
    def identity(cls, n: int) -> Ranking:
        """The ranking 1, 2, ..., n.

        Args:
            n (int): Number of competitors.

        Returns:
            Ranking: The identity.
        """
        return cls(tuple(range(1, n + 1)))


def ranking_from_marks(
    marks: Sequence[float],
    tie_break: TieBreak = TieBreak.BY_INDEX,
    seed: int | None = None,
) -> Ranking:
    """Rank competitors by mark, highest first.

    Args:
        marks (Sequence[float]): One mark per competitor, nonempty.
        tie_break (TieBreak, optional): BY_INDEX keeps equal marks in input
            order; RANDOM shuffles them with the given seed. Defaults to
            BY_INDEX.
        seed (int | None, optional): Seed of the RANDOM tie break.

    Raises:
        ValueError: If there are no marks.

    Returns:
        Ranking: The ranking.
    """
    if len(marks) == 0:
        raise ValueError("no marks to rank")
    values = np.asarray(marks, dtype=float)
    if tie_break is TieBreak.RANDOM:
        secondary = np.random.default_rng(seed).permutation(len(values))
    else:
        secondary = np.arange(len(values))
    # lexsort sorts by the last key first
    order = np.lexsort((secondary, -values))
    ranks = np.empty(len(values), dtype=int)
    ranks[order] = np.arange(1, len(values) + 1)
    return Ranking(tuple(int(rank) for rank in ranks))


def generalized_kendall(r: Ranking, params: RankingParams) -> float:
    """Generalized Kendall tau distance of a ranking from the identity.

    A fixed point i = r[i] has pbar(i) = 1; the defining ratio is 0/0 there.

    Args:
        r (Ranking): The ranking.
        params (RankingParams): Parameters dimensioned for len(r).

    Raises:
        RankingError: If the ranking or the parameters are invalid, or their
            dimensions differ.

    Returns:
        float: The distance, nonnegative.
    """
    if problems := r.violations():
        raise RankingError(problems[0])
    if params.n != r.n:
        raise RankingError(
            f"parameters are for {params.n} competitors, ranking has {r.n}"
        )
    if problems := params.violations():
        raise RankingError(problems[0])

    ranks = np.asarray(r.ranks)
    mean_costs = _mean_position_costs(ranks, params.delta)
    # inverted[s, t] is set for positions s > t with r[s] < r[t]
    inverted = np.tril(ranks[:, None] < ranks[None, :], k=-1)
    factors = params.w * mean_costs
    costs = np.outer(factors, factors) * params.D
    return float(np.sum(costs[inverted]))


def kendall_between(
    r1: Ranking, r2: Ranking, params: RankingParams
) -> float:
    """Generalized Kendall tau distance between two rankings.

    Evaluates the distance of r1 composed with the inverse of r2, so
    positions are those of r2.

    Args:
        r1 (Ranking): The ranking being scored.
        r2 (Ranking): The reference ranking.
        params (RankingParams): Parameters indexed by r2 positions.

    Raises:
        RankingError: If the sizes differ.

    Returns:
        float: The distance.
    """
    if r1.n != r2.n:
        raise RankingError(
            f"cannot compare rankings of size {r1.n} and {r2.n}"
        )
    return generalized_kendall(r1.compose(r2.inverse()), params)


def parameter_set(
    set_id: ParameterSet | str, control_scores: Sequence[float]
) -> RankingParams:
    """Materialize one of the three named ranking-score parameter sets.

    SET1 has unit weights and costs. SET2 swaps competitors at the cost of
    their control-score gap. SET3 adds position costs 1/i, so that order
    matters more towards the top.

    Args:
        set_id (ParameterSet | str): SET1, SET2 or SET3.
        control_scores (Sequence[float]): Control score of the competitor at
            each reference rank, best first.

    Raises:
        RankingError: If the set is unknown or CUSTOM.

    Returns:
        RankingParams: The parameters.
    """
    try:
        set_id = ParameterSet(set_id)
    except ValueError:
        raise RankingError(f"unknown parameter set '{set_id}'") from None
    scores = np.asarray(control_scores, dtype=float)
    n = len(scores)
    weights = np.ones(n)
    gaps = np.abs(scores[:, None] - scores[None, :])
    match set_id:
        case ParameterSet.SET1:
            return RankingParams(
                set_id, weights, np.ones(n), np.ones((n, n)) - np.eye(n)
            )
        case ParameterSet.SET2:
            return RankingParams(set_id, weights, np.ones(n), gaps)
        case ParameterSet.SET3:
            return RankingParams(
                set_id, weights, 1.0 / np.arange(1, n + 1), gaps
            )
        case _:
            raise RankingError(
                "CUSTOM parameters are built directly, not by name"
            )


def _mean_position_costs(
    ranks: npt.NDArray[np.int_], delta: npt.NDArray[np.float64]
) -> npt.NDArray[np.float64]:
    """pbar(i) = (p_i - p_{r_i}) / (i - r_i), and 1 at fixed points."""
    cumulative = np.cumsum(delta)
    positions = np.arange(1, len(ranks) + 1)
    moved = positions != ranks
    costs = np.ones(len(ranks))
    costs[moved] = (
        cumulative[positions[moved] - 1] - cumulative[ranks[moved] - 1]
    ) / (positions[moved] - ranks[moved])
    return costs
