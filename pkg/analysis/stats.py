"""Group comparisons of marking scores and correlation utilities.

The Student t distribution is evaluated in-repo through a continued-fraction
regularized incomplete beta function, so p-values do not depend on the
version of an external statistics package.
"""

from __future__ import annotations

import logging
import math
from collections import defaultdict
from enum import Enum
from typing import TYPE_CHECKING, NamedTuple

import numpy as np
from scipy.special import betaln
from scipy.stats import rankdata

from model import Gender, StatisticsError, root_mean_square

if TYPE_CHECKING:
    from collections.abc import Iterable, Mapping, Sequence

    import numpy.typing as npt

    from model import JudgeEvaluation, MarkRecord

_logger = logging.getLogger(__name__)

CF_EPS = 1e-15
CF_TINY = 1e-300
CF_MAX_ITERATIONS = 10_000


class Alternative(Enum):
    """Alternative hypothesis of a t-test on mean(a) - mean(b)."""

    TWO_SIDED = "two-sided"
    LESS = "less"
    GREATER = "greater"


class GroupBy(Enum):
    """Attribute marking scores are grouped by."""

    ROLE = "role"
    GENDER = "gender"
    APPARATUS = "apparatus"


class WelchResult(NamedTuple):
    """Outcome of Welch's t-test."""

    t: float
    df: float
    p: float
    alternative: Alternative


class GroupComparison(NamedTuple):
    """Sizes and means of marking-score groups, and their test if two."""

    group_by: GroupBy
    names: tuple[str, ...]
    sizes: tuple[int, ...]
    means: tuple[float, ...]
    test: WelchResult | None

    def render(self) -> str:
        """Plain-text block of the comparison.

        Returns:
            str: The report, newline-terminated.
        """
        lines = [f"Group comparison by {self.group_by.value}"]
        lines.append(f"  {'group':<14}{'n':>6}{'mean':>12}")
        for name, size, mean in zip(self.names, self.sizes, self.means):
            lines.append(f"  {name:<14}{size:>6}{mean:>12.6f}")
        if self.test is None:
            lines.append("  no test: exactly two groups are needed")
        else:
            first, second = self.names
            lines.append(
                f"Welch t-test {first} vs {second}"
                f" (alternative: {self.test.alternative.value})"
            )
            lines.append(
                f"  t = {self.test.t:.6f}  df = {self.test.df:.4f}"
                f"  p = {self.test.p:.6g}"
            )
        return "\n".join(lines) + "\n"


def regularized_incomplete_beta(x: float, a: float, b: float) -> float:
    """Regularized incomplete beta function I_x(a, b).

    Args:
        x (float): Upper limit, in [0, 1].
        a (float): First shape parameter, positive.
        b (float): Second shape parameter, positive.

    Raises:
        ValueError: If x is outside [0, 1] or a shape is not positive.

    Returns:
        float: I_x(a, b).
    """
    return _incomplete_beta(x, 1.0 - x, a, b)


def student_t_cdf(t: float, df: float) -> float:
    """Cumulative distribution function of Student's t.

    Args:
        t (float): The statistic.
        df (float): Degrees of freedom, positive.

    Returns:
        float: P(T <= t).
    """
    tail = _two_tail_half(t, df)
    return tail if t < 0 else 1.0 - tail


def student_t_sf(t: float, df: float) -> float:
    """Survival function of Student's t.

    Args:
        t (float): The statistic.
        df (float): Degrees of freedom, positive.

    Returns:
        float: P(T > t).
    """
    tail = _two_tail_half(t, df)
    return 1.0 - tail if t < 0 else tail


def welch_t_test(
    a: Sequence[float],
    b: Sequence[float],
    alternative: Alternative = Alternative.TWO_SIDED,
) -> WelchResult:
    """Welch's unequal-variance t-test on mean(a) - mean(b).

    Args:
        a (Sequence[float]): First sample, at least two values.
        b (Sequence[float]): Second sample, at least two values.
        alternative (Alternative, optional): Alternative hypothesis.
            Defaults to TWO_SIDED.

    Raises:
        StatisticsError: If a sample has fewer than two values or no
            variance.

    Returns:
        WelchResult: t, Welch-Satterthwaite df and the p-value.
    """
    first = np.asarray(a, dtype=float)
    second = np.asarray(b, dtype=float)
    if len(first) < 2 or len(second) < 2:
        raise StatisticsError("each sample needs at least two values")
    var_a = float(np.var(first, ddof=1))
    var_b = float(np.var(second, ddof=1))
    if var_a <= 0 or var_b <= 0:
        raise StatisticsError("each sample needs positive variance")

    se_a = var_a / len(first)
    se_b = var_b / len(second)
    t = (float(np.mean(first)) - float(np.mean(second))) / math.sqrt(se_a + se_b)
    df = (se_a + se_b) ** 2 / (
        se_a**2 / (len(first) - 1) + se_b**2 / (len(second) - 1)
    )
    match alternative:
        case Alternative.LESS:
            p = student_t_cdf(t, df)
        case Alternative.GREATER:
            p = student_t_sf(t, df)
        case _:
            p = min(1.0, 2.0 * _two_tail_half(t, df))
    return WelchResult(t, df, p, alternative)


def pearson(x: npt.ArrayLike, y: npt.ArrayLike) -> float:
    """Pearson product-moment correlation.

    Args:
        x (ArrayLike): First variable.
        y (ArrayLike): Second variable, same length.

    Raises:
        StatisticsError: If lengths differ, are below two, or a variable is
            constant.

    Returns:
        float: The correlation, in [-1, 1].
    """
    first = np.asarray(x, dtype=float)
    second = np.asarray(y, dtype=float)
    if first.shape != second.shape or first.ndim != 1 or len(first) < 2:
        raise StatisticsError("need two equal-length samples of size >= 2")
    dx = first - first.mean()
    dy = second - second.mean()
    sxx = float(np.dot(dx, dx))
    syy = float(np.dot(dy, dy))
    if sxx == 0 or syy == 0:
        raise StatisticsError("correlation undefined for a constant variable")
    r = float(np.dot(dx, dy)) / math.sqrt(sxx * syy)
    return min(1.0, max(-1.0, r))


def spearman(x: npt.ArrayLike, y: npt.ArrayLike) -> float:
    """Spearman rank correlation, ties taking their average rank.

    Args:
        x (ArrayLike): First variable.
        y (ArrayLike): Second variable, same length.

    Raises:
        StatisticsError: As pearson.

    Returns:
        float: The correlation, in [-1, 1].
    """
    return pearson(rankdata(x), rankdata(y))


def group_marking_scores(
    evaluations: Iterable[JudgeEvaluation],
    records: Iterable[MarkRecord],
    group_by: GroupBy,
) -> dict[str, list[float]]:
    """Marking scores grouped by judge role, gender or apparatus.

    An evaluation whose marks fall in several groups, such as a judge who
    served both on the execution panel and as a reference judge, contributes
    one marking score per group, computed over that group's marks.

    Args:
        evaluations (Iterable[JudgeEvaluation]): Judge evaluations.
        records (Iterable[MarkRecord]): The marks behind them.
        group_by (GroupBy): The grouping attribute.

    Returns:
        dict[str, list[float]]: Marking scores per group name, sorted by
            name; groups without members are left out.
    """
    by_key = {record.key: record for record in records}
    groups: dict[str, list[float]] = defaultdict(list)
    unknown = 0
    for evaluation in evaluations:
        split: dict[str, list[float]] = defaultdict(list)
        for entry in evaluation.per_performance:
            record = by_key[(entry.performance_id, evaluation.judge_id)]
            if (name := _group_name(record, group_by)) is None:
                unknown += 1
                continue
            split[name].append(entry.marking_score)
        for name, scores in split.items():
            groups[name].append(root_mean_square(scores))

    if unknown:
        _logger.warning(
            "%d mark(s) from judges of unknown gender left out", unknown
        )
    if not groups:
        _logger.warning("no %s group has any marking score", group_by.value)
    return {name: groups[name] for name in sorted(groups)}


def compare_groups(
    groups: Mapping[str, Sequence[float]],
    group_by: GroupBy,
    alternative: Alternative = Alternative.TWO_SIDED,
) -> GroupComparison:
    """Summarise marking-score groups and test two of them.

    Welch's test runs on the two groups in name order, as mean(first) -
    mean(second), when there are exactly two groups.

    Args:
        groups (Mapping[str, Sequence[float]]): Marking scores per group.
        group_by (GroupBy): The grouping attribute, for the report.
        alternative (Alternative, optional): Alternative hypothesis.

    Returns:
        GroupComparison: The comparison.
    """
    names = tuple(sorted(groups))
    test = None
    if len(names) == 2:
        try:
            test = welch_t_test(
                groups[names[0]], groups[names[1]], alternative
            )
        except StatisticsError as exc:
            _logger.warning("cannot compare %s: %s", " and ".join(names), exc)
    return GroupComparison(
        group_by,
        names,
        tuple(len(groups[name]) for name in names),
        tuple(float(np.mean(groups[name])) for name in names),
        test,
    )


def _group_name(record: MarkRecord, group_by: GroupBy) -> str | None:
    match group_by:
        case GroupBy.ROLE:
            return record.judge_role.value
        case GroupBy.GENDER:
            if record.judge_gender is Gender.UNKNOWN:
                return None
            return record.judge_gender.value
        case _:
            return record.apparatus


def _two_tail_half(t: float, df: float) -> float:
    """P(T > |t|) for Student's t with df degrees of freedom."""
    if df <= 0:
        raise ValueError("degrees of freedom must be positive")
    t2 = t * t
    if math.isinf(t2):
        return 0.0
    # x and 1 - x computed separately to keep precision near t = 0
    return 0.5 * _incomplete_beta(df / (df + t2), t2 / (df + t2), df / 2, 0.5)


def _incomplete_beta(x: float, y: float, a: float, b: float) -> float:
    """I_x(a, b) with y = 1 - x supplied by the caller."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    if a <= 0 or b <= 0:
        raise ValueError("shape parameters must be positive")
    if x == 0.0:
        return 0.0
    if y == 0.0:
        return 1.0
    front = math.exp(a * math.log(x) + b * math.log(y) - float(betaln(a, b)))
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_continued_fraction(x, a, b) / a
    return 1.0 - front * _beta_continued_fraction(y, b, a) / b


def _beta_continued_fraction(x: float, a: float, b: float) -> float:
    """Continued fraction of the incomplete beta, by modified Lentz."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < CF_TINY:
        d = CF_TINY
    d = 1.0 / d
    h = d
    for m in range(1, CF_MAX_ITERATIONS + 1):
        m2 = 2 * m
        numerator = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + numerator * d
        d = CF_TINY if abs(d) < CF_TINY else d
        c = 1.0 + numerator / c
        c = CF_TINY if abs(c) < CF_TINY else c
        d = 1.0 / d
        h *= d * c
        numerator = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + numerator * d
        d = CF_TINY if abs(d) < CF_TINY else d
        c = 1.0 + numerator / c
        c = CF_TINY if abs(c) < CF_TINY else c
        d = 1.0 / d
        step = d * c
        h *= step
        if abs(step - 1.0) < CF_EPS:
            return h
    raise StatisticsError("incomplete beta continued fraction did not converge")
