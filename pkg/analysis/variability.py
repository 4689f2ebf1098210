"""Intrinsic judging error variability: binning, fitting and diagnostics.

The standard deviation of judging discrepancies shrinks as performances get
better. Discrepancies are grouped by control score, the sample standard
deviation of every bin is computed, and the curve

    sigma(c) = alpha + beta * exp(gamma * c)

is fitted to them by weighted least squares, each bin weighted by the number
of performances it holds. The curve is floored only when evaluated.

For a fixed gamma the curve is linear in (alpha, beta), which have a closed
form weighted solution. The fit therefore profiles the residual sum of
squares over gamma: a grid over the whole bracket locates the global basin,
and a bounded Brent search refines it.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from typing import TYPE_CHECKING, NamedTuple

import numpy as np
import pandas as pd
from scipy.optimize import minimize_scalar

from model import DEFAULT_FLOOR, FitError, SigmaModel

if TYPE_CHECKING:
    from collections.abc import Iterable, Mapping, Sequence

    import numpy.typing as npt

    from model import ControlScore, MarkRecord

_logger = logging.getLogger(__name__)

DEFAULT_BIN_WIDTH = 0.1
GAMMA_BOUNDS = (-2.0, 2.0)
GAMMA_GRID_STEP = 0.01
GAMMA_XATOL = 1e-9
NEAR_LINEAR_GAMMA = 1e-4
MIN_BINS = 3
MIN_APPARATUS_BINS = 30
MIN_BIN_MARKS = 2

# added before flooring so that medians such as 9.15 land in the upper bin
_HALF_UP_NUDGE = 1e-9


class Discrepancy(NamedTuple):
    """A judge's mark minus the control score of the performance.

    Attributes:
        performance_id (str): The performance.
        judge_id (str): The judge.
        e_hat (float): Mark minus control score.
        control (float): The control score.
        completed (bool): Whether the routine was completed.
    """

    performance_id: str
    judge_id: str
    e_hat: float
    control: float
    completed: bool = True


class ErrorBin(NamedTuple):
    """Discrepancy statistics of one control-score bin.

    Attributes:
        c (float): Bin centre.
        n_marks (int): Discrepancies in the bin, at least 2.
        sample_sd (float): Sample standard deviation (n - 1 denominator).
        sample_var (float): Sample variance.
        n_performances (int): Distinct performances; the fit weight.
    """

    c: float
    n_marks: int
    sample_sd: float
    sample_var: float
    n_performances: int


def compute_discrepancies(
    records: Iterable[MarkRecord], control_scores: Mapping[str, ControlScore]
) -> list[Discrepancy]:
    """Discrepancy of every mark from its performance's control score.

    Args:
        records (Iterable[MarkRecord]): The marks.
        control_scores (Mapping[str, ControlScore]): Control score per
            performance id.

    Raises:
        KeyError: If a performance has no control score.

    Returns:
        list[Discrepancy]: One discrepancy per record, in record order.
    """
    discrepancies = []
    for record in records:
        try:
            control = control_scores[record.performance_id].value
        except KeyError:
            raise KeyError(
                f"no control score for performance {record.performance_id}"
            ) from None
        discrepancies.append(
            Discrepancy(
                record.performance_id,
                record.judge_id,
                record.mark - control,
                control,
                record.completed,
            )
        )
    return discrepancies


def bin_centre(c: float, bin_width: float = DEFAULT_BIN_WIDTH) -> float:
    """Centre of the bin a control score falls in.

    Bins are anchored at 0; a score halfway between two centres goes up.

    Args:
        c (float): The control score.
        bin_width (float, optional): Bin width. Defaults to 0.1.

    Returns:
        float: The bin centre.
    """
    index = np.floor(c / bin_width + 0.5 + _HALF_UP_NUDGE)
    return round(float(index * bin_width), 10)


def bin_errors(
    discrepancies: Iterable[Discrepancy],
    bin_width: float = DEFAULT_BIN_WIDTH,
    exclude_aborted: bool = False,
) -> list[ErrorBin]:
    """Group discrepancies by control score and summarise every bin.

    Args:
        discrepancies (Iterable[Discrepancy]): The discrepancies.
        bin_width (float, optional): Bin width. Defaults to 0.1.
        exclude_aborted (bool, optional): Leave out routines that were not
            completed. Defaults to False.

    Raises:
        ValueError: If bin_width is not positive.
        FitError: If no bin holds at least two discrepancies.

    Returns:
        list[ErrorBin]: Bins in increasing order of centre.
    """
    if bin_width <= 0:
        raise ValueError("bin_width must be positive")
    frame = pd.DataFrame(
        [
            (item.performance_id, item.e_hat, bin_centre(item.control, bin_width))
            for item in discrepancies
            if item.completed or not exclude_aborted
        ],
        columns=["performance_id", "e_hat", "c"],
    )
    if frame.empty:
        raise FitError("insufficient data")
    stats = frame.groupby("c", sort=True).agg(
        n_marks=("e_hat", "size"),
        sample_sd=("e_hat", "std"),
        n_performances=("performance_id", "nunique"),
    )
    stats = stats[stats["n_marks"] >= MIN_BIN_MARKS]
    if stats.empty:
        raise FitError("insufficient data")
    return [
        ErrorBin(
            c=float(c),
            n_marks=int(row.n_marks),
            sample_sd=float(row.sample_sd),
            sample_var=float(row.sample_sd) ** 2,
            n_performances=int(row.n_performances),
        )
        for c, row in stats.iterrows()
    ]


def fit_sigma(
    bins: Sequence[ErrorBin],
    floor: float = DEFAULT_FLOOR,
    scope: str = "",
) -> SigmaModel:
    """Fit the variability curve to per-bin standard deviations.

    Minimises sum(n_performances * (sample_sd - (alpha + beta * exp(gamma *
    c)))**2) over gamma in [-2, 2]. The floor is stored, not fitted.

    Args:
        bins (Sequence[ErrorBin]): At least three bins.
        floor (float, optional): Evaluation floor. Defaults to 0.05.
        scope (str, optional): Scope code recorded on the model.

    Raises:
        ValueError: If the floor is not positive.
        FitError: If there are fewer than three bins, all bins share one
            centre, or the optimum lies on the gamma bracket.

    Returns:
        SigmaModel: The fitted model with its weighted RMSD.
    """
    if floor <= 0:
        raise ValueError("floor must be positive")
    if len(bins) < MIN_BINS:
        raise FitError(f"need at least {MIN_BINS} bins, got {len(bins)}")
    ordered = sorted(bins)
    c = np.array([item.c for item in ordered])
    sd = np.array([item.sample_sd for item in ordered])
    weights = np.array([item.n_performances for item in ordered], dtype=float)
    if np.ptp(c) == 0:
        raise FitError("degenerate design: every bin has the same centre")
    if np.any(weights <= 0):
        raise FitError("every bin needs a positive performance count")
    # relative weights only; keeps the sums well scaled
    weights = weights / weights.sum()

    lower, upper = GAMMA_BOUNDS
    grid = np.linspace(lower, upper, round((upper - lower) / GAMMA_GRID_STEP) + 1)
    profile = np.array([_profile_sse(g, c, sd, weights) for g in grid])
    best = int(np.argmin(profile))
    gamma = float(grid[best])

    scale = float(np.sum(weights * sd**2))
    flat = np.ptp(profile) <= 1e-12 * max(scale, 1e-12)
    if not flat:
        bracket = (
            float(grid[max(best - 1, 0)]),
            float(grid[min(best + 1, len(grid) - 1)]),
        )
        refined = minimize_scalar(
            _profile_sse,
            bounds=bracket,
            args=(c, sd, weights),
            method="bounded",
            options={"xatol": GAMMA_XATOL},
        )
        if refined.fun <= profile[best]:
            gamma = float(refined.x)
        if min(gamma - lower, upper - gamma) < 1e-6:
            raise FitError(
                f"optimum at gamma={gamma:.6f} lies on the search bracket"
            )

    alpha, beta = _linear_solution(gamma, c, sd, weights)
    if not flat and abs(gamma) < NEAR_LINEAR_GAMMA:
        _logger.warning(
            "%s: gamma=%.3g is close to 0, the bins are nearly linear in c"
            " and alpha=%.6g, beta=%.6g largely cancel",
            scope or "<unnamed>",
            gamma,
            alpha,
            beta,
        )
    model = SigmaModel(
        scope=scope,
        alpha=alpha,
        beta=beta,
        gamma=gamma,
        floor=floor,
        rmsd=0.0,
        n_marks=int(sum(item.n_marks for item in ordered)),
        fitted_range=(float(c[0]), float(c[-1])),
    )
    model = model._replace(rmsd=weighted_rmsd(ordered, model))
    _logger.debug(
        "fitted %s: alpha=%.6g beta=%.6g gamma=%.6g rmsd=%.4g",
        scope or "<unnamed>",
        model.alpha,
        model.beta,
        model.gamma,
        model.rmsd,
    )
    return model


def sigma_at(model: SigmaModel, c: float | npt.ArrayLike) -> float:
    """Intrinsic judging error variability at a control score.

    Args:
        model (SigmaModel): The fitted model.
        c (float | ArrayLike): Control score(s) in [0, 10].

    Returns:
        float: max(alpha + beta * exp(gamma * c), floor); an array when c
            is an array.
    """
    value = np.maximum(model.curve(c), model.floor)
    return float(value) if np.ndim(value) == 0 else value  # type: ignore[return-value]


def weighted_rmsd(bins: Sequence[ErrorBin], model: SigmaModel) -> float:
    """Frequency-weighted RMSD between bin deviations and the curve.

    The curve is taken without its floor.

    Args:
        bins (Sequence[ErrorBin]): Nonempty bins.
        model (SigmaModel): The model.

    Raises:
        ValueError: If there are no bins.

    Returns:
        float: sqrt(sum(w * r**2) / sum(w)).
    """
    if not bins:
        raise ValueError("no bins")
    c = np.array([item.c for item in bins])
    sd = np.array([item.sample_sd for item in bins])
    weights = np.array([item.n_performances for item in bins], dtype=float)
    residuals = sd - model.curve(c)
    return float(np.sqrt(np.sum(weights * residuals**2) / np.sum(weights)))


def fit_scope_models(
    records: Sequence[MarkRecord],
    control_scores: Mapping[str, ControlScore],
    by_apparatus: bool = True,
    bin_width: float = DEFAULT_BIN_WIDTH,
    floor: float = DEFAULT_FLOOR,
    exclude_aborted: bool | None = None,
) -> dict[str, tuple[SigmaModel, list[ErrorBin]]]:
    """Fit one variability model per apparatus or per discipline.

    Scopes without three usable bins are skipped with a warning.

    Args:
        records (Sequence[MarkRecord]): The marks.
        control_scores (Mapping[str, ControlScore]): Control scores.
        by_apparatus (bool, optional): Fit per apparatus rather than per
            discipline. Defaults to True.
        bin_width (float, optional): Bin width. Defaults to 0.1.
        floor (float, optional): Evaluation floor. Defaults to 0.05.
        exclude_aborted (bool | None, optional): Leave out aborted routines;
            None applies each discipline's own policy. Defaults to None.

    Returns:
        dict[str, tuple[SigmaModel, list[ErrorBin]]]: Model and bins per
            scope, in sorted scope order.
    """
    grouped: dict[str, list[MarkRecord]] = defaultdict(list)
    for record in records:
        grouped[record.scope(by_apparatus)].append(record)

    fitted = {}
    for scope in sorted(grouped):
        scope_records = grouped[scope]
        exclude = (
            scope_records[0].discipline.excludes_aborted()
            if exclude_aborted is None
            else exclude_aborted
        )
        discrepancies = compute_discrepancies(scope_records, control_scores)
        try:
            bins = bin_errors(discrepancies, bin_width, exclude)
            model = fit_sigma(bins, floor, scope)
        except FitError as exc:
            _logger.warning("skipping scope %s: %s", scope, exc)
            continue
        if by_apparatus and len(bins) < MIN_APPARATUS_BINS:
            _logger.warning(
                "scope %s has only %d bins; a discipline-level fit may be"
                " more reliable",
                scope,
                len(bins),
            )
        fitted[scope] = (model, bins)
    return fitted


def bins_frame(bins: Sequence[ErrorBin]) -> pd.DataFrame:
    """Bin statistics as a table for plotting.

    Args:
        bins (Sequence[ErrorBin]): The bins.

    Returns:
        pd.DataFrame: Columns c, sample_sd, sample_var, n_marks,
            n_performances.
    """
    return pd.DataFrame(
        [
            (item.c, item.sample_sd, item.sample_var, item.n_marks,
             item.n_performances)
            for item in bins
        ],
        columns=["c", "sample_sd", "sample_var", "n_marks", "n_performances"],
    )


def discrepancy_grid(
    discrepancies: Iterable[Discrepancy], width: float = DEFAULT_BIN_WIDTH
) -> pd.DataFrame:
    """Count discrepancies on a grid of control score against discrepancy.

    Both axes use the binning of `bin_centre`, so the table shows how the
    spread of the marks narrows as the control score rises. Aborted routines
    are counted like any other.

    Args:
        discrepancies (Iterable[Discrepancy]): The discrepancies.
        width (float, optional): Cell width on both axes. Defaults to 0.1.

    Raises:
        ValueError: If width is not positive.

    Returns:
        pd.DataFrame: Columns c, e_hat, count; one row per nonempty cell,
            sorted by c then e_hat.
    """
    if width <= 0:
        raise ValueError("width must be positive")
    frame = pd.DataFrame(
        [
            (bin_centre(item.control, width), bin_centre(item.e_hat, width))
            for item in discrepancies
        ],
        columns=["c", "e_hat"],
    )
    counts = frame.groupby(["c", "e_hat"], sort=True).size()
    return counts.rename("count").reset_index()


def _design(gamma: float, c: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    return np.column_stack([np.ones_like(c), np.exp(gamma * c)])


def _linear_solution(
    gamma: float,
    c: npt.NDArray[np.float64],
    sd: npt.NDArray[np.float64],
    weights: npt.NDArray[np.float64],
) -> tuple[float, float]:
    """Weighted least-squares (alpha, beta) for a fixed gamma."""
    root = np.sqrt(weights)
    solution, *_ = np.linalg.lstsq(
        _design(gamma, c) * root[:, None], sd * root, rcond=None
    )
    return float(solution[0]), float(solution[1])


def _profile_sse(
    gamma: float,
    c: npt.NDArray[np.float64],
    sd: npt.NDArray[np.float64],
    weights: npt.NDArray[np.float64],
) -> float:
    """Weighted residual sum of squares with (alpha, beta) profiled out."""
    alpha, beta = _linear_solution(gamma, c, sd, weights)
    residuals = sd - (alpha + beta * np.exp(gamma * c))
    return float(np.sum(weights * residuals**2))
