"""Files the command line reads and writes besides the mark datasets."""

from __future__ import annotations

import json
import logging
import re
from os import PathLike
from pathlib import Path
from typing import TYPE_CHECKING

import pandas as pd

from model import JudgingError, MissingModelError, SigmaModel

if TYPE_CHECKING:
    from collections.abc import Iterable

_logger = logging.getLogger(__name__)

MODEL_SUFFIX = ".json"
CONTROLS_COLUMN = "control_score"
_SCOPE_CODE = re.compile(r"^[A-Za-z0-9_.-]+$")


def model_path(models_dir: str | PathLike[str], scope: str) -> Path:
    """Where the model of a scope is kept.

    Args:
        models_dir (str | PathLike): The models directory.
        scope (str): Apparatus or discipline code.

    Raises:
        JudgingError: If the scope code cannot name a file.

    Returns:
        Path: models_dir/<scope>.json
    """
    if not _SCOPE_CODE.match(scope):
        raise JudgingError(f"scope code '{scope}' cannot be used as a file name")
    return Path(models_dir) / f"{scope}{MODEL_SUFFIX}"


def save_model(model: SigmaModel, models_dir: str | PathLike[str]) -> Path:
    """Persist a fitted model as JSON, replacing any earlier fit.

    Args:
        model (SigmaModel): The model.
        models_dir (str | PathLike): The models directory, created if needed.

    Returns:
        Path: The written file.
    """
    path = model_path(models_dir, model.scope)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(
        json.dumps(model.to_dict(), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    _logger.info("saved model %s to %s", model.scope, path)
    return path


def load_model(path: str | PathLike[str]) -> SigmaModel:
    """Read a model written by save_model.

    Args:
        path (str | PathLike): The JSON file.

    Raises:
        JudgingError: If the file is not a valid model document.
        OSError: If the file cannot be read.

    Returns:
        SigmaModel: The model.
    """
    text = Path(path).read_text(encoding="utf-8")
    try:
        return SigmaModel.from_dict(json.loads(text))
    except (ValueError, TypeError, AttributeError) as exc:
        raise JudgingError(f"{path}: {exc}") from exc


def load_models(
    models_dir: str | PathLike[str], scopes: Iterable[str]
) -> dict[str, SigmaModel]:
    """Load the models of the given scopes.

    Args:
        models_dir (str | PathLike): The models directory.
        scopes (Iterable[str]): Scope codes needed.

    Raises:
        MissingModelError: If a scope has no model file.

    Returns:
        dict[str, SigmaModel]: Model per scope.
    """
    models = {}
    for scope in sorted(set(scopes)):
        path = model_path(models_dir, scope)
        if not path.is_file():
            raise MissingModelError(scope)
        models[scope] = load_model(path)
    return models


def load_controls(path: str | PathLike[str]) -> list[float]:
    """Read control scores from a one-column CSV file.

    Args:
        path (str | PathLike): CSV with a `control_score` column.

    Raises:
        JudgingError: If the column is missing or holds non-numbers.

    Returns:
        list[float]: The scores in file order.
    """
    try:
        frame = pd.read_csv(path)
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
        raise JudgingError(f"{path}: {exc}") from exc
    if CONTROLS_COLUMN not in frame.columns:
        raise JudgingError(f"{path}: no '{CONTROLS_COLUMN}' column")
    try:
        values = pd.to_numeric(frame[CONTROLS_COLUMN], errors="raise")
    except ValueError as exc:
        raise JudgingError(f"{path}: {exc}") from exc
    return [float(value) for value in values]


def load_labels(path: str | PathLike[str]) -> list[tuple[float, str]]:
    """Read a qualitative label table.

    The file holds a JSON list of [upper bound, label] pairs.

    Args:
        path (str | PathLike): The JSON file.

    Raises:
        JudgingError: If the table is malformed or empty.

    Returns:
        list[tuple[float, str]]: The pairs, sorted by bound.
    """
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        table = sorted((float(bound), str(label)) for bound, label in raw)
    except (ValueError, TypeError) as exc:
        raise JudgingError(f"{path}: not a label table: {exc}") from exc
    if not table:
        raise JudgingError(f"{path}: label table is empty")
    return table
