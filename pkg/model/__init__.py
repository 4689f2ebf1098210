"""Domain types shared by every part of the judging engine."""

from .control_score import ControlScore
from .discipline import Discipline
from .errors import (
    DatasetError,
    FitError,
    JudgingError,
    MissingModelError,
    RankingError,
    StatisticsError,
    SynthSpecError,
)
from .judge_evaluation import (
    JudgeEvaluation,
    PerformanceScore,
    root_mean_square,
)
from .judge_role import Gender, JudgeRole
from .mark_record import MarkRecord, mark_violation
from .performance_key import PerformanceKey
from .ranking_params import ParameterSet, RankingParams
from .sigma_model import DEFAULT_FLOOR, SigmaModel
from .simulation_result import SimulationResult, SyntheticJudge
