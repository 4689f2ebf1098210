"""Ingestion, panel aggregation, variability fitting and judge evaluation."""

from .ingest import (
    ReportEntry,
    ValidationReport,
    parse_marks_csv,
    read_dataset,
    validate_dataset,
    write_marks_csv,
)
from .marking import (
    ScopeSummary,
    ScoringPolicy,
    evaluate_judges,
    label_for,
    overall_marking_score,
    performance_marking_score,
    summarize_group,
    summarize_scopes,
)
from .outlier import (
    OutlierMode,
    OutlierRow,
    flag_outliers,
    flagged_fraction,
    outlier_threshold,
)
from .panel import (
    OfficialScore,
    PanelTolerances,
    control_score,
    control_scores,
    execution_panel_score,
    final_execution_score,
    official_execution_scores,
    reference_score,
)
from .stats import (
    Alternative,
    GroupBy,
    GroupComparison,
    WelchResult,
    compare_groups,
    group_marking_scores,
    pearson,
    spearman,
    welch_t_test,
)
from .synth import (
    JudgeProfile,
    SynthSpec,
    TruthRow,
    generate_competition,
    write_truth_csv,
)
from .variability import (
    Discrepancy,
    ErrorBin,
    bin_errors,
    bins_frame,
    compute_discrepancies,
    discrepancy_grid,
    fit_scope_models,
    fit_sigma,
    sigma_at,
    weighted_rmsd,
)
