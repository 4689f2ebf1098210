"""Command implementations, model storage and report writers."""

from .commands import (
    cmd_compare,
    cmd_fit,
    cmd_outliers,
    cmd_report,
    cmd_score,
    cmd_simulate,
    cmd_synth,
)
