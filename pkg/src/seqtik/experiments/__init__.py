"""Sweeps, reports, verification suites and the command-line interface."""
from .report import emit_report, load_report_json, read_report_csv
from .sweep import (
    SweepConfig,
    SweepReport,
    SweepRow,
    bound_ratios,
    fit_slope,
    has_plateau,
    resolve_truncation,
    run_sweep,
)

__all__ = [
    "SweepConfig",
    "SweepReport",
    "SweepRow",
    "bound_ratios",
    "emit_report",
    "fit_slope",
    "has_plateau",
    "load_report_json",
    "read_report_csv",
    "resolve_truncation",
    "run_sweep",
]
