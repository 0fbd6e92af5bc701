"""Benchmark driver, metrics, reports and the command line."""

from .bench import (
    BenchConfig,
    CompileError,
    ConfigError,
    IoError,
    RunError,
    TimingRecord,
    compile_source,
    load_config,
    parse_config,
    run_bench,
    run_binary,
)
from .metrics import overhead, overhead_raw, round_half_up, rounded_speedup, speedup
from .report import ReportTable, diff_table, emit_report, profile_table, timing_table

__all__ = [
    "BenchConfig",
    "CompileError",
    "ConfigError",
    "IoError",
    "RunError",
    "TimingRecord",
    "compile_source",
    "load_config",
    "parse_config",
    "run_bench",
    "run_binary",
    "overhead",
    "overhead_raw",
    "round_half_up",
    "rounded_speedup",
    "speedup",
    "ReportTable",
    "diff_table",
    "emit_report",
    "profile_table",
    "timing_table",
]
