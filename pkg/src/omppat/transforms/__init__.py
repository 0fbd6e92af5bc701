"""Source rewrites applying the hand-parallelization patterns."""

from .clauses import apply_schedule, conditional_parallelize, serialize
from .common import (
    Context,
    FewerThanTwo,
    NoParallelLoop,
    NotAdjacent,
    NotAnArrayReduction,
    NotStaticOrGlobal,
    PersistsAcrossRegions,
    ThreadprivateRefused,
    TransformError,
    strip_directives,
)
from .parallelize import Placement, parallelize_loop
from .pipeline import PASS_ORDER, LogEntry, PlanError, RewriteResult, TransformPlan, run_pipeline
from .reduction import lower_array_reduction
from .region import form_parallel_region, insert_nowait
from .threadprivate import convert_threadprivate

__all__ = [
    "apply_schedule",
    "conditional_parallelize",
    "serialize",
    "Context",
    "FewerThanTwo",
    "NoParallelLoop",
    "NotAdjacent",
    "NotAnArrayReduction",
    "NotStaticOrGlobal",
    "PersistsAcrossRegions",
    "ThreadprivateRefused",
    "TransformError",
    "strip_directives",
    "Placement",
    "parallelize_loop",
    "PASS_ORDER",
    "LogEntry",
    "PlanError",
    "RewriteResult",
    "TransformPlan",
    "run_pipeline",
    "lower_array_reduction",
    "form_parallel_region",
    "insert_nowait",
    "convert_threadprivate",
]
