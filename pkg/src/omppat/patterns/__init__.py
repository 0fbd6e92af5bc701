"""P1-P9 pattern profiles and version comparison."""

from .compare import DiffReport, DiffRow, MismatchedPrograms, compare_versions
from .profile import (
    DESCRIPTIONS,
    PATTERNS,
    PatternProfile,
    UnknownSection,
    load_annotations,
    parse_annotations,
    profile_program,
    profile_section,
)

__all__ = [
    "DiffReport",
    "DiffRow",
    "MismatchedPrograms",
    "compare_versions",
    "DESCRIPTIONS",
    "PATTERNS",
    "PatternProfile",
    "UnknownSection",
    "load_annotations",
    "parse_annotations",
    "profile_program",
    "profile_section",
]
