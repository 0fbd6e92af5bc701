"""Section-aligned comparison of two versions of one program."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..frontend import nodes as n
from ..frontend.loops import SectionId, top_level_loops
from .profile import PATTERNS, PatternProfile, profile_section


class MismatchedPrograms(ValueError):
    pass


@dataclass
class DiffRow:
    section: SectionId
    auto: Optional[PatternProfile]
    manual: Optional[PatternProfile]
    timing: Optional[tuple] = None  # (auto seconds, manual seconds)

    @property
    def presence(self):
        if self.auto is None:
            return "manual only"
        if self.manual is None:
            return "auto only"
        return "both"

    @property
    def deltas(self) -> tuple:
        a = self.auto or PatternProfile(self.section)
        m = self.manual or PatternProfile(self.section)
        return a.delta(m)

    def delta(self, pattern):
        return self.deltas[PATTERNS.index(pattern)]


@dataclass
class DiffReport:
    rows: list = field(default_factory=list)

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def row(self, section):
        key = SectionId.parse(section) if isinstance(section, str) else section
        for r in self.rows:
            if r.section == key:
                return r
        raise KeyError(str(section))


def _nest_count(ast, name):
    fn = ast.function(name)
    return len(top_level_loops(fn)) if fn is not None else 0


def _aligned_sections(auto, manual, annotations):
    """Annotated ranges first, then one section per remaining nest."""
    names = [f.name for f in manual.functions() if auto.function(f.name) is not None]
    out = []
    for name in names:
        count = max(_nest_count(auto, name), _nest_count(manual, name))
        covered = set()
        for sec in sorted(s for s in (annotations or {}) if s.function == name):
            if any(k in covered for k in sec.ordinals()):
                continue
            covered.update(sec.ordinals())
            out.append(sec)
        out.extend(SectionId(name, k) for k in range(count) if k not in covered)
    return sorted(out)


def _profile_or_none(ast, section, annotations):
    fn = ast.function(section.function)
    if fn is None or section.last >= len(top_level_loops(fn)):
        return None
    return profile_section(ast, section, annotations)


def compare_versions(auto: n.TranslationUnit, manual: n.TranslationUnit, annotations=None, timings=None) -> DiffReport:
    """Profile both versions per section and keep rows that differ.

    ``timings`` maps a section (or its string form) to an (auto, manual)
    seconds pair; rows with timing data are always kept.
    """
    common = {f.name for f in auto.functions()} & {f.name for f in manual.functions()}
    if not common:
        raise MismatchedPrograms("the two versions share no function")
    timings = {SectionId.parse(k) if isinstance(k, str) else k: v for k, v in (timings or {}).items()}
    report = DiffReport()
    for sec in _aligned_sections(auto, manual, annotations):
        a = _profile_or_none(auto, sec, annotations)
        m = _profile_or_none(manual, sec, annotations)
        row = DiffRow(sec, a, m, timings.get(sec))
        if row.presence == "both" and not any(row.deltas) and row.timing is None:
            continue
        report.rows.append(row)
    return report
