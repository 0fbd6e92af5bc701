"""Per-section P1-P9 pattern profiles."""

from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Optional

from ..analysis.accesses import collect_accesses
from ..frontend import nodes as n
from ..frontend.loops import SectionId, enumerate_sections, loops_in, top_level_loops

COUNT_FIELDS = ("p1", "p2", "p3", "p8")
FLAG_FIELDS = ("p4", "p5", "p6", "p7", "p9")
PATTERNS = ("p1", "p2", "p3", "p4", "p5", "p6", "p7", "p8", "p9")

DESCRIPTIONS = {
    "p1": "loop nests whose outermost loop is parallelized",
    "p2": "parallelized loops containing function calls",
    "p3": "worksharing loops (in regions or combined parallel for)",
    "p4": "dynamic or guided schedule",
    "p5": "indirect accesses to data written in a parallel loop",
    "p6": "threadprivate data accessed",
    "p7": "array reduction",
    "p8": "nowait clauses",
    "p9": "hand code modification (annotated)",
}


class UnknownSection(KeyError):
    pass


@dataclass
class PatternProfile:
    section: Optional[SectionId]
    p1: int = 0
    p2: int = 0
    p3: int = 0
    p4: int = 0
    p5: int = 0
    p6: int = 0
    p7: int = 0
    p8: int = 0
    p9: int = 0

    def __post_init__(self):
        for f in PATTERNS:
            v = getattr(self, f)
            if v < 0:
                raise ValueError(f"{f} must be non-negative")

    def values(self) -> tuple:
        return tuple(getattr(self, f) for f in PATTERNS)

    def is_zero(self):
        return not any(self.values())

    def combine(self, other: "PatternProfile", sum_flags=False) -> "PatternProfile":
        out = PatternProfile(self.section)
        for f in PATTERNS:
            a, b = getattr(self, f), getattr(other, f)
            setattr(out, f, a + b if f in COUNT_FIELDS or sum_flags else int(bool(a or b)))
        return out

    def delta(self, other: "PatternProfile") -> tuple:
        """``other - self`` per pattern."""
        return tuple(b - a for a, b in zip(self.values(), other.values()))

    def with_section(self, section):
        kw = {f.name: getattr(self, f.name) for f in fields(self)}
        kw["section"] = section
        return PatternProfile(**kw)


# --------------------------------------------------------------------------
# annotations


def parse_annotations(text: str) -> dict:
    """Sidecar lines ``function#a-#b p9=1``; ``#`` at line start begins a comment."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            section = SectionId.parse(parts[0])
        except ValueError as exc:
            raise ValueError(f"annotations line {lineno}: {exc}") from None
        values = {}
        for kv in parts[1:]:
            if "=" not in kv:
                raise ValueError(f"annotations line {lineno}: expected key=value, got {kv!r}")
            k, v = kv.split("=", 1)
            values[k.strip()] = int(v)
        out[section] = values
    return out


def load_annotations(path) -> dict:
    with open(path) as fh:
        return parse_annotations(fh.read())


def _annotated_p9(annotations, section):
    if not annotations:
        return 0
    for sec, values in annotations.items():
        if sec.overlaps(section) and values.get("p9", 0):
            return 1
    return 0


# --------------------------------------------------------------------------
# profiling


def _threadprivate_vars(ast):
    out = set()
    for x in ast.walk():
        if isinstance(x, n.OmpStmt) and x.omp.kind == "threadprivate":
            out.update(x.omp.variables)
    return out


def _declared_arrays(ast, fn):
    arrays = {d.name for d in ast.global_decls().values() if d.is_array}
    arrays |= {p.name for p in fn.params if p.is_array}
    for x in fn.body.walk():
        if isinstance(x, n.DeclStmt):
            arrays.update(d.name for d in x.decls if d.is_array)
    return arrays


def _parallel_loops(nest):
    return [l for l in loops_in(nest) if l.omp is not None and l.omp.is_loop]


def _indirect_in(loop, arrays):
    accesses = collect_accesses(loop, arrays=arrays)
    written = {a.base for a in accesses if a.mode == "write"}
    return any(a.indirect and a.base in written for a in accesses)


def _array_reduction_in(nest, arrays):
    for x in nest.walk():
        if not isinstance(x, n.Stmt) or x.omp is None:
            continue
        d = x.omp
        if d.is_loop and any(v in arrays for v in d.reduction_vars()):
            return True
        if d.kind in ("atomic", "critical"):
            for y in x.walk():
                if isinstance(y, n.Assign) and isinstance(y.target, n.ArrayRef):
                    return True
                if isinstance(y, (n.Unary, n.Postfix)) and y.op in ("++", "--") and isinstance(y.operand, n.ArrayRef):
                    return True
    return False


def profile_section(ast: n.TranslationUnit, section: SectionId, annotations=None) -> PatternProfile:
    """P1-P9 for the loop nests covered by ``section``."""
    fn = ast.function(section.function)
    if fn is None:
        raise UnknownSection(str(section))
    nests = top_level_loops(fn)
    if section.last >= len(nests):
        raise UnknownSection(str(section))
    tp = _threadprivate_vars(ast)
    arrays = _declared_arrays(ast, fn)
    prof = PatternProfile(section)
    for k in section.ordinals():
        nest, _ancestors = nests[k]
        if nest.omp is not None and nest.omp.is_loop:
            prof.p1 += 1
        par = _parallel_loops(nest)
        prof.p3 += len(par)
        for loop in par:
            if any(isinstance(x, n.Call) for x in loop.body.walk()):
                prof.p2 += 1
            if loop.omp.schedule and loop.omp.schedule[0] in ("dynamic", "guided"):
                prof.p4 = 1
            if _indirect_in(loop, arrays):
                prof.p5 = 1
        names = {x.name for x in nest.walk() if isinstance(x, n.Id)} | {
            x.base for x in nest.walk() if isinstance(x, n.ArrayRef)
        }
        if names & tp:
            prof.p6 = 1
        if _array_reduction_in(nest, arrays):
            prof.p7 = 1
        prof.p8 += sum(1 for x in nest.walk() if isinstance(x, n.Stmt) and x.omp is not None and x.omp.nowait)
    prof.p9 = _annotated_p9(annotations, section)
    return prof


def profile_program(ast: n.TranslationUnit, annotations=None, sections=None, sum_flags=False) -> PatternProfile:
    """Program row: counts summed and flags or-ed over every section of the unit.

    With ``sum_flags`` the flags are summed over ``sections`` instead, which is
    how per-application totals over listed rows are tallied.
    """
    sections = list(sections) if sections is not None else enumerate_sections(ast)
    total = PatternProfile(None)
    for s in sections:
        total = total.combine(profile_section(ast, s, None), sum_flags)
    if sum_flags:
        total.p9 = sum(1 for s in sections if _annotated_p9(annotations, s))
    else:
        total.p9 = 1 if annotations and any(v.get("p9", 0) for v in annotations.values()) else total.p9
    return total
