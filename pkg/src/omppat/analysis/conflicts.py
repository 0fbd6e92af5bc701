"""Cross-loop conflict check deciding whether a barrier between two
worksharing loops can be dropped."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..frontend import nodes as n
from ..frontend.loops import loop_header, written_names
from .accesses import DEFAULT_PURE, AffineForm, collect_accesses


@dataclass
class ConflictReport:
    conflicting: bool
    witnesses: list = field(default_factory=list)  # (access in first, access in second)
    reason: str = ""

    def __bool__(self):
        return self.conflicting


def _static_unchunked(d):
    # an absent schedule clause behaves as static without chunk
    return d is None or d.schedule is None or (d.schedule[0] == "static" and d.schedule[1] is None)


def _owned(fa, fb, i1, i2, invariant_ok):
    """True when one subscript dimension maps both accesses to the iteration
    that owns the element: identical nonconstant affine functions of the index."""
    for sa, sb in zip(fa.subscripts, fb.subscripts):
        if not (isinstance(sa, AffineForm) and isinstance(sb, AffineForm)):
            continue
        if sa.indices() != {i1} or sb.indices() != {i2}:
            continue
        if sa.rename(i1, "@") != sb.rename(i2, "@"):
            continue
        if not invariant_ok(sa.const):
            continue
        return True
    return False


def cross_loop_conflicts(first: n.For, second: n.For, region=None, pure_functions=DEFAULT_PURE, summaries=None, arrays=None) -> ConflictReport:
    """Decide whether ``second`` may start on a thread before ``first`` has
    finished on the others.

    ``region`` is the enclosing parallel directive; variables it makes private
    are per-thread and never conflict.
    """
    d1, d2 = first.omp, second.omp
    if not (_static_unchunked(d1) and _static_unchunked(d2)):
        return ConflictReport(True, [], "schedule is not static without chunk")
    h1, h2 = loop_header(first), loop_header(second)
    if h1 is None or h2 is None or not (h1.canonical and h2.canonical):
        return ConflictReport(True, [], "non-canonical loop")
    if not h1.same_space(h2):
        return ConflictReport(True, [], "iteration spaces differ")
    per_thread = set()
    if region is not None:
        per_thread |= region.private_vars()
    local1 = _locally_private(first)
    local2 = _locally_private(second)
    a1 = collect_accesses(first, summaries, pure_functions, arrays)
    a2 = collect_accesses(second, summaries, pure_functions, arrays)
    unknown = [a for a in a1 + a2 if a.unknown]
    if unknown:
        return ConflictReport(True, [(unknown[0], unknown[0])], f"unanalyzable call {unknown[0].via_call}")
    # values combined or copied out at the end of the first loop
    finals = set(d1.reduction_vars() if d1 else ()) | set(d1.lastprivate if d1 else ())
    variant = written_names(first.body) | written_names(second.body)

    def invariant_ok(poly):
        return not (poly.atoms() & variant)

    witnesses = []
    for x in a1:
        if x.base in per_thread or x.base in local1 or x.base == h1.index:
            continue
        for y in a2:
            if y.base != x.base or y.base in local2 or y.base == h2.index:
                continue
            if x.base in finals:
                witnesses.append((x, y))
                continue
            if x.mode == "read" and y.mode == "read":
                continue
            if x.is_scalar or y.is_scalar:
                witnesses.append((x, y))
                continue
            if len(x.subscripts) != len(y.subscripts) or not _owned(x, y, h1.index, h2.index, invariant_ok):
                witnesses.append((x, y))
    if witnesses:
        w = witnesses[0]
        return ConflictReport(True, witnesses, f"{w[0]} / {w[1]}")
    return ConflictReport(False, [], "same-thread ownership")


def _locally_private(loop):
    """Variables private to each iteration or thread of ``loop``."""
    out = set()
    h = loop_header(loop)
    if h is not None:
        out.add(h.index)
    if loop.omp is not None:
        out |= set(loop.omp.private) | set(loop.omp.firstprivate)
    for x in loop.body.walk():
        if isinstance(x, n.DeclStmt):
            out.update(d.name for d in x.decls)
        if isinstance(x, n.For):
            hh = loop_header(x)
            if hh is not None:
                out.add(hh.index)
    return out
