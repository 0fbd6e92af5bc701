"""Outermost-first loop parallelization."""

from __future__ import annotations

from dataclasses import dataclass

from ..analysis.accesses import collect_accesses
from ..analysis.dependence import dependence_test
from ..analysis.privatization import find_private, live_after
from ..analysis.reductions import recognize_reductions
from ..frontend import nodes as n
from ..frontend.loops import calls_in, child_loops, loop_header
from .common import Context, NoParallelLoop, names_in

OMP_REDUCTION_OPS = {"+": "+", "*": "*", "max": "max", "min": "min"}


@dataclass
class Placement:
    loop: n.For
    directive: n.OmpDirective
    depth: int

    @property
    def inner(self):
        return self.depth > 0

    @property
    def placement(self):
        return "inner" if self.inner else "outer"


def _has_omp(node):
    return any(isinstance(x, n.Stmt) and x.omp is not None for x in node.walk())


def _known_extent(ctx, fn, name):
    d = ctx.declaration(name, fn)
    return d is not None and bool(d.dims) and all(x is not None for x in d.dims) and d.pointer == 0


def _threadprivate_refs(loop, ctx, fn):
    tp = {v for x in ctx.unit.walk() if isinstance(x, n.OmpStmt) and x.omp.kind == "threadprivate" for v in x.omp.variables}
    if not tp:
        return []
    hits = set()
    for v in names_in(loop) & tp:
        decl = ctx.declaration(v, fn)
        if decl is None or decl.storage in ("global", "static"):
            hits.add(v)
    for call in calls_in(loop.body):
        s = ctx.summaries.get(call.func)
        if s is not None:
            hits |= (set(s.globals) | set(s.global_reads)) & tp
    return sorted(hits)


def analyze_level(loop: n.For, ctx: Context, fn: n.FunctionDef):
    """Directive for ``loop`` or the reason it cannot be parallelized."""
    h = loop_header(loop)
    if h is None or not h.canonical:
        return None, "non-canonical loop"
    if _has_omp(loop):
        return None, "already contains OpenMP directives"
    tp = _threadprivate_refs(loop, ctx, fn)
    if tp:
        # a worksharing loop would touch only part of each thread's copy
        return None, f"threadprivate variable {tp[0]}"
    for call in calls_in(loop.body):
        if call.func in ctx.pure_functions:
            continue
        s = ctx.callgraph.summary(call.func)
        if s.classification in ("io", "unknown"):
            return None, f"{s.classification} call {call.func}"
    arrays = ctx.arrays(fn)
    accesses = collect_accesses(loop, ctx.summaries, ctx.pure_functions, arrays)
    unknown = [a for a in accesses if a.unknown]
    if unknown:
        return None, f"unanalyzable call {unknown[0].via_call}"
    live = live_after(fn, loop, ctx.unit) if fn is not None else set()
    if h.index in live:
        return None, f"loop index {h.index} is used after the loop"
    priv = find_private(loop, ctx.unit, live)
    reductions = recognize_reductions(loop)
    red_vars = {}
    for r in reductions:
        if priv.of(r.variable) != "shared":
            continue
        if r.is_array and not _known_extent(ctx, fn, r.variable):
            return None, f"array reduction on {r.variable} of unknown extent"
        red_vars[r.variable] = r.op
    ignore = priv.privatized() | set(red_vars) | {h.index}
    for e in dependence_test(loop, accesses):
        if e.carried and e.src.base not in ignore:
            return None, str(e)
    d = n.OmpDirective("parallel_for")
    inner_private = sorted(v for v in priv.private() if v != h.index and v not in red_vars)
    # private copies of pointers or unsized arrays would be uninitialized
    for v in inner_private:
        decl = ctx.declaration(v, fn)
        if decl is not None and decl.is_array and not _known_extent(ctx, fn, v):
            return None, f"cannot privatize {v}"
    d.private = inner_private
    d.lastprivate = sorted(v for v in priv.lastprivate() if v not in red_vars)
    by_op = {}
    for v, op in sorted(red_vars.items()):
        by_op.setdefault(OMP_REDUCTION_OPS[op], []).append(v)
    d.reductions = sorted(by_op.items())
    return d, None


def parallelize_loop(nest: n.For, ctx: Context, apply: bool = True) -> list:
    """Place ``parallel for`` on the outermost loops of ``nest`` that qualify.

    A loop that fails is replaced by its child loops, so an inner loop is only
    parallelized when every enclosing level was refused.  Returns the
    placements; raises NoParallelLoop with per-level reasons when none exists.
    """
    fn = ctx.function_of(nest)
    placements, reasons = [], {}

    def visit(loop, depth, label):
        d, why = analyze_level(loop, ctx, fn)
        if d is not None:
            placements.append(Placement(loop, d, depth))
            return
        reasons[label] = why
        for k, child in enumerate(child_loops(loop)):
            visit(child, depth + 1, f"{label}.{k}")

    visit(nest, 0, "L0")
    if not placements:
        raise NoParallelLoop(reasons)
    if apply:
        for p in placements:
            p.loop.omp = p.directive
    return placements
