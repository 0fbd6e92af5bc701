"""Clause-level edits: scheduling and conditional parallelization."""

from __future__ import annotations

from ..costmodel import DEFAULT_THRESHOLD, Decision, ImbalanceSignal, WorkloadEstimate, is_profitable
from ..frontend import nodes as n
from ..frontend.parser import parse_expression
from .common import Context, enclosing_region, parent_of


def apply_schedule(loop: n.For, signal: ImbalanceSignal, kind: str = "dynamic", ctx: Context = None) -> bool:
    """Give a parallelized loop ``schedule(kind)`` when ``signal`` is set.

    Loops in a region that relies on nowait keep their static schedule, since
    nowait is only sound when neighbouring loops split iterations identically.
    """
    if kind not in ("dynamic", "guided"):
        raise ValueError(f"unsupported schedule kind {kind!r}")
    if not signal or loop.omp is None or not loop.omp.is_loop or loop.omp.schedule is not None:
        return False
    if loop.omp.nowait:
        return False
    region = enclosing_region(ctx.unit, loop) if ctx is not None else None
    if region is not None and any(
        isinstance(x, n.Stmt) and x.omp is not None and x.omp.nowait for x in region.walk()
    ):
        return False
    loop.omp.schedule = (kind, None)
    return True


def _declared_inside(stmt):
    return {d.name for x in stmt.walk() if isinstance(x, n.DeclStmt) for d in x.decls}


def serialize(construct: n.Stmt, ctx: Context = None):
    """Drop the team-spawning directive of ``construct`` and every worksharing
    directive or barrier inside it."""
    construct.omp = None
    for x in construct.walk():
        if isinstance(x, n.Stmt) and x.omp is not None and x.omp.kind in ("for", "single"):
            x.omp = None
        if isinstance(x, n.Compound):
            x.items = [it for it in x.items if not (isinstance(it, n.OmpStmt) and it.omp.kind == "barrier")]
    if ctx is None or not isinstance(construct, n.Compound):
        return
    if any(isinstance(it, n.DeclStmt) for it in construct.items):
        return
    hit = parent_of(ctx.unit, construct)
    if hit is not None and isinstance(hit[0], n.Compound) and hit[2] is not None:
        parent, _, k = hit
        parent.items[k:k + 1] = construct.items


def conditional_parallelize(construct: n.Stmt, estimate: WorkloadEstimate, threshold: int = DEFAULT_THRESHOLD, ctx: Context = None) -> Decision:
    """Keep, remove or guard the parallel construct according to its workload."""
    if construct.omp is None or not construct.omp.spawns_team:
        raise ValueError("construct is not parallel")
    decision = is_profitable(estimate, threshold)
    if decision.kind == "serial":
        serialize(construct, ctx)
        return decision
    if decision.kind == "conditional":
        if construct.omp.if_condition is not None:
            return decision
        if estimate.expr.atoms() & _declared_inside(construct):
            # the bound is only known inside the construct
            return Decision("parallel")
        construct.omp.if_condition = parse_expression(decision.condition)
    return decision
