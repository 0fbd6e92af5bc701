"""Parallel region formation and barrier elimination."""

from __future__ import annotations

from ..analysis.conflicts import cross_loop_conflicts
from ..frontend import nodes as n
from .common import Context, FewerThanTwo, NotAdjacent


def _is_parallel_for(s):
    return isinstance(s, n.For) and s.omp is not None and s.omp.kind == "parallel_for"


def form_parallel_region(block: n.Compound, loops: list) -> n.Compound:
    """Merge consecutive ``parallel for`` items of ``block`` into one region.

    Private lists shared by every loop move to the region; all other clauses
    stay on the loops, which become worksharing ``for`` constructs.
    """
    if len(loops) < 2:
        raise FewerThanTwo(f"{len(loops)} loop(s)")
    try:
        pos = [next(k for k, it in enumerate(block.items) if it is loop) for loop in loops]
    except StopIteration:
        raise NotAdjacent("loop is not an item of the block") from None
    if pos != list(range(pos[0], pos[0] + len(loops))):
        raise NotAdjacent("statements intervene between the loops")
    for loop in loops:
        if not _is_parallel_for(loop):
            raise NotAdjacent("item is not a parallel loop")
        if loop.omp.if_condition is not None:
            raise NotAdjacent("loop carries an if clause")
    common = set(loops[0].omp.private)
    for loop in loops[1:]:
        common &= set(loop.omp.private)
    region = n.OmpDirective("parallel", private=sorted(common))
    for loop in loops:
        d = loop.omp.copy(kind="for")
        d.private = [v for v in d.private if v not in common]
        loop.omp = d
    stmt = n.Compound(list(loops), omp=region, span=loops[0].span)
    block.items[pos[0]:pos[-1] + 1] = [stmt]
    return stmt


def adjacent_runs(block: n.Compound) -> list:
    """Maximal runs of consecutive ``parallel for`` items in ``block``."""
    runs, cur = [], []
    for it in block.items:
        if _is_parallel_for(it) and it.omp.if_condition is None:
            cur.append(it)
            continue
        if cur:
            runs.append(cur)
        cur = []
    if cur:
        runs.append(cur)
    return runs


def _barrier_free_after(items, k):
    """Items following ``items[k]`` up to the next barrier."""
    out = []
    for it in items[k + 1:]:
        out.append(it)
        if isinstance(it, n.OmpStmt) and it.omp.kind == "barrier":
            break
        if isinstance(it, n.Stmt) and it.omp is not None and it.omp.kind in ("for", "single") and not it.omp.nowait:
            break
    return out


def insert_nowait(region: n.Stmt, ctx: Context = None) -> list:
    """Add ``nowait`` to worksharing loops of ``region`` whose barrier is not
    needed; returns the loops that received one.

    A loop qualifies when every construct between it and the next barrier is a
    worksharing loop that cannot conflict with it.  The region's closing
    barrier makes the final construct always qualify.
    """
    if region.omp is None or region.omp.kind != "parallel" or not isinstance(region, n.Compound):
        return []
    items = region.items
    fn = ctx.function_of(region) if ctx is not None else None
    arrays = ctx.arrays(fn) if ctx is not None else None
    summaries = ctx.summaries if ctx is not None else None
    pure = ctx.pure_functions if ctx is not None else None
    added = []
    # later decisions feed earlier ones, so walk backwards
    for k in range(len(items) - 1, -1, -1):
        loop = items[k]
        if not (isinstance(loop, n.For) and loop.omp is not None and loop.omp.kind == "for"):
            continue
        if loop.omp.nowait:
            continue
        ok = True
        for later in _barrier_free_after(items, k):
            if isinstance(later, n.OmpStmt) and later.omp.kind == "barrier":
                break
            if not (isinstance(later, n.For) and later.omp is not None and later.omp.kind == "for"):
                ok = False
                break
            kwargs = {"region": region.omp, "summaries": summaries, "arrays": arrays}
            if pure is not None:
                kwargs["pure_functions"] = pure
            if cross_loop_conflicts(loop, later, **kwargs).conflicting:
                ok = False
                break
        if ok:
            loop.omp.nowait = True
            added.append(loop)
    added.reverse()
    return added
