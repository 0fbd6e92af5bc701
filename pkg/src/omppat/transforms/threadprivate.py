"""Conversion between threadprivate and region-private data."""

from __future__ import annotations

from ..analysis.liveness import _functions_reaching, _reads, live_across_regions, parallel_regions
from ..analysis.privatization import declared_threadprivate
from ..frontend import nodes as n
from ..frontend.loops import referenced_names
from .common import NotStaticOrGlobal, PersistsAcrossRegions, ThreadprivateRefused, parent_of

DIRECTIONS = ("to_loop_private", "to_threadprivate")


def _storage(ast, var):
    """('global', decl, None) / ('static', decl, block) / (kind, decl, None)."""
    g = ast.global_decls().get(var)
    if g is not None and g.storage != "extern":
        return "global", g, None
    for fn in ast.functions():
        for x in fn.body.walk():
            if isinstance(x, n.DeclStmt):
                for d in x.decls:
                    if d.name == var:
                        return ("static" if d.storage == "static" else d.storage), d, x
    return None, None, None


def _threadprivate_stmts(ast, var):
    out = []
    for x in ast.walk():
        if isinstance(x, n.OmpStmt) and x.omp.kind == "threadprivate" and var in x.omp.variables:
            out.append(x)
    return out


def _remove_stmt(ast, stmt):
    hit = parent_of(ast, stmt)
    if hit is None:
        return
    parent, name, k = hit
    del getattr(parent, name)[k]


def _add_clause(directive, clause, var):
    names = getattr(directive, clause)
    if var not in names:
        names.append(var)


def _serial_reads(ast, var):
    inside = set()
    for _, r in parallel_regions(ast):
        inside |= {id(x) for x in r.walk()}
    return any(id(x) not in inside and _reads(x, var) for fn in ast.functions() for x in fn.body.walk())


def to_loop_private(ast: n.TranslationUnit, var: str) -> list:
    if var not in declared_threadprivate(ast):
        raise ThreadprivateRefused(var, "not declared threadprivate")
    if live_across_regions(ast, var):
        raise PersistsAcrossRegions(var)
    reaching = _functions_reaching(ast, var)
    touched = []
    for _, region in parallel_regions(ast):
        direct = var in referenced_names(region)
        via_call = any(isinstance(c, n.Call) and c.func in reaching for c in region.walk())
        if via_call:
            raise ThreadprivateRefused(var, "accessed through a call inside a region")
        if direct:
            _add_clause(region.omp, "private", var)
            touched.append(region)
    for stmt in _threadprivate_stmts(ast, var):
        stmt.omp.variables = [v for v in stmt.omp.variables if v != var]
        if not stmt.omp.variables:
            _remove_stmt(ast, stmt)
    return touched


def _private_in(region, var):
    if region.omp.sharing_of(var) == "private":
        return True
    # or private on every worksharing loop that mentions it
    users = [
        x for x in region.walk() if isinstance(x, n.Stmt) and x is not region and var in referenced_names(x)
    ]
    loops = [x for x in region.walk() if isinstance(x, n.For) and x.omp is not None and x.omp.is_loop]
    if not loops:
        return False
    covered = set()
    for loop in loops:
        if loop.omp.sharing_of(var) == "private":
            covered |= {id(x) for x in loop.walk()}
    return all(id(u) in covered for u in users if not isinstance(u, n.Compound))


def to_threadprivate(ast: n.TranslationUnit, var: str) -> list:
    kind, decl, block = _storage(ast, var)
    if kind not in ("global", "static"):
        raise NotStaticOrGlobal(var)
    if var in declared_threadprivate(ast):
        return []
    reaching = _functions_reaching(ast, var)
    using = []
    for _, region in parallel_regions(ast):
        if var in referenced_names(region):
            if not _private_in(region, var):
                raise ThreadprivateRefused(var, "not private in every region using it")
            using.append(region)
        elif any(isinstance(c, n.Call) and c.func in reaching for c in region.walk()):
            raise ThreadprivateRefused(var, "accessed through a call inside a region")
    # the master thread's copy is the original, so serial readers would see it
    if _serial_reads(ast, var):
        raise PersistsAcrossRegions(var, "serial code reads it after a region")
    for region in using:
        for x in region.walk():
            if isinstance(x, n.Stmt) and x.omp is not None:
                x.omp.private = [v for v in x.omp.private if v != var]
    directive = n.OmpStmt(omp=n.OmpDirective("threadprivate", variables=[var]))
    holder = ast if kind == "global" else None
    if holder is not None:
        pos = next(k for k, it in enumerate(ast.items) if isinstance(it, n.DeclStmt) and decl in it.decls)
        ast.items.insert(pos + 1, directive)
    else:
        parent, name, k = parent_of(ast, block)
        getattr(parent, name).insert(k + 1, directive)
    return using


def convert_threadprivate(ast: n.TranslationUnit, vars, direction: str) -> list:
    """Rewrite each variable in ``vars``; returns the regions touched."""
    if direction not in DIRECTIONS:
        raise ValueError(f"unknown direction {direction!r}")
    fn = to_loop_private if direction == "to_loop_private" else to_threadprivate
    touched = []
    for var in vars:
        touched.extend(fn(ast, var))
    return touched


def candidates(ast: n.TranslationUnit, direction: str) -> list:
    """Variables the pipeline attempts to convert in ``direction``."""
    if direction == "to_loop_private":
        return sorted(declared_threadprivate(ast))
    names = set()
    for x in ast.walk():
        if isinstance(x, n.Stmt) and x.omp is not None and (x.omp.spawns_team or x.omp.kind == "for"):
            names.update(x.omp.private)
    out = []
    for v in sorted(names):
        kind, _, _ = _storage(ast, v)
        if kind in ("global", "static"):
            out.append(v)
    return out
