"""Liveness of static/global variables across parallel regions."""

from __future__ import annotations

from ..frontend import nodes as n
from ..frontend.loops import referenced_names
from .privatization import MustDef, _covering_writes


def parallel_regions(unit: n.TranslationUnit):
    """(function, statement) for every statement that spawns a team."""
    out = []
    for fn in unit.functions():
        for x in fn.body.walk():
            if isinstance(x, n.Stmt) and x.omp is not None and x.omp.spawns_team:
                out.append((fn, x))
    return out


def _functions_reaching(unit, var):
    """Functions that access ``var`` directly or through their callees."""
    direct = {fn.name for fn in unit.functions() if var in referenced_names(fn.body)}
    calls = {fn.name: {c.func for c in fn.body.walk() if isinstance(c, n.Call)} for fn in unit.functions()}
    changed = True
    while changed:
        changed = False
        for f, cs in calls.items():
            if f not in direct and cs & direct:
                direct.add(f)
                changed = True
    return direct


def _global_dims(unit, var):
    for d in unit.global_decls().values():
        if d.name == var:
            return d.dims
    for fn in unit.functions():
        for x in fn.body.walk():
            if isinstance(x, n.DeclStmt):
                for d in x.decls:
                    if d.name == var and d.storage == "static":
                        return d.dims
    return None


def region_exposes(region: n.Stmt, var: str, unit: n.TranslationUnit) -> bool:
    """True when one thread executing ``region`` may read ``var`` before writing it."""
    dims = _global_dims(unit, var)
    via_calls = _functions_reaching(unit, var)
    md = MustDef()
    items = region.items if isinstance(region, n.Compound) else [region]
    defined = set()
    for item in items:
        calls = {c.func for c in item.walk() if isinstance(c, n.Call)}
        if var not in defined and calls & via_calls:
            return True
        cov = _covering_writes(item, {var: dims} if dims else {})
        if dims:
            if var in referenced_names(item) and var not in cov and var not in defined:
                return True
            defined |= cov
            continue
        defined = md.stmt(item, defined)
        if var in md.exposed:
            return True
    return False


def live_across_regions(ast: n.TranslationUnit, var: str) -> bool:
    """True when a per-thread value of ``var`` may flow from one parallel
    region into a later one (or out to serial code reading it afterwards)."""
    regions = parallel_regions(ast)
    using = [(fn, r) for fn, r in regions if var in referenced_names(r) or _calls_user(ast, r, var)]
    if not using:
        return False
    writers = [r for _, r in using if _writes(r, var, ast)]
    if not writers:
        return False
    for _, r in using:
        if region_exposes(r, var, ast):
            return True
    # serial code reading the variable sees the master thread's last value
    inside = set()
    for _, r in regions:
        inside |= {id(x) for x in r.walk()}
    for fn in ast.functions():
        for x in fn.body.walk():
            if id(x) not in inside and _reads(x, var):
                return True
    return False


def _reads(node, var):
    """True when expression statement ``node`` reads ``var`` (plain stores excluded)."""
    if not isinstance(node, (n.ExprStmt, n.If, n.For, n.While, n.Return, n.DeclStmt)):
        return False
    exprs = []
    if isinstance(node, n.ExprStmt):
        exprs = [node.expr]
    elif isinstance(node, (n.If, n.While)):
        exprs = [node.cond]
    elif isinstance(node, n.For):
        exprs = [e for e in (node.init, node.cond, node.step) if isinstance(e, n.Expr)]
    elif isinstance(node, n.Return):
        exprs = [node.value] if node.value is not None else []
    else:
        exprs = [d.init for d in node.decls if d.init is not None]
    for e in exprs:
        skip = set()
        for x in e.walk():
            if isinstance(x, n.Assign) and x.op == "=":
                skip.add(id(x.target))
        for x in e.walk():
            if id(x) in skip:
                continue
            if isinstance(x, n.Id) and x.name == var:
                return True
            if isinstance(x, n.ArrayRef) and x.base == var:
                return True
    return False


def _calls_user(unit, region, var):
    users = _functions_reaching(unit, var)
    return any(isinstance(c, n.Call) and c.func in users for c in region.walk())


def _writes(region, var, unit):
    from ..frontend.loops import written_names

    if var in written_names(region):
        return True
    return _calls_user(unit, region, var)
