"""Source-level inline expansion of calls to functions defined in the unit."""

from __future__ import annotations

import copy

from ..frontend import nodes as n
from ..frontend.loops import referenced_names
from .sideeffects import build_callgraph


class InlineRefused(Exception):
    REASONS = ("recursive", "variadic", "io", "undefined", "unsupported")

    def __init__(self, reason, detail=""):
        self.reason = reason
        self.detail = detail
        super().__init__(f"{reason}: {detail}" if detail else reason)


def _locate(root, target):
    """Pre-order position of ``target`` under ``root``."""
    for k, node in enumerate(root.walk()):
        if node is target:
            return k
    return None


def _nth(root, k):
    for j, node in enumerate(root.walk()):
        if j == k:
            return node
    raise IndexError(k)


def _parent_chain(root, target):
    if root is target:
        return [root]
    for c in root.children():
        p = _parent_chain(c, target)
        if p is not None:
            return [root] + p
    return None


def _all_names(unit):
    names = set()
    for x in unit.walk():
        if isinstance(x, n.Id):
            names.add(x.name)
        elif isinstance(x, n.ArrayRef):
            names.add(x.base)
        elif isinstance(x, n.VarDecl):
            names.add(x.name)
        elif isinstance(x, n.FunctionDef):
            names.add(x.name)
    return names


class _Renamer:
    def __init__(self, mapping):
        self.mapping = mapping

    def apply(self, node):
        for x in node.walk():
            if isinstance(x, n.Id) and x.name in self.mapping:
                x.name = self.mapping[x.name]
            elif isinstance(x, n.ArrayRef) and x.base in self.mapping:
                x.base = self.mapping[x.base]
            elif isinstance(x, n.VarDecl) and x.name in self.mapping:
                x.name = self.mapping[x.name]
            elif isinstance(x, n.OmpDirective):
                for clause in ("private", "firstprivate", "lastprivate", "shared"):
                    setattr(x, clause, [self.mapping.get(v, v) for v in getattr(x, clause)])
                x.reductions = [(op, [self.mapping.get(v, v) for v in vs]) for op, vs in x.reductions]


def _check_callee(unit, callee_name, cg):
    fn = unit.function(callee_name)
    if fn is None:
        raise InlineRefused("undefined", callee_name)
    if fn.variadic:
        raise InlineRefused("variadic", callee_name)
    if cg.recursive(callee_name):
        raise InlineRefused("recursive", callee_name)
    s = cg.summary(callee_name)
    if s.classification == "io":
        raise InlineRefused("io", callee_name)
    if s.classification == "unknown":
        raise InlineRefused("unsupported", f"{callee_name} has unknown side effects")
    body = fn.body.items
    for k, x in enumerate(fn.body.walk()):
        if isinstance(x, n.Return) and not (body and x is body[-1]):
            raise InlineRefused("unsupported", "return before the end of the callee")
        if isinstance(x, n.DeclStmt) and any(d.storage == "static" for d in x.decls):
            raise InlineRefused("unsupported", "callee has static locals")
        if isinstance(x, n.OmpStmt) or getattr(x, "omp", None) is not None:
            raise InlineRefused("unsupported", "callee contains OpenMP directives")
    return fn


def inline_expand(ast: n.TranslationUnit, callsite: n.Call, pure_functions=None) -> n.TranslationUnit:
    """Return a copy of ``ast`` with ``callsite`` replaced by the callee body.

    Supported call shapes are ``f(...);`` and ``x = f(...);``.  Scalar
    parameters become initialized locals; array parameters are replaced by the
    argument name, or by a pointer local for one-dimensional pointer params.
    """
    cg = build_callgraph(ast) if pure_functions is None else build_callgraph(ast, pure_functions)
    fn = _check_callee(ast, callsite.func, cg)
    pos = _locate(ast, callsite)
    if pos is None:
        raise InlineRefused("unsupported", "call site not found in the unit")
    new = copy.deepcopy(ast)
    call = _nth(new, pos)
    chain = _parent_chain(new, call)
    stmt = next((x for x in reversed(chain) if isinstance(x, n.Stmt)), None)
    if not isinstance(stmt, n.ExprStmt) or stmt.omp is not None:
        raise InlineRefused("unsupported", "call is not a statement")
    if stmt.expr is call:
        result_target = None
    elif isinstance(stmt.expr, n.Assign) and stmt.expr.op == "=" and stmt.expr.value is call:
        result_target = stmt.expr.target
    else:
        raise InlineRefused("unsupported", "call nested inside an expression")
    if len(call.args) != len(fn.params):
        raise InlineRefused("unsupported", "argument count mismatch")
    holder = chain[chain.index(stmt) - 1]
    caller = next(x for x in chain if isinstance(x, n.FunctionDef))

    # globals used by the callee must not be shadowed at the call site
    callee_locals = {p.name for p in fn.params} | {
        d.name for x in fn.body.walk() if isinstance(x, n.DeclStmt) for d in x.decls
    }
    callee_free = referenced_names(fn.body) - callee_locals
    caller_locals = {p.name for p in caller.params} | {
        d.name for x in caller.body.walk() if isinstance(x, n.DeclStmt) for d in x.decls
    }
    clash = callee_free & caller_locals
    if clash:
        raise InlineRefused("unsupported", f"callee global(s) shadowed at call site: {sorted(clash)}")

    taken = _all_names(new)
    mapping = {}

    def fresh(name):
        k = 0
        while True:
            cand = f"{name}_{fn.name}" + (f"_{k}" if k else "")
            if cand not in taken:
                taken.add(cand)
                return cand
            k += 1

    body = copy.deepcopy(fn.body)
    prologue = []
    for p, a in zip(fn.params, call.args):
        if p.is_array:
            if isinstance(a, n.Id):
                mapping[p.name] = a.name
                continue
            if p.pointer == 1 and not p.dims or (len(p.dims) == 1 and not p.pointer):
                name = fresh(p.name)
                mapping[p.name] = name
                prologue.append(n.DeclStmt([n.VarDecl(name, p.type, "local", 1, [], copy.deepcopy(a))]))
                continue
            raise InlineRefused("unsupported", f"array argument for {p.name}")
        name = fresh(p.name)
        mapping[p.name] = name
        prologue.append(n.DeclStmt([n.VarDecl(name, p.type, "local", 0, [], copy.deepcopy(a))]))
    for x in body.walk():
        if isinstance(x, n.DeclStmt):
            for d in x.decls:
                if d.name not in mapping:
                    mapping[d.name] = fresh(d.name)
    # parameters substituted by argument names must not be captured by renamed locals
    _Renamer(mapping).apply(body)
    items = list(body.items)
    if items and isinstance(items[-1], n.Return):
        ret = items.pop()
        if ret.value is not None and result_target is not None:
            items.append(n.ExprStmt(n.Assign("=", copy.deepcopy(result_target), ret.value)))
        elif ret.value is not None and _has_effects(ret.value):
            items.append(n.ExprStmt(ret.value))
    elif result_target is not None:
        raise InlineRefused("unsupported", "callee returns no value")
    block = n.Compound(prologue + items, span=stmt.span)
    _replace_child(holder, stmt, block)
    return new


def _has_effects(e):
    return any(
        isinstance(x, (n.Assign, n.Call)) or (isinstance(x, (n.Unary, n.Postfix)) and x.op in ("++", "--"))
        for x in e.walk()
    )


def _replace_child(parent, old, new):
    from dataclasses import fields

    for f in fields(parent):
        v = getattr(parent, f.name)
        if v is old:
            setattr(parent, f.name, new)
            return
        if isinstance(v, list):
            for k, item in enumerate(v):
                if item is old:
                    v[k] = new
                    return
    raise ValueError("child not found")


def inlinable_calls(ast: n.TranslationUnit, node, pure_functions=None):
    """Call sites under ``node`` that inline_expand would accept, in source order."""
    cg = build_callgraph(ast) if pure_functions is None else build_callgraph(ast, pure_functions)
    out = []
    for x in node.walk():
        if isinstance(x, n.Call) and ast.function(x.func) is not None:
            try:
                _check_callee(ast, x.func, cg)
            except InlineRefused:
                continue
            out.append(x)
    return out
