"""Scalar and array privatization for one loop."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..frontend import nodes as n
from ..frontend.loops import loop_header, referenced_names
from ..symbolic import to_poly

CLASSES = ("private", "firstprivate", "lastprivate", "shared", "threadprivate_candidate")


@dataclass
class PrivatizationResult:
    classes: dict = field(default_factory=dict)

    def of(self, var):
        return self.classes.get(var, "shared")

    def names(self, cls):
        return sorted(v for v, c in self.classes.items() if c == cls)

    def private(self):
        return self.names("private")

    def lastprivate(self):
        return self.names("lastprivate")

    def shared(self):
        return self.names("shared")

    def privatized(self):
        return {v for v, c in self.classes.items() if c in ("private", "lastprivate", "threadprivate_candidate")}


class MustDef:
    """Upward-exposed reads and must-defined scalars over structured code.

    Writes inside loops, and reads of a name followed by its redefinition, are
    handled conservatively: a write only counts as definite when it happens on
    every path, and loop bodies may run zero times.
    """

    def __init__(self, arrays=()):
        self.arrays = set(arrays)
        self.exposed = set()
        self.written = set()
        self.local = set()

    def read(self, name, defined):
        if name not in defined and name not in self.local:
            self.exposed.add(name)

    def expr(self, e, defined):
        """Process ``e``; returns the set of names it definitely writes."""
        if e is None:
            return set()
        if isinstance(e, n.Id):
            self.read(e.name, defined)
            return set()
        if isinstance(e, n.ArrayRef):
            for s in e.subscripts:
                self.expr(s, defined)
            self.read(e.base, defined)
            return set()
        if isinstance(e, n.Assign):
            defs = self.expr(e.value, defined)
            target = e.target
            if isinstance(target, n.Id):
                if e.op != "=":
                    self.read(target.name, defined | defs)
                self.written.add(target.name)
                return defs | {target.name}
            if isinstance(target, n.ArrayRef):
                for s in target.subscripts:
                    self.expr(s, defined | defs)
                if e.op != "=":
                    self.read(target.base, defined | defs)
                self.written.add(target.base)
                return defs
            self.expr(target, defined | defs)
            return defs
        if isinstance(e, (n.Unary, n.Postfix)) and e.op in ("++", "--"):
            t = e.operand
            if isinstance(t, n.Id):
                self.read(t.name, defined)
                self.written.add(t.name)
                return {t.name}
            self.expr(t, defined)
            if isinstance(t, n.ArrayRef):
                self.written.add(t.base)
            return set()
        if isinstance(e, n.Unary) and e.op == "&":
            # the callee may read or write through the address
            for name in referenced_names(e.operand):
                self.read(name, defined)
                self.written.add(name)
            return set()
        if isinstance(e, n.Cond):
            defs = self.expr(e.test, defined)
            d1 = self.expr(e.then, defined | defs)
            d2 = self.expr(e.orelse, defined | defs)
            return defs | (d1 & d2)
        if isinstance(e, n.Binary) and e.op in ("&&", "||"):
            defs = self.expr(e.left, defined)
            self.expr(e.right, defined | defs)
            return defs
        defs = set()
        for c in e.children():
            if isinstance(c, n.Expr):
                defs |= self.expr(c, defined | defs)
        return defs

    def stmt(self, s, defined):
        """Returns the names definitely written after ``s`` executes."""
        if isinstance(s, n.ExprStmt):
            return defined | self.expr(s.expr, defined)
        if isinstance(s, n.DeclStmt):
            out = set(defined)
            for d in s.decls:
                self.local.add(d.name)
                if d.init is not None:
                    out |= self.expr(d.init, out)
            return out
        if isinstance(s, n.Compound):
            out = set(defined)
            for item in s.items:
                out = self.stmt(item, out)
            return out
        if isinstance(s, n.If):
            d0 = defined | self.expr(s.cond, defined)
            d1 = self.stmt(s.then, d0)
            d2 = self.stmt(s.orelse, d0) if s.orelse is not None else d0
            return d0 | (d1 & d2)
        if isinstance(s, n.For):
            if isinstance(s.init, n.DeclStmt):
                d0 = self.stmt(s.init, defined)
            else:
                d0 = defined | self.expr(s.init, defined)
            d0 = d0 | self.expr(s.cond, d0)
            inner = self.stmt(s.body, d0)
            self.expr(s.step, inner)
            return d0
        if isinstance(s, n.While):
            d0 = defined | self.expr(s.cond, defined)
            self.stmt(s.body, d0)
            return d0
        if isinstance(s, n.Return):
            self.expr(s.value, defined)
            return defined
        return defined


def _covering_writes(stmt, arrays_dims):
    """Arrays fully overwritten by ``stmt`` when it is a constant covering loop nest."""
    out = set()
    if not isinstance(stmt, n.For):
        return out
    headers = []
    s = stmt
    while isinstance(s, n.For):
        h = loop_header(s)
        if h is None or not h.canonical or h.stride_value != 1 or h.lower_poly != 0:
            return out
        headers.append(h)
        body = s.body
        if isinstance(body, n.Compound) and len(body.items) == 1 and isinstance(body.items[0], n.For):
            s = body.items[0]
        elif isinstance(body, n.For):
            s = body
        else:
            break
    items = body.items if isinstance(body, n.Compound) else [body]
    indices = [h.index for h in headers]
    for item in items:
        if not (isinstance(item, n.ExprStmt) and isinstance(item.expr, n.Assign) and item.expr.op == "="):
            continue
        t = item.expr.target
        if not isinstance(t, n.ArrayRef) or t.base not in arrays_dims:
            continue
        dims = arrays_dims[t.base]
        if len(t.subscripts) != len(dims) or len(dims) != len(headers):
            continue
        ok = all(
            isinstance(sub, n.Id) and sub.name == idx and dim is not None and to_poly(dim) == h.upper_poly
            for sub, idx, dim, h in zip(t.subscripts, indices, dims, headers)
        )
        if ok and not any(
            isinstance(x, n.ArrayRef) and x.base == t.base for x in item.expr.value.walk()
        ):
            out.add(t.base)
    return out


def _array_dims(loop, context):
    dims = {}
    if context is None:
        return dims
    unit = context if isinstance(context, n.TranslationUnit) else None
    fn = context if isinstance(context, n.FunctionDef) else None
    if unit is not None:
        for d in unit.global_decls().values():
            if d.dims:
                dims[d.name] = d.dims
        fn = fn or _enclosing_function(unit, loop)
    if fn is not None:
        for p in fn.params:
            if p.dims:
                dims.pop(p.name, None)
        for node in fn.body.walk():
            if isinstance(node, n.DeclStmt):
                for d in node.decls:
                    if d.dims:
                        dims[d.name] = d.dims
    return dims


def _enclosing_function(unit, node):
    for fn in unit.functions():
        if any(x is node for x in fn.body.walk()):
            return fn
    return None


def declared_threadprivate(unit):
    out = set()
    if unit is None:
        return out
    for x in unit.walk():
        if isinstance(x, n.OmpStmt) and x.omp.kind == "threadprivate":
            out.update(x.omp.variables)
    return out


def live_after(fn: n.FunctionDef, loop: n.For, unit=None) -> set:
    """Names possibly read after ``loop`` finishes before being redefined.

    Globals, statics and array parameters always escape.  Enclosing loops keep
    everything their bodies expose live, since another iteration may follow.
    """
    local = {p.name for p in fn.params if not p.is_array}
    for x in fn.body.walk():
        if isinstance(x, n.DeclStmt):
            local.update(d.name for d in x.decls if d.storage == "local")
    everything = referenced_names(fn.body)
    escaping = {v for v in everything if v not in local}
    path = _path_to(fn.body, loop)
    if path is None:
        return escaping | everything
    live = set(escaping)
    for k in range(len(path) - 1):
        anc, child = path[k], path[k + 1]
        if isinstance(anc, n.Compound):
            pos = next(i for i, it in enumerate(anc.items) if it is child)
            md = MustDef()
            defined = set()
            for later in anc.items[pos + 1:]:
                defined = md.stmt(later, defined)
            live = md.exposed | (live - defined)
        elif isinstance(anc, (n.For, n.While)):
            md = MustDef()
            md.stmt(anc, set())
            live = live | md.exposed | referenced_names(anc.cond if anc.cond is not None else n.Empty())
            if isinstance(anc, n.For) and anc.step is not None:
                live |= referenced_names(anc.step)
    return live | escaping


def _path_to(root, target):
    if root is target:
        return [root]
    for c in root.children():
        if isinstance(c, n.Stmt):
            p = _path_to(c, target)
            if p is not None:
                return [root] + p
    return None


def find_private(loop: n.For, context=None, live_out=None) -> PrivatizationResult:
    """Classify every variable accessed in ``loop``.

    ``context`` is the enclosing FunctionDef or TranslationUnit; it supplies array
    extents, threadprivate declarations and liveness after the loop.  Without a
    context nothing is considered live after the loop unless ``live_out`` says so.
    """
    unit = context if isinstance(context, n.TranslationUnit) else None
    fn = context if isinstance(context, n.FunctionDef) else None
    if unit is not None and fn is None:
        fn = _enclosing_function(unit, loop)
    if live_out is None:
        live_out = live_after(fn, loop, unit) if fn is not None else set()
    dims = _array_dims(loop, unit or fn)
    tp = declared_threadprivate(unit)
    h = loop_header(loop)
    arrays = {x.base for x in loop.walk() if isinstance(x, n.ArrayRef)} | set(dims)

    md = MustDef(arrays)
    start = {h.index} if h else set()
    # arrays fully overwritten before any read count as defined from there on
    items = loop.body.items if isinstance(loop.body, n.Compound) else [loop.body]
    defined = set(start)
    covered = set()
    for item in items:
        cov = _covering_writes(item, dims)
        defined = md.stmt(item, defined)
        covered |= cov - md.exposed
        defined |= cov - md.exposed
    end_defined = defined
    result = PrivatizationResult()
    names = (referenced_names(loop.body)) - md.local
    for v in sorted(names):
        if h and v == h.index:
            result.classes[v] = "private"
            continue
        if v not in md.written:
            result.classes[v] = "shared"
            continue
        if v in arrays and v not in covered:
            result.classes[v] = "shared"
            continue
        if v in md.exposed:
            result.classes[v] = "shared"
            continue
        if v in tp:
            result.classes[v] = "threadprivate_candidate"
        elif v in live_out:
            result.classes[v] = "lastprivate" if v in end_defined else "shared"
        else:
            result.classes[v] = "private"
    return result
