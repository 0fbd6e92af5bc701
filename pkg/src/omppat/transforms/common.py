"""Shared plumbing for the rewrite passes."""

from __future__ import annotations

import copy
from dataclasses import dataclass, field, fields
from typing import Optional

from ..analysis.accesses import DEFAULT_PURE
from ..analysis.sideeffects import build_callgraph
from ..frontend import nodes as n
from ..frontend.loops import SectionId, top_level_loops


class TransformError(Exception):
    """Base class for refusals raised by individual passes."""

    reason = "refused"

    def __init__(self, detail=""):
        self.detail = detail
        super().__init__(f"{self.reason}: {detail}" if detail else self.reason)


class NoParallelLoop(TransformError):
    reason = "no parallelizable loop"

    def __init__(self, reasons):
        self.reasons = dict(reasons)
        super().__init__("; ".join(f"{k}: {v}" for k, v in self.reasons.items()))


class NotAdjacent(TransformError):
    reason = "loops are not adjacent"


class FewerThanTwo(TransformError):
    reason = "fewer than two parallel loops"


class NotAnArrayReduction(TransformError):
    reason = "not an array reduction"


class ThreadprivateRefused(TransformError):
    reason = "threadprivate conversion refused"

    def __init__(self, var, detail=""):
        self.var = var
        super().__init__(f"{var}{': ' + detail if detail else ''}")


class PersistsAcrossRegions(ThreadprivateRefused):
    reason = "value persists across regions"


class NotStaticOrGlobal(ThreadprivateRefused):
    reason = "not a static or global variable"


@dataclass
class Context:
    """Unit-wide facts the passes consult."""

    unit: n.TranslationUnit
    pure_functions: frozenset = DEFAULT_PURE
    callgraph: object = None
    summaries: dict = field(default_factory=dict)

    def __post_init__(self):
        self.refresh()

    def refresh(self):
        self.callgraph = build_callgraph(self.unit, self.pure_functions)
        self.summaries = self.callgraph.summaries()

    def function_of(self, node) -> Optional[n.FunctionDef]:
        for fn in self.unit.functions():
            if any(x is node for x in fn.body.walk()):
                return fn
        return None

    def declaration(self, name, fn=None) -> Optional[n.VarDecl]:
        if fn is not None:
            for x in fn.body.walk():
                if isinstance(x, n.DeclStmt):
                    for d in x.decls:
                        if d.name == name:
                            return d
            for p in fn.params:
                if p.name == name:
                    return p
        return self.unit.global_decls().get(name)

    def arrays(self, fn=None) -> set:
        out = {d.name for d in self.unit.global_decls().values() if d.is_array}
        if fn is not None:
            out |= {p.name for p in fn.params if p.is_array}
            for x in fn.body.walk():
                if isinstance(x, n.DeclStmt):
                    out.update(d.name for d in x.decls if d.is_array)
        return out

    def section_of(self, node) -> str:
        for fn in self.unit.functions():
            hits = [k for k, (nest, _) in enumerate(top_level_loops(fn)) if any(x is node for x in nest.walk())]
            if hits:
                return str(SectionId(fn.name, hits[0]))
            inside = [k for k, (nest, _) in enumerate(top_level_loops(fn)) if any(x is nest for x in node.walk())]
            if inside:
                return str(SectionId(fn.name, inside[0], inside[-1]))
            if any(x is node for x in fn.body.walk()):
                return fn.name
        return "-"

    def fresh_name(self, base: str) -> str:
        taken = names_in(self.unit)
        if base not in taken:
            return base
        k = 1
        while f"{base}{k}" in taken:
            k += 1
        return f"{base}{k}"

    def ensure_include(self, header: str):
        line = f"#include <{header}>"
        if any(isinstance(x, n.PPLine) and x.text.strip() == line for x in self.unit.items):
            return
        pos = 0
        for k, x in enumerate(self.unit.items):
            if isinstance(x, n.PPLine) and x.text.lstrip().startswith("#include"):
                pos = k + 1
        self.unit.items.insert(pos, n.PPLine(line))


def names_in(node) -> set:
    out = set()
    for x in node.walk():
        if isinstance(x, n.Id):
            out.add(x.name)
        elif isinstance(x, n.ArrayRef):
            out.add(x.base)
        elif isinstance(x, (n.VarDecl, n.FunctionDef, n.Typedef)):
            out.add(x.name)
        elif isinstance(x, n.PPLine) and x.text.lstrip().startswith("#define"):
            parts = x.text.split()
            if len(parts) > 1:
                out.add(parts[1].split("(")[0])
    return out


def parent_of(root, target):
    """(parent node, field name, list index or None) holding ``target``."""
    for node in root.walk():
        for f in fields(node):
            v = getattr(node, f.name)
            if v is target:
                return node, f.name, None
            if isinstance(v, list):
                for k, item in enumerate(v):
                    if item is target:
                        return node, f.name, k
    return None


def replace_node(root, old, new):
    hit = parent_of(root, old)
    if hit is None:
        raise ValueError("node not found")
    node, name, k = hit
    if k is None:
        setattr(node, name, new)
    else:
        getattr(node, name)[k] = new


def enclosing_region(root, node):
    """Innermost statement spawning a team that contains ``node`` (excluding itself)."""
    best = None
    for x in root.walk():
        if x is node or not isinstance(x, n.Stmt) or x.omp is None or not x.omp.spawns_team:
            continue
        if any(y is node for y in x.walk()):
            best = x
    return best


def in_region(root, node) -> bool:
    return enclosing_region(root, node) is not None


def parallel_constructs(unit):
    """Outermost team-spawning statements, in source order."""
    out = []

    def visit(x):
        if isinstance(x, n.Stmt) and x.omp is not None and x.omp.spawns_team:
            out.append(x)
            return
        for c in x.children():
            visit(c)

    visit(unit)
    return out


def strip_directives(unit: n.TranslationUnit) -> n.TranslationUnit:
    """Copy of ``unit`` without OpenMP: directives dropped, standalone pragmas
    removed and declaration-free nested blocks spliced into their parent."""
    out = copy.deepcopy(unit)
    for x in out.walk():
        if isinstance(x, n.Stmt):
            x.omp = None
    out.items = [x for x in out.items if not isinstance(x, n.OmpStmt)]

    def flatten(items):
        res = []
        for it in items:
            if isinstance(it, n.OmpStmt):
                continue
            if isinstance(it, n.Compound) and not any(isinstance(c, n.DeclStmt) for c in it.items):
                res.extend(flatten(it.items))
            else:
                res.append(it)
        return res

    for x in list(out.walk()):
        if isinstance(x, n.Compound):
            x.items = flatten(x.items)
    # a lone statement left in a braced body compares equal to the unbraced form
    for x in out.walk():
        if isinstance(x, n.FunctionDef):
            continue
        for f in fields(x):
            v = getattr(x, f.name)
            if f.name in ("body", "then", "orelse") and isinstance(v, n.Compound) and len(v.items) == 1 and not isinstance(v.items[0], n.DeclStmt):
                setattr(x, f.name, v.items[0])
    return out
